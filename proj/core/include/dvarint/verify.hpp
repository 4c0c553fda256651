#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dvarint/mechanics.hpp"

namespace dvarint {

/// A tangent direction over all window variables of one scheme step:
/// (p_k, q_k, p_{k+1}, q_{k+1}) in R^{4n} for the mechanics schemes.
using WindowVariation = Vec;

/// Discrete Euler-Lagrange 1-form of a scheme, evaluated on a window state
/// paired with a variation. Null for all variations exactly when the window
/// satisfies the scheme.
struct ELForm {
  Scheme scheme;
  int n = 0;            // configuration dimension; window size is 4n
  std::function<double(const Vec& window, const WindowVariation& xi)> evaluator;

  int window_size() const { return 4 * n; }
};

/// Per-step (or per-cell) residual values with summary statistics.
struct ResidualSeries {
  std::vector<double> values;
  double max_abs = 0.0;
  double mean = 0.0;
  double trend_slope = 0.0;  // least-squares linear trend per step

  static ResidualSeries from_values(std::vector<double> v);
};

/// Build the EL 1-form of a mechanics scheme (Canonical, Midpoint, Order4,
/// ExplicitEuler). Linearity in the variation is spot-checked on random
/// pairs at construction.
ELForm make_el_form(Scheme scheme, const HamiltonianSystem& H, double tau,
                    unsigned check_seed = 20230903u);

double el_form_value(const ELForm& form, const Vec& window, const WindowVariation& xi);

/// dE(xi, eta) = D_xi[E(eta)] - D_eta[E(xi)], with directional derivatives
/// over the window variables by central finite differences of the given step.
double el_form_exterior_derivative(const ELForm& form, const Vec& window,
                                   const WindowVariation& xi, const WindowVariation& eta,
                                   double fd_step);

/// Analytic variant for Canonical/Midpoint/Order4 (exact for quadratic H;
/// uses the system Hessian, whose symmetric contributions cancel).
double el_form_exterior_derivative_analytic(const ELForm& form, const HamiltonianSystem& H,
                                            const Vec& window, const WindowVariation& xi,
                                            const WindowVariation& eta, double tau);

/// dE(xi, eta) + [ω^{(k+1)}(xi, eta) - ω^{(k)}(xi, eta)]/tau, where ω^{(k)}
/// pairs the (p_k, q_k) sub-block through the symplectic area. Identically
/// zero on arbitrary window data, up to the finite-difference budget.
double cohomology_identity_residual(const ELForm& form, const Vec& window,
                                    const WindowVariation& xi, const WindowVariation& eta,
                                    double tau, double fd_step);

/// Analytic-mode variant of the identity residual.
double cohomology_identity_residual_analytic(const ELForm& form, const HamiltonianSystem& H,
                                             const Vec& window, const WindowVariation& xi,
                                             const WindowVariation& eta, double tau);

/// Step-to-step change of the symplectic area of the first two tangent
/// families: r_k = ω^{(k+1)}(xi, eta) - ω^{(k)}(xi, eta).
ResidualSeries symplectic_residual_series(const Trajectory& traj);

/// H(z_k) - H(z_0) along a trajectory.
ResidualSeries energy_series(const Trajectory& traj, const HamiltonianSystem& H);

/// Symplectic area ω^{(k)}(xi, eta) of the first two tangent families at
/// every node (the conserved quantity itself, for reporting).
std::vector<double> symplectic_area_series(const Trajectory& traj);

}  // namespace dvarint
