#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dvarint/grid.hpp"

namespace dvarint {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Phase-space point z = (p_1..p_n, q_1..q_n).
struct PhasePoint {
  Vec z;

  PhasePoint() = default;
  explicit PhasePoint(Vec z_) : z(std::move(z_)) {
    if (z.size() % 2 != 0) throw std::invalid_argument("PhasePoint: odd length");
  }
  static PhasePoint from_pq(const Vec& p, const Vec& q);

  int dim() const { return static_cast<int>(z.size()) / 2; }
  Vec p() const { return z.head(dim()); }
  Vec q() const { return z.tail(dim()); }
};

/// The fixed symplectic matrix in (p, q) ordering: J = [[0, I], [-I, 0]].
Mat symplectic_matrix(int n);

/// Evaluation of the 2-form (1/2) dz^T ∧ J dz on a pair of tangent vectors.
double symplectic_area(const Vec& xi, const Vec& eta);

/// Discrete Lagrangian L(q, v) with user-supplied gradients, where v stands
/// for the forward difference of q. Gradients are validated against central
/// finite differences at construction.
struct DiscreteLagrangian {
  int n = 0;
  std::function<double(const Vec& q, const Vec& v)> eval;
  std::function<Vec(const Vec& q, const Vec& v)> grad_q;
  std::function<Vec(const Vec& q, const Vec& v)> grad_v;

  /// Set when L has the canonical form (1/2)|v|^2 - V(q); enables the
  /// closed-form Euler-Lagrange update.
  std::function<Vec(const Vec& q)> potential_gradient;

  DiscreteLagrangian() = default;
  DiscreteLagrangian(int n_, std::function<double(const Vec&, const Vec&)> eval_,
                     std::function<Vec(const Vec&, const Vec&)> grad_q_,
                     std::function<Vec(const Vec&, const Vec&)> grad_v_,
                     unsigned validation_seed = 20230901u);
};

/// Hamiltonian H(q, p) with gradients and an optional Hessian reported in
/// z = (p, q) ordering. Gradients validated against finite differences,
/// the Hessian against its own symmetry.
struct HamiltonianSystem {
  int n = 0;
  std::function<double(const Vec& q, const Vec& p)> eval;
  std::function<Vec(const Vec& q, const Vec& p)> grad_q;
  std::function<Vec(const Vec& q, const Vec& p)> grad_p;
  std::function<Mat(const Vec& q, const Vec& p)> hessian;  // optional, (2n)x(2n)

  HamiltonianSystem() = default;
  HamiltonianSystem(int n_, std::function<double(const Vec&, const Vec&)> eval_,
                    std::function<Vec(const Vec&, const Vec&)> grad_q_,
                    std::function<Vec(const Vec&, const Vec&)> grad_p_,
                    std::function<Mat(const Vec&, const Vec&)> hessian_ = nullptr,
                    unsigned validation_seed = 20230902u);

  bool has_hessian() const { return static_cast<bool>(hessian); }

  double value_z(const Vec& z) const;   // H at z = (p, q)
  Vec grad_z(const Vec& z) const;       // (∂H/∂p, ∂H/∂q) at z
};

struct NewtonSettings {
  double tolerance = 1e-12;
  int max_iterations = 50;
};

/// Thrown when an implicit solve fails; carries the last residual norm.
struct SolverError : std::runtime_error {
  double residual_norm;
  SolverError(const std::string& what, double r)
      : std::runtime_error(what), residual_norm(r) {}
};

enum class Scheme { Del, Canonical, Midpoint, Order4, ExplicitEuler };

Scheme scheme_from_name(const std::string& name);

/// Time-indexed sequence of states with optional tangent (variation)
/// vector families propagated alongside.
struct Trajectory {
  Grid1D grid;
  std::vector<Vec> states;                    // z = (p, q) per node
  std::vector<std::vector<Vec>> tangents;     // [family][node]
};

// -- discrete Euler-Lagrange --------------------------------------------

/// Residual of the discrete Euler-Lagrange equations at the middle point of
/// a (q_prev, q_cur, q_next) window; zero exactly on scheme solutions.
Vec del_residual(const DiscreteLagrangian& L, const Vec& q_prev, const Vec& q_cur,
                 const Vec& q_next, double tau);

/// Advance the discrete Euler-Lagrange recursion one step. Uses the closed
/// form when L carries a potential gradient, Newton otherwise.
Vec del_step(const DiscreteLagrangian& L, const Vec& q_prev, const Vec& q_cur,
             double tau, const NewtonSettings& settings = {});

/// Iterate the Euler-Lagrange recursion; the returned q sequence includes
/// the two seed points.
std::vector<Vec> integrate_del(const DiscreteLagrangian& L, const Vec& q_prev,
                               const Vec& q_cur, double tau, int steps,
                               const NewtonSettings& settings = {});

/// p^{(k+1)} = ∂L/∂v(q_cur, (q_next - q_cur)/tau).
Vec discrete_legendre(const DiscreteLagrangian& L, const Vec& q_cur, const Vec& q_next,
                      double tau);

/// Discrete Legendre transform value p·Δq - L(q_cur, Δq).
double hamiltonian_from_lagrangian(const DiscreteLagrangian& L, const Vec& q_cur,
                                   const Vec& q_next, double tau);

// -- canonical steppers ----------------------------------------------------

/// Semi-implicit step: p_next solves p_next = p_cur - tau·∂H/∂q(q_cur, p_next),
/// then q_next = q_cur + tau·∂H/∂p(q_cur, p_next).
std::pair<Vec, Vec> canonical_step(const HamiltonianSystem& H, const Vec& q_cur,
                                   const Vec& p_cur, double tau,
                                   const NewtonSettings& settings = {});

/// Implicit midpoint step Δz = J^{-1} ∇H((z_next + z_cur)/2).
Vec midpoint_step(const HamiltonianSystem& H, const Vec& z_cur, double tau,
                  const NewtonSettings& settings = {});

/// Non-symplectic control map z_next = z_cur + tau·J^{-1}∇H(z_cur).
Vec explicit_euler_step(const HamiltonianSystem& H, const Vec& z_cur, double tau);

/// Modified Hamiltonian H - (tau^2/24)(∇H)^T J H_zz J ∇H; requires the Hessian.
double modified_hamiltonian(const HamiltonianSystem& H, const Vec& z, double tau);

/// Gradient of the modified Hamiltonian by central differences of the scalar.
Vec modified_hamiltonian_gradient(const HamiltonianSystem& H, const Vec& z, double tau);

/// Implicit midpoint step with the modified Hamiltonian; 4th order.
Vec fourth_order_step(const HamiltonianSystem& H, const Vec& z_cur, double tau,
                      const NewtonSettings& settings = {});

/// One step of the scheme as a map on z = (p, q).
Vec scheme_step(Scheme scheme, const HamiltonianSystem& H, const Vec& z_cur, double tau,
                const NewtonSettings& settings = {});

/// Propagate a variation vector through the linearization of one scheme
/// step. Analytic when the Hessian is available (Midpoint, Canonical,
/// ExplicitEuler); central finite differences of the step map otherwise.
Vec tangent_step(Scheme scheme, const HamiltonianSystem& H, const Vec& z_cur,
                 const Vec& z_next, const Vec& dz, double tau,
                 const NewtonSettings& settings = {});

/// Integrate a trajectory with optional tangent families (seeded at step 0).
Trajectory integrate(Scheme scheme, const HamiltonianSystem& H, const Vec& z0,
                     double tau, int steps, const std::vector<Vec>& tangent_seeds = {},
                     const NewtonSettings& settings = {});

}  // namespace dvarint
