#pragma once

#include <functional>
#include <vector>

#include "dvarint/mechanics.hpp"
#include "dvarint/verify.hpp"

namespace dvarint {

/// First-order PDE system M Z_t + εK Z_x = ∇S(Z) with antisymmetric M, K.
/// Antisymmetry is checked to 1e-14 and grad_S against finite differences
/// at construction.
struct HamiltonianPDESystem {
  int d = 0;
  Mat M, K;
  double epsilon = 1.0;  // +1 or -1
  std::function<double(const Vec& z)> S;
  std::function<Vec(const Vec& z)> grad_S;
  std::function<Mat(const Vec& z)> hessian_S;  // optional, symmetric d x d

  HamiltonianPDESystem() = default;
  HamiltonianPDESystem(Mat M_, Mat K_, double epsilon_,
                       std::function<double(const Vec&)> S_,
                       std::function<Vec(const Vec&)> grad_S_,
                       std::function<Mat(const Vec&)> hessian_S_ = nullptr,
                       unsigned validation_seed = 20230904u);

  bool has_hessian() const { return static_cast<bool>(hessian_S); }
  Mat hessian_or_fd(const Vec& z) const;
};

/// Scalar field Lagrangian density L(u, v_t, v_x) per node, with partials
/// for each slot, validated against finite differences at construction.
struct DiscreteFieldLagrangian {
  std::function<double(double u, double vt, double vx)> eval;
  std::function<double(double u, double vt, double vx)> d_u;
  std::function<double(double u, double vt, double vx)> d_vt;
  std::function<double(double u, double vt, double vx)> d_vx;

  /// Set for the family L = (1/2)v_t^2 - (1/2)v_x^2 - V(u); enables the
  /// explicit leapfrog and canonical field updates.
  std::function<double(double u)> potential_derivative;

  DiscreteFieldLagrangian() = default;
  DiscreteFieldLagrangian(std::function<double(double, double, double)> eval_,
                          std::function<double(double, double, double)> d_u_,
                          std::function<double(double, double, double)> d_vt_,
                          std::function<double(double, double, double)> d_vx_,
                          unsigned validation_seed = 20230905u);
};

/// One time slice of a vector-valued field on a periodic spatial grid;
/// values are d x n_nodes (one column per node).
struct FieldRow {
  Grid1D grid;
  Mat values;

  FieldRow(Grid1D g, int d);
  FieldRow(Grid1D g, Mat values_);
  int n() const { return grid.n_nodes; }
  int d() const { return static_cast<int>(values.rows()); }
};

/// Scalar field history on a 2D lattice (time x space), with canonical
/// momenta filled in for canonical runs.
struct FieldGrid2 {
  Grid2D grid;
  std::vector<double> u;   // row-major, index i * extents[1] + j
  std::vector<double> pi;  // empty unless a canonical run populates it

  explicit FieldGrid2(Grid2D g);
  double& at(int i, int j) { return u[static_cast<std::size_t>(i) * grid.extents[1] + j]; }
  double at(int i, int j) const { return u[static_cast<std::size_t>(i) * grid.extents[1] + j]; }
};

// -- scalar field Euler-Lagrange ------------------------------------------

/// Euler-Lagrange residual at a node from its 5-point neighborhood:
/// dL/du minus the backward-difference divergence of the slot partials.
/// Assumes the kinetic partials depend on their own slot only (true for
/// every registered model; quadratic kinetic terms).
double field_del_residual(const DiscreteFieldLagrangian& L, double u_c, double u_tprev,
                          double u_tnext, double u_xprev, double u_xnext, double tau,
                          double h);

/// Explicit leapfrog row advance:
/// u' = 2u - u_prev + (tau^2/h^2)(u_{j+1} - 2u_j + u_{j-1}) - tau^2 V'(u).
/// Warns (stderr, non-fatal) when tau/h > 1. Periodic in space.
Vec field_del_step(const DiscreteFieldLagrangian& L, const Vec& row_prev,
                   const Vec& row_cur, double tau, double h);

/// Semi-implicit canonical field update (explicit for separable densities):
/// pi' = pi + tau(-V'(u) + D_xx u), u' = u + tau pi'. Periodic in space.
std::pair<Vec, Vec> field_canonical_step(const DiscreteFieldLagrangian& L, const Vec& u_row,
                                         const Vec& pi_row, double tau, double h);

// -- midpoint box scheme ----------------------------------------------------

/// Advance one row of the midpoint box scheme
/// M Δ_t Z^{(i,j+1/2)} + εK Δ_x Z^{(i+1/2,j)} = ∇S(Z^{(i+1/2,j+1/2)})
/// by Newton on the stacked N·d unknowns (periodic row coupling).
FieldRow box_step_row(const HamiltonianPDESystem& sys, const FieldRow& row, double tau,
                      const NewtonSettings& settings = {});

/// Propagate a tangent row through the linearization of box_step_row about
/// the (row, next_row) solution pair.
FieldRow box_tangent_row(const HamiltonianPDESystem& sys, const FieldRow& row,
                         const FieldRow& next_row, const FieldRow& tangent, double tau);

/// Per-cell structure residual r = Δ_t ω⁰ + εΔ_x ω¹ over the run, with
/// ω⁰(ξ,η) = -ξ̄ᵀMη̄ at spatial edge midpoints and ω¹(ξ,η) = -ξ̃ᵀKη̃ at
/// temporal edge midpoints. Rows are time-ordered; tangent sequences must
/// come from box_tangent_row.
ResidualSeries multisymplectic_residual(const HamiltonianPDESystem& sys,
                                        const std::vector<FieldRow>& rows,
                                        const std::vector<FieldRow>& xi,
                                        const std::vector<FieldRow>& eta, double tau);

/// Row sum Σ_j ω⁰_{i,j} at one time level; step-invariant for periodic
/// box-scheme runs.
double omega0_row_sum(const HamiltonianPDESystem& sys, const FieldRow& xi,
                      const FieldRow& eta);

// -- box cell EL 1-form -----------------------------------------------------
// Cell window layout: (Z_{i,j}, Z_{i,j+1}, Z_{i+1,j}, Z_{i+1,j+1}), 4d reals.
// Variations use the same layout.

/// E(ξ) = ξ_c ᵀ (M Δ_t Z + εK Δ_x Z - ∇S(c)) with ξ_c the 4-corner average.
double box_el_form_value(const HamiltonianPDESystem& sys, const Vec& cell, const Vec& xi,
                         double tau, double h);

/// dE(ξ,η) by central finite differences over the cell variables.
double box_el_form_exterior_derivative(const HamiltonianPDESystem& sys, const Vec& cell,
                                       const Vec& xi, const Vec& eta, double tau, double h,
                                       double fd_step);

/// dE(ξ,η) - Δ_t ω⁰(ξ,η) - εΔ_x ω¹(ξ,η); identically zero on arbitrary
/// cell data up to the finite-difference budget.
double field_cohomology_identity_residual(const HamiltonianPDESystem& sys, const Vec& cell,
                                          const Vec& xi, const Vec& eta, double tau,
                                          double h, double fd_step);

}  // namespace dvarint
