#include "dvarint/fieldtheory.hpp"

#include <cmath>
#include <iostream>
#include <random>

namespace dvarint {

namespace {

void validate_antisymmetry(const Mat& A, const char* name) {
  if ((A + A.transpose()).cwiseAbs().maxCoeff() > 1e-14)
    throw std::invalid_argument(std::string("HamiltonianPDESystem: ") + name +
                                " is not antisymmetric");
}

Vec fd_grad_S(const std::function<double(const Vec&)>& S, const Vec& z) {
  Vec g(z.size());
  for (int i = 0; i < z.size(); ++i) {
    const double step = 1e-6 * (1.0 + std::abs(z[i]));
    Vec zp = z, zm = z;
    zp[i] += step;
    zm[i] -= step;
    g[i] = (S(zp) - S(zm)) / (2.0 * step);
  }
  return g;
}

}  // namespace

HamiltonianPDESystem::HamiltonianPDESystem(Mat M_, Mat K_, double epsilon_,
                                           std::function<double(const Vec&)> S_,
                                           std::function<Vec(const Vec&)> grad_S_,
                                           std::function<Mat(const Vec&)> hessian_S_,
                                           unsigned validation_seed)
    : d(static_cast<int>(M_.rows())),
      M(std::move(M_)),
      K(std::move(K_)),
      epsilon(epsilon_),
      S(std::move(S_)),
      grad_S(std::move(grad_S_)),
      hessian_S(std::move(hessian_S_)) {
  if (M.rows() != M.cols() || K.rows() != K.cols() || K.rows() != d)
    throw std::invalid_argument("HamiltonianPDESystem: M, K must be square of equal size");
  if (epsilon != 1.0 && epsilon != -1.0)
    throw std::invalid_argument("HamiltonianPDESystem: epsilon must be +1 or -1");
  if (!S || !grad_S)
    throw std::invalid_argument("HamiltonianPDESystem: S and grad_S are required");
  validate_antisymmetry(M, "M");
  validate_antisymmetry(K, "K");
  std::mt19937 rng(validation_seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    Vec z(d);
    for (int i = 0; i < d; ++i) z[i] = dist(rng);
    const Vec g = grad_S(z);
    const Vec fd = fd_grad_S(S, z);
    if ((g - fd).norm() > 1e-6 * (1.0 + fd.norm()))
      throw std::invalid_argument("HamiltonianPDESystem: grad_S disagrees with S");
    if (hessian_S) {
      const Mat H = hessian_S(z);
      if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("HamiltonianPDESystem: hessian_S is not symmetric");
    }
  }
}

Mat HamiltonianPDESystem::hessian_or_fd(const Vec& z) const {
  if (hessian_S) return hessian_S(z);
  Mat H(d, d);
  for (int i = 0; i < d; ++i) {
    const double step = 1e-6 * (1.0 + std::abs(z[i]));
    Vec zp = z, zm = z;
    zp[i] += step;
    zm[i] -= step;
    H.col(i) = (grad_S(zp) - grad_S(zm)) / (2.0 * step);
  }
  return 0.5 * (H + H.transpose());
}

DiscreteFieldLagrangian::DiscreteFieldLagrangian(
    std::function<double(double, double, double)> eval_,
    std::function<double(double, double, double)> d_u_,
    std::function<double(double, double, double)> d_vt_,
    std::function<double(double, double, double)> d_vx_, unsigned validation_seed)
    : eval(std::move(eval_)),
      d_u(std::move(d_u_)),
      d_vt(std::move(d_vt_)),
      d_vx(std::move(d_vx_)) {
  if (!eval || !d_u || !d_vt || !d_vx)
    throw std::invalid_argument("DiscreteFieldLagrangian: all slots are required");
  std::mt19937 rng(validation_seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const double u = dist(rng), vt = dist(rng), vx = dist(rng);
    const double s = 1e-6;
    const double fd_u = (eval(u + s, vt, vx) - eval(u - s, vt, vx)) / (2.0 * s);
    const double fd_vt = (eval(u, vt + s, vx) - eval(u, vt - s, vx)) / (2.0 * s);
    const double fd_vx = (eval(u, vt, vx + s) - eval(u, vt, vx - s)) / (2.0 * s);
    if (std::abs(d_u(u, vt, vx) - fd_u) > 1e-6 * (1.0 + std::abs(fd_u)) ||
        std::abs(d_vt(u, vt, vx) - fd_vt) > 1e-6 * (1.0 + std::abs(fd_vt)) ||
        std::abs(d_vx(u, vt, vx) - fd_vx) > 1e-6 * (1.0 + std::abs(fd_vx)))
      throw std::invalid_argument("DiscreteFieldLagrangian: partials disagree with eval");
  }
}

FieldRow::FieldRow(Grid1D g, int d) : grid(g), values(Mat::Zero(d, g.n_nodes)) {
  if (!grid.periodic) throw std::invalid_argument("FieldRow: grid must be periodic");
  if (d <= 0) throw std::invalid_argument("FieldRow: dimension must be positive");
}

FieldRow::FieldRow(Grid1D g, Mat values_) : grid(g), values(std::move(values_)) {
  if (!grid.periodic) throw std::invalid_argument("FieldRow: grid must be periodic");
  if (values.cols() != grid.n_nodes)
    throw std::invalid_argument("FieldRow: value count does not match the grid");
}

FieldGrid2::FieldGrid2(Grid2D g) : grid(g) {
  u.assign(static_cast<std::size_t>(grid.extents[0]) * grid.extents[1], 0.0);
}

double field_del_residual(const DiscreteFieldLagrangian& L, double u_c, double u_tprev,
                          double u_tnext, double u_xprev, double u_xnext, double tau,
                          double h) {
  const double vt_c = (u_tnext - u_c) / tau;
  const double vx_c = (u_xnext - u_c) / h;
  const double vt_prev = (u_c - u_tprev) / tau;
  const double vx_prev = (u_c - u_xprev) / h;
  // Backward-difference divergence of the slot partials. Off-slot arguments
  // of the kinetic partials are immaterial for quadratic kinetic terms.
  const double div_t = (L.d_vt(u_c, vt_c, vx_c) - L.d_vt(u_tprev, vt_prev, vx_c)) / tau;
  const double div_x = (L.d_vx(u_c, vt_c, vx_c) - L.d_vx(u_xprev, vt_c, vx_prev)) / h;
  return L.d_u(u_c, vt_c, vx_c) - div_t - div_x;
}

Vec field_del_step(const DiscreteFieldLagrangian& L, const Vec& row_prev,
                   const Vec& row_cur, double tau, double h) {
  if (!L.potential_derivative)
    throw std::invalid_argument("field_del_step: needs a potential derivative");
  if (row_prev.size() != row_cur.size())
    throw std::invalid_argument("field_del_step: row length mismatch");
  const int n = static_cast<int>(row_cur.size());
  if (tau / h > 1.0)
    std::cerr << "field_del_step: warning: tau/h > 1 exceeds the stability limit\n";
  const double r2 = tau * tau / (h * h);
  Vec next(n);
  for (int j = 0; j < n; ++j) {
    const double lap = row_cur[(j + 1) % n] - 2.0 * row_cur[j] + row_cur[(j - 1 + n) % n];
    next[j] = 2.0 * row_cur[j] - row_prev[j] + r2 * lap -
              tau * tau * L.potential_derivative(row_cur[j]);
  }
  return next;
}

std::pair<Vec, Vec> field_canonical_step(const DiscreteFieldLagrangian& L, const Vec& u_row,
                                         const Vec& pi_row, double tau, double h) {
  if (!L.potential_derivative)
    throw std::invalid_argument("field_canonical_step: needs a potential derivative");
  if (u_row.size() != pi_row.size())
    throw std::invalid_argument("field_canonical_step: row length mismatch");
  const int n = static_cast<int>(u_row.size());
  Vec pi_next(n), u_next(n);
  for (int j = 0; j < n; ++j) {
    const double dxx =
        (u_row[(j + 1) % n] - 2.0 * u_row[j] + u_row[(j - 1 + n) % n]) / (h * h);
    pi_next[j] = pi_row[j] + tau * (dxx - L.potential_derivative(u_row[j]));
    u_next[j] = u_row[j] + tau * pi_next[j];
  }
  return {u_next, pi_next};
}

namespace {

struct BoxOperators {
  // Averages and differences of the box scheme over one periodic row pair.
  // Cell j couples nodes j and j+1 (mod n) at both time levels.
  static Vec cell_residual(const HamiltonianPDESystem& sys, const Mat& Z, const Mat& Zn,
                           int j, double tau, double h) {
    const int n = static_cast<int>(Z.cols());
    const int jp = (j + 1) % n;
    const Vec space_avg = 0.5 * (Z.col(j) + Z.col(jp));
    const Vec space_avg_n = 0.5 * (Zn.col(j) + Zn.col(jp));
    const Vec time_avg_j = 0.5 * (Z.col(j) + Zn.col(j));
    const Vec time_avg_jp = 0.5 * (Z.col(jp) + Zn.col(jp));
    const Vec center = 0.25 * (Z.col(j) + Z.col(jp) + Zn.col(j) + Zn.col(jp));
    return sys.M * ((space_avg_n - space_avg) / tau) +
           sys.epsilon * (sys.K * ((time_avg_jp - time_avg_j) / h)) - sys.grad_S(center);
  }
};

Vec stacked_residual(const HamiltonianPDESystem& sys, const Mat& Z, const Mat& Zn,
                     double tau, double h) {
  const int n = static_cast<int>(Z.cols());
  const int d = sys.d;
  Vec F(n * d);
  for (int j = 0; j < n; ++j)
    F.segment(j * d, d) = BoxOperators::cell_residual(sys, Z, Zn, j, tau, h);
  return F;
}

/// Jacobian of the stacked residual w.r.t. the next-row unknowns.
Mat stacked_jacobian(const HamiltonianPDESystem& sys, const Mat& Z, const Mat& Zn,
                     double tau, double h) {
  const int n = static_cast<int>(Z.cols());
  const int d = sys.d;
  Mat J = Mat::Zero(n * d, n * d);
  for (int j = 0; j < n; ++j) {
    const int jp = (j + 1) % n;
    const Vec center = 0.25 * (Z.col(j) + Z.col(jp) + Zn.col(j) + Zn.col(jp));
    const Mat Szz = sys.hessian_or_fd(center);
    J.block(j * d, j * d, d, d) +=
        sys.M / (2.0 * tau) - sys.epsilon * sys.K / (2.0 * h) - 0.25 * Szz;
    J.block(j * d, jp * d, d, d) +=
        sys.M / (2.0 * tau) + sys.epsilon * sys.K / (2.0 * h) - 0.25 * Szz;
  }
  return J;
}

}  // namespace

FieldRow box_step_row(const HamiltonianPDESystem& sys, const FieldRow& row, double tau,
                      const NewtonSettings& settings) {
  if (row.d() != sys.d) throw std::invalid_argument("box_step_row: dimension mismatch");
  if (tau <= 0.0) throw std::invalid_argument("box_step_row: tau must be > 0");
  const double h = row.grid.step;
  const int n = row.n();
  const int d = sys.d;
  Mat Zn = row.values;  // previous row seeds the solve
  double rnorm = stacked_residual(sys, row.values, Zn, tau, h).lpNorm<Eigen::Infinity>();
  for (int iter = 0; iter < settings.max_iterations; ++iter) {
    const Vec F = stacked_residual(sys, row.values, Zn, tau, h);
    rnorm = F.lpNorm<Eigen::Infinity>();
    if (rnorm <= settings.tolerance) return {row.grid, Zn};
    const Mat J = stacked_jacobian(sys, row.values, Zn, tau, h);
    // Periodic rows with even n carry an alternating kernel mode (degenerate
    // directions of K lifted to the row), so take the minimal-norm update.
    const Vec dx = Eigen::CompleteOrthogonalDecomposition<Mat>(J).solve(-F);
    if (!dx.allFinite())
      throw SolverError("box_step_row: singular row Jacobian", rnorm);
    for (int j = 0; j < n; ++j) Zn.col(j) += dx.segment(j * d, d);
  }
  const double final_norm =
      stacked_residual(sys, row.values, Zn, tau, h).lpNorm<Eigen::Infinity>();
  if (final_norm <= settings.tolerance) return {row.grid, Zn};
  throw SolverError("box_step_row: Newton did not converge", final_norm);
}

FieldRow box_tangent_row(const HamiltonianPDESystem& sys, const FieldRow& row,
                         const FieldRow& next_row, const FieldRow& tangent, double tau) {
  if (row.d() != sys.d || next_row.d() != sys.d || tangent.d() != sys.d)
    throw std::invalid_argument("box_tangent_row: dimension mismatch");
  const double h = row.grid.step;
  const int n = row.n();
  const int d = sys.d;
  const Mat A = stacked_jacobian(sys, row.values, next_row.values, tau, h);
  // Right-hand side: minus the residual's sensitivity to the current-row
  // perturbation; blocks mirror stacked_jacobian with the time signs flipped.
  Vec b = Vec::Zero(n * d);
  for (int j = 0; j < n; ++j) {
    const int jp = (j + 1) % n;
    const Vec center = 0.25 * (row.values.col(j) + row.values.col(jp) +
                               next_row.values.col(j) + next_row.values.col(jp));
    const Mat Szz = sys.hessian_or_fd(center);
    const Mat Bj = -sys.M / (2.0 * tau) - sys.epsilon * sys.K / (2.0 * h) - 0.25 * Szz;
    const Mat Bjp = -sys.M / (2.0 * tau) + sys.epsilon * sys.K / (2.0 * h) - 0.25 * Szz;
    b.segment(j * d, d) -= Bj * tangent.values.col(j) + Bjp * tangent.values.col(jp);
  }
  const Vec x = Eigen::CompleteOrthogonalDecomposition<Mat>(A).solve(b);
  if (!x.allFinite())
    throw SolverError("box_tangent_row: singular row Jacobian", b.norm());
  Mat out(d, n);
  for (int j = 0; j < n; ++j) out.col(j) = x.segment(j * d, d);
  return {row.grid, std::move(out)};
}

namespace {

double omega0_cell(const HamiltonianPDESystem& sys, const Mat& xi, const Mat& eta, int j) {
  const int n = static_cast<int>(xi.cols());
  const int jp = (j + 1) % n;
  const Vec xbar = 0.5 * (xi.col(j) + xi.col(jp));
  const Vec ebar = 0.5 * (eta.col(j) + eta.col(jp));
  return -xbar.dot(sys.M * ebar);
}

double omega1_node(const HamiltonianPDESystem& sys, const Mat& xi0, const Mat& xi1,
                   const Mat& eta0, const Mat& eta1, int j) {
  const Vec xtil = 0.5 * (xi0.col(j) + xi1.col(j));
  const Vec etil = 0.5 * (eta0.col(j) + eta1.col(j));
  return -xtil.dot(sys.K * etil);
}

}  // namespace

ResidualSeries multisymplectic_residual(const HamiltonianPDESystem& sys,
                                        const std::vector<FieldRow>& rows,
                                        const std::vector<FieldRow>& xi,
                                        const std::vector<FieldRow>& eta, double tau) {
  if (rows.size() < 2) throw std::invalid_argument("multisymplectic_residual: needs rows");
  if (xi.size() != rows.size() || eta.size() != rows.size())
    throw std::invalid_argument("multisymplectic_residual: tangent sequences missing");
  const double h = rows.front().grid.step;
  const int n = rows.front().n();
  std::vector<double> r;
  r.reserve((rows.size() - 1) * static_cast<std::size_t>(n));
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    for (int j = 0; j < n; ++j) {
      const int jp = (j + 1) % n;
      const double w0_lo = omega0_cell(sys, xi[i].values, eta[i].values, j);
      const double w0_hi = omega0_cell(sys, xi[i + 1].values, eta[i + 1].values, j);
      const double w1_j =
          omega1_node(sys, xi[i].values, xi[i + 1].values, eta[i].values, eta[i + 1].values, j);
      const double w1_jp = omega1_node(sys, xi[i].values, xi[i + 1].values, eta[i].values,
                                       eta[i + 1].values, jp);
      r.push_back((w0_hi - w0_lo) / tau + sys.epsilon * (w1_jp - w1_j) / h);
    }
  }
  return ResidualSeries::from_values(std::move(r));
}

double omega0_row_sum(const HamiltonianPDESystem& sys, const FieldRow& xi,
                      const FieldRow& eta) {
  double sum = 0.0;
  for (int j = 0; j < xi.n(); ++j) sum += omega0_cell(sys, xi.values, eta.values, j);
  return sum;
}

namespace {

struct CellView {
  Vec z00, z01, z10, z11;  // (time, space) corners
};

CellView split_cell(const Vec& w, int d) {
  if (w.size() != 4 * d)
    throw std::invalid_argument("box EL form: cell layout mismatch");
  return {w.segment(0, d), w.segment(d, d), w.segment(2 * d, d), w.segment(3 * d, d)};
}

}  // namespace

double box_el_form_value(const HamiltonianPDESystem& sys, const Vec& cell, const Vec& xi,
                         double tau, double h) {
  const int d = sys.d;
  const CellView z = split_cell(cell, d);
  const CellView x = split_cell(xi, d);
  const Vec dt = (0.5 * (z.z10 + z.z11) - 0.5 * (z.z00 + z.z01)) / tau;
  const Vec dx = (0.5 * (z.z01 + z.z11) - 0.5 * (z.z00 + z.z10)) / h;
  const Vec center = 0.25 * (z.z00 + z.z01 + z.z10 + z.z11);
  const Vec F = sys.M * dt + sys.epsilon * (sys.K * dx) - sys.grad_S(center);
  const Vec xc = 0.25 * (x.z00 + x.z01 + x.z10 + x.z11);
  return xc.dot(F);
}

double box_el_form_exterior_derivative(const HamiltonianPDESystem& sys, const Vec& cell,
                                       const Vec& xi, const Vec& eta, double tau, double h,
                                       double fd_step) {
  if (fd_step <= 0.0)
    throw std::invalid_argument("box_el_form_exterior_derivative: fd_step must be > 0");
  auto dir = [&](const Vec& a, const Vec& b) {
    const double norm = a.norm();
    if (norm == 0.0) return 0.0;
    const Vec u = a / norm;
    return norm *
           (box_el_form_value(sys, cell + fd_step * u, b, tau, h) -
            box_el_form_value(sys, cell - fd_step * u, b, tau, h)) /
           (2.0 * fd_step);
  };
  return dir(xi, eta) - dir(eta, xi);
}

double field_cohomology_identity_residual(const HamiltonianPDESystem& sys, const Vec& cell,
                                          const Vec& xi, const Vec& eta, double tau,
                                          double h, double fd_step) {
  const int d = sys.d;
  const double dE = box_el_form_exterior_derivative(sys, cell, xi, eta, tau, h, fd_step);
  const CellView x = split_cell(xi, d);
  const CellView e = split_cell(eta, d);
  auto w0 = [&](const Vec& xa, const Vec& xb, const Vec& ea, const Vec& eb) {
    return -(0.5 * (xa + xb)).dot(sys.M * (0.5 * (ea + eb)));
  };
  auto w1 = [&](const Vec& xa, const Vec& xb, const Vec& ea, const Vec& eb) {
    return -(0.5 * (xa + xb)).dot(sys.K * (0.5 * (ea + eb)));
  };
  const double dt_w0 = (w0(x.z10, x.z11, e.z10, e.z11) - w0(x.z00, x.z01, e.z00, e.z01)) / tau;
  const double dx_w1 = (w1(x.z01, x.z11, e.z01, e.z11) - w1(x.z00, x.z10, e.z00, e.z10)) / h;
  return dE - dt_w0 - sys.epsilon * dx_w1;
}

}  // namespace dvarint
