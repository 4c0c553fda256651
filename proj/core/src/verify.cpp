#include "dvarint/verify.hpp"

#include <cmath>
#include <random>

namespace dvarint {

namespace {

struct WindowView {
  Vec p0, q0, p1, q1;
};

WindowView split(const Vec& w, int n) {
  if (w.size() != 4 * n)
    throw std::invalid_argument("ELForm: window layout mismatch");
  return {w.segment(0, n), w.segment(n, n), w.segment(2 * n, n), w.segment(3 * n, n)};
}

double omega_block(const Vec& w_xi, const Vec& w_eta, int n, int level) {
  const int off = level == 0 ? 0 : 2 * n;
  Vec a(2 * n), b(2 * n);
  a << w_xi.segment(off, 2 * n);
  b << w_eta.segment(off, 2 * n);
  return symplectic_area(a, b);
}

}  // namespace

ResidualSeries ResidualSeries::from_values(std::vector<double> v) {
  ResidualSeries s;
  s.values = std::move(v);
  if (s.values.empty()) return s;
  const double count = static_cast<double>(s.values.size());
  double sum = 0.0;
  for (double x : s.values) {
    s.max_abs = std::max(s.max_abs, std::abs(x));
    sum += x;
  }
  s.mean = sum / count;
  // least-squares slope against the step index
  const double kbar = (count - 1.0) / 2.0;
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    const double dk = static_cast<double>(k) - kbar;
    num += dk * (s.values[k] - s.mean);
    den += dk * dk;
  }
  s.trend_slope = den > 0.0 ? num / den : 0.0;
  return s;
}

ELForm make_el_form(Scheme scheme, const HamiltonianSystem& H, double tau,
                    unsigned check_seed) {
  const int n = H.n;
  ELForm form;
  form.scheme = scheme;
  form.n = n;
  switch (scheme) {
    case Scheme::Canonical:
      // Scheme-matching arguments (q^{(k)}, p^{(k+1)}): the choice that
      // closes the d^2 = 0 identity.
      form.evaluator = [H, tau, n](const Vec& w, const Vec& xi) {
        const WindowView v = split(w, n);
        const Vec dq = (v.q1 - v.q0) / tau;
        const Vec dp = (v.p1 - v.p0) / tau;
        const Vec hq = H.grad_q(v.q0, v.p1);
        const Vec hp = H.grad_p(v.q0, v.p1);
        const WindowView x = split(xi, n);
        return (dq - hp).dot(x.p1) - (dp + hq).dot(x.q0);
      };
      break;
    case Scheme::Midpoint:
      form.evaluator = [H, tau, n](const Vec& w, const Vec& xi) {
        const WindowView v = split(w, n);
        Vec z0(2 * n), z1(2 * n);
        z0 << v.p0, v.q0;
        z1 << v.p1, v.q1;
        const Vec mid = 0.5 * (z0 + z1);
        const Mat J = symplectic_matrix(n);
        const Vec r = J * ((z1 - z0) / tau) - H.grad_z(mid);
        const Vec xbar = 0.5 * (xi.segment(0, 2 * n) + xi.segment(2 * n, 2 * n));
        return xbar.dot(r);
      };
      break;
    case Scheme::Order4:
      form.evaluator = [H, tau, n](const Vec& w, const Vec& xi) {
        const WindowView v = split(w, n);
        Vec z0(2 * n), z1(2 * n);
        z0 << v.p0, v.q0;
        z1 << v.p1, v.q1;
        const Vec mid = 0.5 * (z0 + z1);
        const Mat J = symplectic_matrix(n);
        const Vec r = J * ((z1 - z0) / tau) - modified_hamiltonian_gradient(H, mid, tau);
        const Vec xbar = 0.5 * (xi.segment(0, 2 * n) + xi.segment(2 * n, 2 * n));
        return xbar.dot(r);
      };
      break;
    case Scheme::ExplicitEuler:
      form.evaluator = [H, tau, n](const Vec& w, const Vec& xi) {
        const WindowView v = split(w, n);
        Vec z0(2 * n), z1(2 * n);
        z0 << v.p0, v.q0;
        z1 << v.p1, v.q1;
        const Mat J = symplectic_matrix(n);
        const Vec r = J * ((z1 - z0) / tau) - H.grad_z(z0);
        return xi.segment(0, 2 * n).dot(r);
      };
      break;
    case Scheme::Del:
      throw std::invalid_argument(
          "make_el_form: the Lagrangian-side form is exercised through its "
          "Hamiltonian equivalent; use Canonical");
  }
  // Linearity spot-check on random pairs.
  std::mt19937 rng(check_seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  auto rand_vec = [&](int len) {
    Vec v(len);
    for (int i = 0; i < len; ++i) v[i] = dist(rng);
    return v;
  };
  for (int trial = 0; trial < 3; ++trial) {
    const Vec w = rand_vec(4 * n);
    const Vec a = rand_vec(4 * n), b = rand_vec(4 * n);
    const double alpha = dist(rng), beta = dist(rng);
    const double lhs = form.evaluator(w, alpha * a + beta * b);
    const double rhs = alpha * form.evaluator(w, a) + beta * form.evaluator(w, b);
    if (std::abs(lhs - rhs) > 1e-12 * (1.0 + std::abs(rhs)))
      throw std::logic_error("make_el_form: evaluator is not linear in the variation");
  }
  return form;
}

double el_form_value(const ELForm& form, const Vec& window, const WindowVariation& xi) {
  return form.evaluator(window, xi);
}

namespace {

double directional_derivative(const ELForm& form, const Vec& window, const Vec& direction,
                              const WindowVariation& fixed, double fd_step) {
  const double norm = direction.norm();
  if (norm == 0.0) return 0.0;
  const Vec u = direction / norm;
  return norm *
         (form.evaluator(window + fd_step * u, fixed) -
          form.evaluator(window - fd_step * u, fixed)) /
         (2.0 * fd_step);
}

}  // namespace

double el_form_exterior_derivative(const ELForm& form, const Vec& window,
                                   const WindowVariation& xi, const WindowVariation& eta,
                                   double fd_step) {
  if (fd_step <= 0.0)
    throw std::invalid_argument("el_form_exterior_derivative: fd_step must be > 0");
  return directional_derivative(form, window, xi, eta, fd_step) -
         directional_derivative(form, window, eta, xi, fd_step);
}

double el_form_exterior_derivative_analytic(const ELForm& form, const HamiltonianSystem& H,
                                            const Vec& window, const WindowVariation& xi,
                                            const WindowVariation& eta, double tau) {
  if (!H.has_hessian())
    throw std::invalid_argument("analytic exterior derivative requires a hessian");
  const int n = form.n;
  const WindowView v = split(window, n);
  const WindowView x = split(xi, n);
  const WindowView e = split(eta, n);
  switch (form.scheme) {
    case Scheme::Midpoint: {
      Vec z0(2 * n), z1(2 * n);
      z0 << v.p0, v.q0;
      z1 << v.p1, v.q1;
      const Vec mid = 0.5 * (z0 + z1);
      const Mat J = symplectic_matrix(n);
      const Mat Hzz = H.hessian(mid.tail(n), mid.head(n));
      const Vec xbar = 0.5 * (xi.segment(0, 2 * n) + xi.segment(2 * n, 2 * n));
      const Vec ebar = 0.5 * (eta.segment(0, 2 * n) + eta.segment(2 * n, 2 * n));
      const Vec dxi = (xi.segment(2 * n, 2 * n) - xi.segment(0, 2 * n)) / tau;
      const Vec deta = (eta.segment(2 * n, 2 * n) - eta.segment(0, 2 * n)) / tau;
      return ebar.dot(J * dxi - Hzz * xbar) - xbar.dot(J * deta - Hzz * ebar);
    }
    case Scheme::Canonical: {
      const Mat Hzz = H.hessian(v.q0, v.p1);
      const Mat Hpp = Hzz.block(0, 0, n, n);
      const Mat Hpq = Hzz.block(0, n, n, n);
      const Mat Hqp = Hzz.block(n, 0, n, n);
      const Mat Hqq = Hzz.block(n, n, n, n);
      auto dE_dir = [&](const WindowView& a, const WindowView& b) {
        // D_a[E(b)] with E's coefficients differentiated along a.
        const Vec d_dq = (a.q1 - a.q0) / tau - Hpq * a.q0 - Hpp * a.p1;
        const Vec d_dp = (a.p1 - a.p0) / tau + Hqq * a.q0 + Hqp * a.p1;
        return d_dq.dot(b.p1) - d_dp.dot(b.q0);
      };
      return dE_dir(x, e) - dE_dir(e, x);
    }
    default:
      throw std::invalid_argument(
          "analytic exterior derivative implemented for Canonical and Midpoint");
  }
}

double cohomology_identity_residual(const ELForm& form, const Vec& window,
                                    const WindowVariation& xi, const WindowVariation& eta,
                                    double tau, double fd_step) {
  const double dE = el_form_exterior_derivative(form, window, xi, eta, fd_step);
  const double w0 = omega_block(xi, eta, form.n, 0);
  const double w1 = omega_block(xi, eta, form.n, 1);
  return dE + (w1 - w0) / tau;
}

double cohomology_identity_residual_analytic(const ELForm& form, const HamiltonianSystem& H,
                                             const Vec& window, const WindowVariation& xi,
                                             const WindowVariation& eta, double tau) {
  const double dE = el_form_exterior_derivative_analytic(form, H, window, xi, eta, tau);
  const double w0 = omega_block(xi, eta, form.n, 0);
  const double w1 = omega_block(xi, eta, form.n, 1);
  return dE + (w1 - w0) / tau;
}

ResidualSeries symplectic_residual_series(const Trajectory& traj) {
  if (traj.tangents.size() < 2)
    throw std::invalid_argument("symplectic_residual_series: needs two tangent families");
  const auto& xi = traj.tangents[0];
  const auto& eta = traj.tangents[1];
  std::vector<double> r;
  r.reserve(xi.size() - 1);
  for (std::size_t k = 0; k + 1 < xi.size(); ++k)
    r.push_back(symplectic_area(xi[k + 1], eta[k + 1]) - symplectic_area(xi[k], eta[k]));
  return ResidualSeries::from_values(std::move(r));
}

std::vector<double> symplectic_area_series(const Trajectory& traj) {
  if (traj.tangents.size() < 2)
    throw std::invalid_argument("symplectic_area_series: needs two tangent families");
  std::vector<double> out;
  out.reserve(traj.tangents[0].size());
  for (std::size_t k = 0; k < traj.tangents[0].size(); ++k)
    out.push_back(symplectic_area(traj.tangents[0][k], traj.tangents[1][k]));
  return out;
}

ResidualSeries energy_series(const Trajectory& traj, const HamiltonianSystem& H) {
  std::vector<double> v;
  v.reserve(traj.states.size());
  const double h0 = H.value_z(traj.states.front());
  for (const auto& z : traj.states) v.push_back(H.value_z(z) - h0);
  return ResidualSeries::from_values(std::move(v));
}

}  // namespace dvarint
