#include "dvarint/mechanics.hpp"

#include <cmath>
#include <random>

namespace dvarint {

namespace {

constexpr double kFdStepScale = 1e-6;

/// Central finite-difference gradient of a scalar function of one vector slot.
Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x) {
  Vec g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = kFdStepScale * (1.0 + std::abs(x[i]));
    Vec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

void validate_gradient(const std::function<double(const Vec&)>& f,
                       const std::function<Vec(const Vec&)>& grad, const Vec& x,
                       const char* what) {
  const Vec g = grad(x);
  const Vec gfd = fd_gradient(f, x);
  const double scale = 1.0 + g.norm();
  if ((g - gfd).norm() > 1e-6 * scale)
    throw std::invalid_argument(std::string(what) +
                                ": supplied gradient disagrees with finite differences");
}

Vec random_point(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vec x(n);
  for (int i = 0; i < n; ++i) x[i] = dist(rng);
  return x;
}

/// Newton iteration with a finite-difference Jacobian of the residual.
Vec newton_solve(const std::function<Vec(const Vec&)>& residual, Vec x,
                 const NewtonSettings& settings,
                 const std::function<Mat(const Vec&)>& jacobian = nullptr) {
  Vec r = residual(x);
  for (int it = 0; it < settings.max_iterations; ++it) {
    if (r.norm() <= settings.tolerance) return x;
    Mat J;
    if (jacobian) {
      J = jacobian(x);
    } else {
      J.resize(r.size(), x.size());
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double h = 1e-7 * (1.0 + std::abs(x[i]));
        Vec xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        J.col(i) = (residual(xp) - residual(xm)) / (2.0 * h);
      }
    }
    Eigen::PartialPivLU<Mat> lu(J);
    const Vec dx = lu.solve(r);
    if (!dx.allFinite())
      throw SolverError("newton_solve: singular Jacobian", r.norm());
    x -= dx;
    r = residual(x);
  }
  if (r.norm() <= settings.tolerance) return x;
  throw SolverError("newton_solve: no convergence", r.norm());
}

}  // namespace

PhasePoint PhasePoint::from_pq(const Vec& p, const Vec& q) {
  if (p.size() != q.size()) throw std::invalid_argument("PhasePoint: p/q size mismatch");
  Vec z(2 * p.size());
  z << p, q;
  return PhasePoint(std::move(z));
}

Mat symplectic_matrix(int n) {
  Mat J = Mat::Zero(2 * n, 2 * n);
  J.topRightCorner(n, n) = Mat::Identity(n, n);
  J.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
  return J;
}

double symplectic_area(const Vec& xi, const Vec& eta) {
  if (xi.size() != eta.size() || xi.size() % 2 != 0)
    throw std::invalid_argument("symplectic_area: dimension mismatch");
  const Eigen::Index n = xi.size() / 2;
  // xi^T J eta with J = [[0, I], [-I, 0]] in (p, q) ordering.
  return xi.head(n).dot(eta.tail(n)) - xi.tail(n).dot(eta.head(n));
}

DiscreteLagrangian::DiscreteLagrangian(
    int n_, std::function<double(const Vec&, const Vec&)> eval_,
    std::function<Vec(const Vec&, const Vec&)> grad_q_,
    std::function<Vec(const Vec&, const Vec&)> grad_v_, unsigned validation_seed)
    : n(n_), eval(std::move(eval_)), grad_q(std::move(grad_q_)), grad_v(std::move(grad_v_)) {
  if (n <= 0) throw std::invalid_argument("DiscreteLagrangian: n must be positive");
  std::mt19937 rng(validation_seed);
  for (int trial = 0; trial < 5; ++trial) {
    const Vec q = random_point(rng, n);
    const Vec v = random_point(rng, n);
    validate_gradient([&](const Vec& x) { return eval(x, v); },
                      [&](const Vec& x) { return grad_q(x, v); }, q,
                      "DiscreteLagrangian.grad_q");
    validate_gradient([&](const Vec& x) { return eval(q, x); },
                      [&](const Vec& x) { return grad_v(q, x); }, v,
                      "DiscreteLagrangian.grad_v");
  }
}

HamiltonianSystem::HamiltonianSystem(
    int n_, std::function<double(const Vec&, const Vec&)> eval_,
    std::function<Vec(const Vec&, const Vec&)> grad_q_,
    std::function<Vec(const Vec&, const Vec&)> grad_p_,
    std::function<Mat(const Vec&, const Vec&)> hessian_, unsigned validation_seed)
    : n(n_), eval(std::move(eval_)), grad_q(std::move(grad_q_)),
      grad_p(std::move(grad_p_)), hessian(std::move(hessian_)) {
  if (n <= 0) throw std::invalid_argument("HamiltonianSystem: n must be positive");
  std::mt19937 rng(validation_seed);
  for (int trial = 0; trial < 5; ++trial) {
    const Vec q = random_point(rng, n);
    const Vec p = random_point(rng, n);
    validate_gradient([&](const Vec& x) { return eval(x, p); },
                      [&](const Vec& x) { return grad_q(x, p); }, q,
                      "HamiltonianSystem.grad_q");
    validate_gradient([&](const Vec& x) { return eval(q, x); },
                      [&](const Vec& x) { return grad_p(q, x); }, p,
                      "HamiltonianSystem.grad_p");
    if (hessian) {
      const Mat Hzz = hessian(q, p);
      if (Hzz.rows() != 2 * n || Hzz.cols() != 2 * n)
        throw std::invalid_argument("HamiltonianSystem: hessian must be (2n)x(2n)");
      if ((Hzz - Hzz.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("HamiltonianSystem: hessian not symmetric");
    }
  }
}

double HamiltonianSystem::value_z(const Vec& z) const {
  return eval(z.tail(n), z.head(n));
}

Vec HamiltonianSystem::grad_z(const Vec& z) const {
  const Vec q = z.tail(n), p = z.head(n);
  Vec g(2 * n);
  g << grad_p(q, p), grad_q(q, p);
  return g;
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "del") return Scheme::Del;
  if (name == "canonical") return Scheme::Canonical;
  if (name == "midpoint") return Scheme::Midpoint;
  if (name == "order4") return Scheme::Order4;
  if (name == "explicit_euler") return Scheme::ExplicitEuler;
  throw std::invalid_argument("unknown scheme: " + name);
}

Vec del_residual(const DiscreteLagrangian& L, const Vec& q_prev, const Vec& q_cur,
                 const Vec& q_next, double tau) {
  if (q_prev.size() != L.n || q_cur.size() != L.n || q_next.size() != L.n)
    throw std::invalid_argument("del_residual: dimension mismatch");
  if (tau <= 0.0) throw std::invalid_argument("del_residual: tau must be > 0");
  const Vec dq_prev = (q_cur - q_prev) / tau;
  const Vec dq_cur = (q_next - q_cur) / tau;
  return L.grad_q(q_cur, dq_cur) -
         (L.grad_v(q_cur, dq_cur) - L.grad_v(q_prev, dq_prev)) / tau;
}

Vec del_step(const DiscreteLagrangian& L, const Vec& q_prev, const Vec& q_cur,
             double tau, const NewtonSettings& settings) {
  if (tau <= 0.0) throw std::invalid_argument("del_step: tau must be > 0");
  if (L.potential_gradient)
    return 2.0 * q_cur - q_prev - tau * tau * L.potential_gradient(q_cur);
  const Vec seed = 2.0 * q_cur - q_prev;  // free-flight predictor
  return newton_solve(
      [&](const Vec& q_next) { return del_residual(L, q_prev, q_cur, q_next, tau); },
      seed, settings);
}

std::vector<Vec> integrate_del(const DiscreteLagrangian& L, const Vec& q_prev,
                               const Vec& q_cur, double tau, int steps,
                               const NewtonSettings& settings) {
  std::vector<Vec> qs{q_prev, q_cur};
  qs.reserve(static_cast<std::size_t>(steps) + 2);
  for (int k = 0; k < steps; ++k) {
    const Vec& a = qs[qs.size() - 2];
    const Vec& b = qs.back();
    qs.push_back(del_step(L, a, b, tau, settings));
  }
  return qs;
}

Vec discrete_legendre(const DiscreteLagrangian& L, const Vec& q_cur, const Vec& q_next,
                      double tau) {
  if (tau <= 0.0) throw std::invalid_argument("discrete_legendre: tau must be > 0");
  return L.grad_v(q_cur, (q_next - q_cur) / tau);
}

double hamiltonian_from_lagrangian(const DiscreteLagrangian& L, const Vec& q_cur,
                                   const Vec& q_next, double tau) {
  const Vec dq = (q_next - q_cur) / tau;
  const Vec p = discrete_legendre(L, q_cur, q_next, tau);
  return p.dot(dq) - L.eval(q_cur, dq);
}

std::pair<Vec, Vec> canonical_step(const HamiltonianSystem& H, const Vec& q_cur,
                                   const Vec& p_cur, double tau,
                                   const NewtonSettings& settings) {
  if (tau <= 0.0) throw std::invalid_argument("canonical_step: tau must be > 0");
  std::function<Mat(const Vec&)> jac;
  if (H.has_hessian()) {
    jac = [&](const Vec& p_next) -> Mat {
      const Mat Hzz = H.hessian(q_cur, p_next);
      return Mat::Identity(H.n, H.n) + tau * Hzz.block(H.n, 0, H.n, H.n);
    };
  }
  const Vec p_next = newton_solve(
      [&](const Vec& p_next_) -> Vec {
        return p_next_ - p_cur + tau * H.grad_q(q_cur, p_next_);
      },
      p_cur, settings, jac);
  const Vec q_next = q_cur + tau * H.grad_p(q_cur, p_next);
  return {q_next, p_next};
}

Vec midpoint_step(const HamiltonianSystem& H, const Vec& z_cur, double tau,
                  const NewtonSettings& settings) {
  if (tau <= 0.0) throw std::invalid_argument("midpoint_step: tau must be > 0");
  const Mat J = symplectic_matrix(H.n);
  auto residual = [&](const Vec& z_next) -> Vec {
    const Vec mid = 0.5 * (z_next + z_cur);
    return z_next - z_cur + tau * (J * H.grad_z(mid));  // J^{-1} = -J
  };
  std::function<Mat(const Vec&)> jac;
  if (H.has_hessian()) {
    jac = [&](const Vec& z_next) -> Mat {
      const Vec mid = 0.5 * (z_next + z_cur);
      const Mat Hzz = H.hessian(mid.tail(H.n), mid.head(H.n));
      return Mat::Identity(2 * H.n, 2 * H.n) + 0.5 * tau * J * Hzz;
    };
  }
  const Vec seed = explicit_euler_step(H, z_cur, tau);
  return newton_solve(residual, seed, settings, jac);
}

Vec explicit_euler_step(const HamiltonianSystem& H, const Vec& z_cur, double tau) {
  const Mat J = symplectic_matrix(H.n);
  return z_cur - tau * (J * H.grad_z(z_cur));
}

double modified_hamiltonian(const HamiltonianSystem& H, const Vec& z, double tau) {
  if (!H.has_hessian())
    throw std::invalid_argument("modified_hamiltonian: hessian required");
  const Mat J = symplectic_matrix(H.n);
  const Vec g = H.grad_z(z);
  const Mat Hzz = H.hessian(z.tail(H.n), z.head(H.n));
  // (∇H)^T J H_zz J ∇H = -(J∇H)^T H_zz (J∇H) since J^T = -J.
  const Vec Jg = J * g;
  return H.value_z(z) + tau * tau / 24.0 * Jg.dot(Hzz * Jg);
}

Vec modified_hamiltonian_gradient(const HamiltonianSystem& H, const Vec& z, double tau) {
  Vec g(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double h = 1e-5 * (1.0 + z.norm());
    Vec zp = z, zm = z;
    zp[i] += h;
    zm[i] -= h;
    g[i] = (modified_hamiltonian(H, zp, tau) - modified_hamiltonian(H, zm, tau)) / (2.0 * h);
  }
  return g;
}

Vec fourth_order_step(const HamiltonianSystem& H, const Vec& z_cur, double tau,
                      const NewtonSettings& settings) {
  if (tau <= 0.0) throw std::invalid_argument("fourth_order_step: tau must be > 0");
  const Mat J = symplectic_matrix(H.n);
  auto residual = [&](const Vec& z_next) -> Vec {
    const Vec mid = 0.5 * (z_next + z_cur);
    return z_next - z_cur + tau * (J * modified_hamiltonian_gradient(H, mid, tau));
  };
  const Vec seed = midpoint_step(H, z_cur, tau, settings);
  return newton_solve(residual, seed, settings);
}

Vec scheme_step(Scheme scheme, const HamiltonianSystem& H, const Vec& z_cur, double tau,
                const NewtonSettings& settings) {
  switch (scheme) {
    case Scheme::Canonical: {
      const auto [q_next, p_next] =
          canonical_step(H, z_cur.tail(H.n), z_cur.head(H.n), tau, settings);
      Vec z(2 * H.n);
      z << p_next, q_next;
      return z;
    }
    case Scheme::Midpoint:
      return midpoint_step(H, z_cur, tau, settings);
    case Scheme::Order4:
      return fourth_order_step(H, z_cur, tau, settings);
    case Scheme::ExplicitEuler:
      return explicit_euler_step(H, z_cur, tau);
    case Scheme::Del:
      throw std::invalid_argument(
          "scheme_step: the Euler-Lagrange recursion is not a phase-space map; "
          "use del_step or the canonical pairing");
  }
  throw std::logic_error("scheme_step: unreachable");
}

Vec tangent_step(Scheme scheme, const HamiltonianSystem& H, const Vec& z_cur,
                 const Vec& z_next, const Vec& dz, double tau,
                 const NewtonSettings& settings) {
  if (dz.size() != z_cur.size())
    throw std::invalid_argument("tangent_step: variation dimension mismatch");
  if (tau == 0.0) return dz;
  const int n = H.n;
  if (H.has_hessian()) {
    const Mat J = symplectic_matrix(n);
    switch (scheme) {
      case Scheme::Midpoint: {
        const Vec mid = 0.5 * (z_cur + z_next);
        const Mat S = -J * H.hessian(mid.tail(n), mid.head(n));  // J^{-1} H_zz
        const Mat A = Mat::Identity(2 * n, 2 * n) - 0.5 * tau * S;
        const Mat B = Mat::Identity(2 * n, 2 * n) + 0.5 * tau * S;
        return A.partialPivLu().solve(B * dz);
      }
      case Scheme::Canonical: {
        const Vec q = z_cur.tail(n);
        const Vec p_next = z_next.head(n);
        const Mat Hzz = H.hessian(q, p_next);
        const Mat Hqq = Hzz.block(n, n, n, n);
        const Mat Hqp = Hzz.block(n, 0, n, n);  // ∂(∇_q H)/∂p
        const Mat Hpq = Hzz.block(0, n, n, n);  // ∂(∇_p H)/∂q
        const Mat Hpp = Hzz.block(0, 0, n, n);
        const Vec dp = dz.head(n), dq = dz.tail(n);
        const Mat A = Mat::Identity(n, n) + tau * Hqp;
        const Vec dp_next = A.partialPivLu().solve(dp - tau * Hqq * dq);
        const Vec dq_next = dq + tau * (Hpq * dq + Hpp * dp_next);
        Vec out(2 * n);
        out << dp_next, dq_next;
        return out;
      }
      case Scheme::ExplicitEuler: {
        const Mat Hzz = H.hessian(z_cur.tail(n), z_cur.head(n));
        return dz - tau * (J * (Hzz * dz));
      }
      default:
        break;
    }
  }
  // Directional derivative of the step map by central differences.
  const double norm = dz.norm();
  if (norm == 0.0) return dz;
  const Vec u = dz / norm;
  const double eps = 1e-6 * (1.0 + z_cur.norm());
  // solve the probe steps well below the finite-difference error floor
  NewtonSettings probe = settings;
  probe.tolerance = std::min(probe.tolerance, 1e-14);
  const Vec plus = scheme_step(scheme, H, z_cur + eps * u, tau, probe);
  const Vec minus = scheme_step(scheme, H, z_cur - eps * u, tau, probe);
  return norm * (plus - minus) / (2.0 * eps);
}

Trajectory integrate(Scheme scheme, const HamiltonianSystem& H, const Vec& z0,
                     double tau, int steps, const std::vector<Vec>& tangent_seeds,
                     const NewtonSettings& settings) {
  if (steps < 1) throw std::invalid_argument("integrate: steps must be >= 1");
  Trajectory traj;
  traj.grid = Grid1D(tau, steps + 1, false);
  traj.states.reserve(static_cast<std::size_t>(steps) + 1);
  traj.states.push_back(z0);
  traj.tangents.resize(tangent_seeds.size());
  for (std::size_t t = 0; t < tangent_seeds.size(); ++t) {
    traj.tangents[t].reserve(static_cast<std::size_t>(steps) + 1);
    traj.tangents[t].push_back(tangent_seeds[t]);
  }
  for (int k = 0; k < steps; ++k) {
    const Vec& z = traj.states.back();
    const Vec z_next = scheme_step(scheme, H, z, tau, settings);
    for (std::size_t t = 0; t < traj.tangents.size(); ++t) {
      traj.tangents[t].push_back(
          tangent_step(scheme, H, z, z_next, traj.tangents[t].back(), tau, settings));
    }
    traj.states.push_back(z_next);
  }
  return traj;
}

}  // namespace dvarint
