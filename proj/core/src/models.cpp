#include "dvarint/models.hpp"

#include <cmath>
#include <stdexcept>

namespace dvarint {

double ModelSpec::param_or(const std::string& key, double fallback) const {
  auto it = parameters.find(key);
  return it == parameters.end() ? fallback : it->second;
}

namespace {

/// Separable pair L = ½|v|² - V(q), H = ½|p|² + V(q); each is the discrete
/// Legendre transform of the other.
MechanicsModel separable_pair(std::function<double(double)> V,
                              std::function<double(double)> Vp,
                              std::function<double(double)> Vpp) {
  DiscreteLagrangian L(
      1,
      [V](const Vec& q, const Vec& v) { return 0.5 * v.squaredNorm() - V(q[0]); },
      [Vp](const Vec& q, const Vec&) { return Vec::Constant(1, -Vp(q[0])); },
      [](const Vec&, const Vec& v) { return v; });
  L.potential_gradient = [Vp](const Vec& q) { return Vec::Constant(1, Vp(q[0])); };
  HamiltonianSystem H(
      1,
      [V](const Vec& q, const Vec& p) { return 0.5 * p.squaredNorm() + V(q[0]); },
      [Vp](const Vec& q, const Vec&) { return Vec::Constant(1, Vp(q[0])); },
      [](const Vec&, const Vec& p) { return p; },
      [Vpp](const Vec& q, const Vec&) {
        Mat h = Mat::Zero(2, 2);
        h(0, 0) = 1.0;
        h(1, 1) = Vpp(q[0]);
        return h;
      });
  return {std::move(L), std::move(H)};
}

DiscreteFieldLagrangian wave_lagrangian(std::function<double(double)> V,
                                        std::function<double(double)> Vp) {
  DiscreteFieldLagrangian L(
      [V](double u, double vt, double vx) { return 0.5 * vt * vt - 0.5 * vx * vx - V(u); },
      [Vp](double u, double, double) { return -Vp(u); },
      [](double, double vt, double) { return vt; },
      [](double, double, double vx) { return -vx; });
  L.potential_derivative = std::move(Vp);
  return L;
}

/// Bridges matrices shared by the wave-family PDEs with Z = (u, v, w),
/// v the time and w the space derivative of u. Substituting into
/// M Z_t + K Z_x = grad S with S = ½(v² - w²) + U(u) yields
///   -v_t + w_x = U'(u),  u_t = v,  u_x = w,
/// i.e. u_tt - u_xx = -U'(u).
Mat bridges_M() {
  Mat M = Mat::Zero(3, 3);
  M(0, 1) = -1.0;
  M(1, 0) = 1.0;
  return M;
}

Mat bridges_K() {
  Mat K = Mat::Zero(3, 3);
  K(0, 2) = 1.0;
  K(2, 0) = -1.0;
  return K;
}

HamiltonianPDESystem bridges_system(std::function<double(double)> U,
                                    std::function<double(double)> Up,
                                    std::function<double(double)> Upp) {
  return HamiltonianPDESystem(
      bridges_M(), bridges_K(), 1.0,
      [U](const Vec& z) { return 0.5 * (z[1] * z[1] - z[2] * z[2]) + U(z[0]); },
      [Up](const Vec& z) {
        Vec g(3);
        g << Up(z[0]), z[1], -z[2];
        return g;
      },
      [Upp](const Vec& z) {
        Mat h = Mat::Zero(3, 3);
        h(0, 0) = Upp(z[0]);
        h(1, 1) = 1.0;
        h(2, 2) = -1.0;
        return h;
      });
}

}  // namespace

MechanicsModel make_mechanics(const ModelSpec& spec) {
  if (spec.name == "harmonic") {
    const double w0 = spec.param_or("omega0", 1.0);
    const double w2 = w0 * w0;
    return separable_pair([w2](double q) { return 0.5 * w2 * q * q; },
                          [w2](double q) { return w2 * q; },
                          [w2](double) { return w2; });
  }
  if (spec.name == "pendulum") {
    return separable_pair([](double q) { return -std::cos(q); },
                          [](double q) { return std::sin(q); },
                          [](double q) { return std::cos(q); });
  }
  if (spec.name == "quartic") {
    return separable_pair([](double q) { return 0.25 * q * q * q * q; },
                          [](double q) { return q * q * q; },
                          [](double q) { return 3.0 * q * q; });
  }
  throw std::invalid_argument("make_mechanics: unknown model '" + spec.name + "'");
}

FieldModel make_field(const ModelSpec& spec) {
  FieldModel out;
  if (spec.name == "nonlinear_wave") {
    if (spec.param_or("cosine", 0.0) != 0.0) {
      out.lagrangian = wave_lagrangian([](double u) { return 1.0 - std::cos(u); },
                                       [](double u) { return std::sin(u); });
    } else {
      const double m = spec.param_or("mass", 1.0);
      const double m2 = m * m;
      out.lagrangian = wave_lagrangian([m2](double u) { return 0.5 * m2 * u * u; },
                                       [m2](double u) { return m2 * u; });
    }
    return out;
  }
  if (spec.name == "sine_gordon_bridges") {
    out.pde = bridges_system([](double u) { return -std::cos(u); },
                             [](double u) { return std::sin(u); },
                             [](double u) { return std::cos(u); });
    return out;
  }
  if (spec.name == "linear_wave_bridges") {
    const double m = spec.param_or("mass", 1.0);
    const double m2 = m * m;
    out.pde = bridges_system([m2](double u) { return 0.5 * m2 * u * u; },
                             [m2](double u) { return m2 * u; },
                             [m2](double) { return m2; });
    return out;
  }
  throw std::invalid_argument("make_field: unknown model '" + spec.name + "'");
}

double sine_gordon_kink(double x, double x0, double c) {
  if (!(std::abs(c) < 1.0))
    throw std::invalid_argument("sine_gordon_kink: |c| must be < 1");
  return 4.0 * std::atan(std::exp((x - x0) / std::sqrt(1.0 - c * c)));
}

}  // namespace dvarint
