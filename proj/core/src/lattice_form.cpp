#include "dvarint/lattice_form.hpp"

#include <stdexcept>

namespace dvarint {

namespace {

std::size_t expected_coefficients(int degree) {
  switch (degree) {
    case 0: return 1;
    case 1: return 2;
    case 2: return 1;
    default: throw std::invalid_argument("LatticeForm: degree must be 0, 1 or 2");
  }
}

void require_periodic(const Grid2D& g) {
  if (!g.periodic[0] || !g.periodic[1])
    throw std::invalid_argument("LatticeForm: grid must be periodic in both directions");
}

/// Backward difference (f_k - f_{k-1})/h with periodic wrap.
NodeFunction2D backward_difference(const NodeFunction2D& f, int direction) {
  const Grid2D& g = f.grid;
  const double h = g.steps[static_cast<std::size_t>(direction)];
  NodeFunction2D out(g);
  for (int i = 0; i < g.extents[0]; ++i)
    for (int j = 0; j < g.extents[1]; ++j) {
      const int i0 = direction == 0 ? (i - 1 + g.extents[0]) % g.extents[0] : i;
      const int j0 = direction == 1 ? (j - 1 + g.extents[1]) % g.extents[1] : j;
      out.at(i, j) = (f.at(i, j) - f.at(i0, j0)) / h;
    }
  return out;
}

NodeFunction2D pointwise(const NodeFunction2D& a, const NodeFunction2D& b,
                         double sign = 1.0) {
  NodeFunction2D out(a.grid);
  for (std::size_t k = 0; k < out.values.size(); ++k)
    out.values[k] = sign * a.values[k] * b.values[k];
  return out;
}

NodeFunction2D add(const NodeFunction2D& a, const NodeFunction2D& b, double sb = 1.0) {
  NodeFunction2D out(a.grid);
  for (std::size_t k = 0; k < out.values.size(); ++k)
    out.values[k] = a.values[k] + sb * b.values[k];
  return out;
}

}  // namespace

LatticeForm::LatticeForm(Grid2D g, int degree_, std::vector<NodeFunction2D> coeffs)
    : grid(g), degree(degree_), coefficients(std::move(coeffs)) {
  require_periodic(grid);
  if (coefficients.size() != expected_coefficients(degree))
    throw std::invalid_argument("LatticeForm: wrong coefficient count for degree");
  for (const auto& c : coefficients)
    if (!(c.grid == grid))
      throw std::invalid_argument("LatticeForm: coefficient grid mismatch");
}

LatticeForm LatticeForm::zero(const Grid2D& g, int degree) {
  std::vector<NodeFunction2D> coeffs(expected_coefficients(degree), NodeFunction2D(g));
  return {g, degree, std::move(coeffs)};
}

LatticeForm LatticeForm::from_function(const NodeFunction2D& f) {
  return {f.grid, 0, {f}};
}

LatticeForm LatticeForm::one_form(const NodeFunction2D& f, const NodeFunction2D& g) {
  return {f.grid, 1, {f, g}};
}

LatticeForm LatticeForm::two_form(const NodeFunction2D& w) {
  return {w.grid, 2, {w}};
}

LatticeForm exterior_derivative(const LatticeForm& omega) {
  switch (omega.degree) {
    case 0:
      return LatticeForm::one_form(forward_difference(omega.coefficients[0], 0),
                                   forward_difference(omega.coefficients[0], 1));
    case 1: {
      // d(f dq^1 + g dq^2) = (Δ_1 g - Δ_2 f) dq^1∧dq^2
      NodeFunction2D w = add(forward_difference(omega.coefficients[1], 0),
                             forward_difference(omega.coefficients[0], 1), -1.0);
      return LatticeForm::two_form(w);
    }
    case 2:
      return LatticeForm::zero(omega.grid, 2);
    default:
      throw std::logic_error("exterior_derivative: bad degree");
  }
}

LatticeForm wedge(const LatticeForm& omega, const LatticeForm& eta) {
  if (!(omega.grid == eta.grid))
    throw std::invalid_argument("wedge: grid mismatch");
  const int deg = omega.degree + eta.degree;
  if (deg > 2) throw std::invalid_argument("wedge: degree overflow");

  if (omega.degree == 0) {
    // 0-form on the left scales pointwise, no shifts.
    std::vector<NodeFunction2D> coeffs;
    coeffs.reserve(eta.coefficients.size());
    for (const auto& c : eta.coefficients)
      coeffs.push_back(pointwise(omega.coefficients[0], c));
    return {omega.grid, deg, std::move(coeffs)};
  }
  if (eta.degree == 0) {
    // Each dq^i in omega shifts the function moving past it.
    if (omega.degree == 1) {
      return LatticeForm::one_form(
          pointwise(omega.coefficients[0], shift(eta.coefficients[0], 0)),
          pointwise(omega.coefficients[1], shift(eta.coefficients[0], 1)));
    }
    return LatticeForm::two_form(
        pointwise(omega.coefficients[0], shift(shift(eta.coefficients[0], 0), 1)));
  }
  // 1-form ∧ 1-form: dq^i∧dq^i = 0, dq^2∧dq^1 = -dq^1∧dq^2, and the right
  // factor's coefficient shifts along the left factor's direction.
  NodeFunction2D w = add(pointwise(omega.coefficients[0], shift(eta.coefficients[1], 0)),
                         pointwise(omega.coefficients[1], shift(eta.coefficients[0], 1)),
                         -1.0);
  return LatticeForm::two_form(w);
}

LatticeForm codifferential(const LatticeForm& omega) {
  switch (omega.degree) {
    case 0:
      return LatticeForm::zero(omega.grid, 0);
    case 1:
      return LatticeForm::from_function(
          add(backward_difference(omega.coefficients[0], 0),
              backward_difference(omega.coefficients[1], 1)));
    case 2: {
      NodeFunction2D w1 = backward_difference(omega.coefficients[0], 1);
      for (auto& v : w1.values) v = -v;
      return LatticeForm::one_form(w1, backward_difference(omega.coefficients[0], 0));
    }
    default:
      throw std::logic_error("codifferential: bad degree");
  }
}

NodeFunction2D laplacian(const NodeFunction2D& f) {
  require_periodic(f.grid);
  LatticeForm df = exterior_derivative(LatticeForm::from_function(f));
  LatticeForm lap = codifferential(df);  // dδ vanishes on 0-forms
  return lap.coefficients[0];
}

}  // namespace dvarint
