#pragma once

#include <vector>

#include "dvarint/node_function.hpp"

namespace dvarint {

/// Degree-graded differential form on a doubly periodic Grid2D.
///
/// Coefficient layout:
///   degree 0: [f]
///   degree 1: [f, g]          meaning f dq^1 + g dq^2   (dq^1 = axis 0)
///   degree 2: [w]             meaning w dq^1 ∧ dq^2
///
/// The calculus is noncommutative: moving a function past dq^i from the
/// right replaces it by its shift along i, which is what makes d obey the
/// graded Leibniz rule with forward differences as coefficients.
/// Forms require periodicity in both directions so every node has a
/// successor (differences and shifts never shrink the domain).
struct LatticeForm {
  Grid2D grid;
  int degree = 0;
  std::vector<NodeFunction2D> coefficients;

  LatticeForm() = default;
  LatticeForm(Grid2D g, int degree_, std::vector<NodeFunction2D> coeffs);

  static LatticeForm zero(const Grid2D& g, int degree);
  static LatticeForm from_function(const NodeFunction2D& f);          // degree 0
  static LatticeForm one_form(const NodeFunction2D& f, const NodeFunction2D& g);
  static LatticeForm two_form(const NodeFunction2D& w);
};

/// Exterior derivative. d of a 0-form has forward differences as 1-form
/// coefficients; d(f dq^1 + g dq^2) = (Δ_1 g - Δ_2 f) dq^1∧dq^2; d of a
/// 2-form is the zero 2-form (the conceptual degree-3 form vanishes on a
/// 2D lattice). d∘d = 0 exactly.
LatticeForm exterior_derivative(const LatticeForm& omega);

/// Graded wedge product with the shift rule: a coefficient passing a dq^i
/// from the left picks up a shift along i; dq^i ∧ dq^i = 0 and
/// dq^1 ∧ dq^2 = -dq^2 ∧ dq^1.
LatticeForm wedge(const LatticeForm& omega, const LatticeForm& eta);

/// Codifferential: degree-lowering companion of d, backward differences
/// with signs fixed so that Δ_L = dδ + δd is the standard central
/// second-difference stencil on 0-forms.
LatticeForm codifferential(const LatticeForm& omega);

/// Lattice Laplacian on a node function: (dδ + δd) applied to the 0-form.
NodeFunction2D laplacian(const NodeFunction2D& f);

}  // namespace dvarint
