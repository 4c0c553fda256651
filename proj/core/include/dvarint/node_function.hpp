#pragma once

#include <functional>
#include <vector>

#include "dvarint/grid.hpp"

namespace dvarint {

/// Real-valued function on the nodes of a Grid1D.
///
/// Forward differencing on a non-periodic grid shrinks the domain by one
/// node; the result lives on a grid with n_nodes-1 nodes and the same step.
struct NodeFunction1D {
  Grid1D grid;
  std::vector<double> values;

  NodeFunction1D() = default;
  NodeFunction1D(Grid1D g, std::vector<double> v);

  double operator[](int k) const { return values[static_cast<std::size_t>(k)]; }
  double& operator[](int k) { return values[static_cast<std::size_t>(k)]; }
  int size() const { return static_cast<int>(values.size()); }

  static NodeFunction1D sample(const Grid1D& g, const std::function<double(int)>& f);
};

/// Real-valued function on the nodes of a Grid2D, stored row-major in axis 0.
struct NodeFunction2D {
  Grid2D grid;
  std::vector<double> values;

  NodeFunction2D() = default;
  NodeFunction2D(Grid2D g, std::vector<double> v);
  explicit NodeFunction2D(Grid2D g);  // zero-initialized

  double at(int i, int j) const { return values[index(i, j)]; }
  double& at(int i, int j) { return values[index(i, j)]; }

  /// Periodic-aware lookup: wraps an index along each periodic axis.
  double wrapped(int i, int j) const;

  static NodeFunction2D sample(const Grid2D& g, const std::function<double(int, int)>& f);

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(grid.extents[1]) +
           static_cast<std::size_t>(j);
  }
};

// -- difference calculus on node functions ---------------------------------

/// (Δf)_k = (f_{k+1} - f_k)/step. On a periodic grid the successor index
/// wraps and the result has the full node count; otherwise it loses one node.
NodeFunction1D forward_difference(const NodeFunction1D& f);
NodeFunction2D forward_difference(const NodeFunction2D& f, int direction);

/// (Rf)_k = f_{k+1} along the given direction.
NodeFunction1D shift(const NodeFunction1D& f);
NodeFunction2D shift(const NodeFunction2D& f, int direction);

/// a-parameter Leibniz combination
///   (a f_{k+1} + (1-a) f_k) Δg_k + Δf_k ((1-a) g_{k+1} + a g_k),
/// equal to Δ(f·g) for every a in [0,1]. a=1 is the modified Leibniz rule,
/// a=1/2 the generalized (midpoint) one.
NodeFunction1D product_difference(const NodeFunction1D& f, const NodeFunction1D& g, double a);
NodeFunction2D product_difference(const NodeFunction2D& f, const NodeFunction2D& g,
                                  int direction, double a);

/// Σ_k step·(Δf)_k on a finite non-periodic grid; telescopes to
/// f_last - f_first. Periodic grids are rejected.
double discrete_integral(const NodeFunction1D& f);

}  // namespace dvarint
