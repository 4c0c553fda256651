#pragma once

#include <array>
#include <stdexcept>

namespace dvarint {

/// Regular 1D lattice: equally spaced nodes t_k = t_0 + k*step.
/// A single-node grid can only arise as the result of differencing a
/// two-node one; operations that need a successor check for >= 2 themselves.
struct Grid1D {
  double step = 1.0;
  int n_nodes = 2;
  bool periodic = false;

  Grid1D() = default;
  Grid1D(double step_, int n_nodes_, bool periodic_ = false)
      : step(step_), n_nodes(n_nodes_), periodic(periodic_) {
    if (step <= 0.0) throw std::invalid_argument("Grid1D: step must be > 0");
    if (n_nodes < 1) throw std::invalid_argument("Grid1D: need at least 1 node");
  }

  bool operator==(const Grid1D&) const = default;
};

/// Regular 2D lattice with independent step lengths and extents per axis.
/// Axis 0 is the first index (time in the field modules), axis 1 the second.
struct Grid2D {
  std::array<double, 2> steps{1.0, 1.0};
  std::array<int, 2> extents{2, 2};
  std::array<bool, 2> periodic{false, false};

  Grid2D() = default;
  Grid2D(std::array<double, 2> steps_, std::array<int, 2> extents_,
         std::array<bool, 2> periodic_ = {false, false})
      : steps(steps_), extents(extents_), periodic(periodic_) {
    if (steps[0] <= 0.0 || steps[1] <= 0.0)
      throw std::invalid_argument("Grid2D: steps must be > 0");
    if (extents[0] < 2 || extents[1] < 2)
      throw std::invalid_argument("Grid2D: extents must be >= 2");
  }

  int size() const { return extents[0] * extents[1]; }

  bool operator==(const Grid2D&) const = default;
};

}  // namespace dvarint
