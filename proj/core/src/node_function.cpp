#include "dvarint/node_function.hpp"

#include <stdexcept>

namespace dvarint {

NodeFunction1D::NodeFunction1D(Grid1D g, std::vector<double> v)
    : grid(g), values(std::move(v)) {
  if (static_cast<int>(values.size()) != grid.n_nodes)
    throw std::invalid_argument("NodeFunction1D: values length must match n_nodes");
}

NodeFunction1D NodeFunction1D::sample(const Grid1D& g, const std::function<double(int)>& f) {
  std::vector<double> v(static_cast<std::size_t>(g.n_nodes));
  for (int k = 0; k < g.n_nodes; ++k) v[static_cast<std::size_t>(k)] = f(k);
  return {g, std::move(v)};
}

NodeFunction2D::NodeFunction2D(Grid2D g, std::vector<double> v)
    : grid(g), values(std::move(v)) {
  if (static_cast<int>(values.size()) != grid.size())
    throw std::invalid_argument("NodeFunction2D: values length must match grid size");
}

NodeFunction2D::NodeFunction2D(Grid2D g)
    : grid(g), values(static_cast<std::size_t>(g.size()), 0.0) {}

double NodeFunction2D::wrapped(int i, int j) const {
  if (grid.periodic[0]) i = ((i % grid.extents[0]) + grid.extents[0]) % grid.extents[0];
  if (grid.periodic[1]) j = ((j % grid.extents[1]) + grid.extents[1]) % grid.extents[1];
  if (i < 0 || i >= grid.extents[0] || j < 0 || j >= grid.extents[1])
    throw std::out_of_range("NodeFunction2D: index outside non-periodic grid");
  return at(i, j);
}

NodeFunction2D NodeFunction2D::sample(const Grid2D& g, const std::function<double(int, int)>& f) {
  NodeFunction2D out(g);
  for (int i = 0; i < g.extents[0]; ++i)
    for (int j = 0; j < g.extents[1]; ++j) out.at(i, j) = f(i, j);
  return out;
}

NodeFunction1D forward_difference(const NodeFunction1D& f) {
  const Grid1D& g = f.grid;
  if (g.n_nodes < 2)
    throw std::invalid_argument("forward_difference: need at least 2 nodes");
  if (g.periodic) {
    NodeFunction1D out = f;
    for (int k = 0; k < g.n_nodes; ++k)
      out[k] = (f[(k + 1) % g.n_nodes] - f[k]) / g.step;
    return out;
  }
  Grid1D shrunk(g.step, g.n_nodes - 1, false);
  std::vector<double> v(static_cast<std::size_t>(shrunk.n_nodes));
  for (int k = 0; k < shrunk.n_nodes; ++k)
    v[static_cast<std::size_t>(k)] = (f[k + 1] - f[k]) / g.step;
  return {shrunk, std::move(v)};
}

NodeFunction2D forward_difference(const NodeFunction2D& f, int direction) {
  const Grid2D& g = f.grid;
  if (direction != 0 && direction != 1)
    throw std::invalid_argument("forward_difference: direction must be 0 or 1");
  const double h = g.steps[static_cast<std::size_t>(direction)];
  if (g.periodic[static_cast<std::size_t>(direction)]) {
    NodeFunction2D out(g);
    for (int i = 0; i < g.extents[0]; ++i)
      for (int j = 0; j < g.extents[1]; ++j) {
        const int i1 = direction == 0 ? (i + 1) % g.extents[0] : i;
        const int j1 = direction == 1 ? (j + 1) % g.extents[1] : j;
        out.at(i, j) = (f.at(i1, j1) - f.at(i, j)) / h;
      }
    return out;
  }
  Grid2D shrunk = g;
  shrunk.extents[static_cast<std::size_t>(direction)] -= 1;
  if (shrunk.extents[static_cast<std::size_t>(direction)] < 2)
    throw std::invalid_argument("forward_difference: grid too small along direction");
  NodeFunction2D out(shrunk);
  for (int i = 0; i < shrunk.extents[0]; ++i)
    for (int j = 0; j < shrunk.extents[1]; ++j) {
      const int i1 = direction == 0 ? i + 1 : i;
      const int j1 = direction == 1 ? j + 1 : j;
      out.at(i, j) = (f.at(i1, j1) - f.at(i, j)) / h;
    }
  return out;
}

NodeFunction1D shift(const NodeFunction1D& f) {
  const Grid1D& g = f.grid;
  if (g.n_nodes < 2) throw std::invalid_argument("shift: need at least 2 nodes");
  if (g.periodic) {
    NodeFunction1D out = f;
    for (int k = 0; k < g.n_nodes; ++k) out[k] = f[(k + 1) % g.n_nodes];
    return out;
  }
  Grid1D shrunk(g.step, g.n_nodes - 1, false);
  std::vector<double> v(f.values.begin() + 1, f.values.end());
  return {shrunk, std::move(v)};
}

NodeFunction2D shift(const NodeFunction2D& f, int direction) {
  const Grid2D& g = f.grid;
  if (direction != 0 && direction != 1)
    throw std::invalid_argument("shift: direction must be 0 or 1");
  if (g.periodic[static_cast<std::size_t>(direction)]) {
    NodeFunction2D out(g);
    for (int i = 0; i < g.extents[0]; ++i)
      for (int j = 0; j < g.extents[1]; ++j) {
        const int i1 = direction == 0 ? (i + 1) % g.extents[0] : i;
        const int j1 = direction == 1 ? (j + 1) % g.extents[1] : j;
        out.at(i, j) = f.at(i1, j1);
      }
    return out;
  }
  Grid2D shrunk = g;
  shrunk.extents[static_cast<std::size_t>(direction)] -= 1;
  if (shrunk.extents[static_cast<std::size_t>(direction)] < 2)
    throw std::invalid_argument("shift: grid too small along direction");
  NodeFunction2D out(shrunk);
  for (int i = 0; i < shrunk.extents[0]; ++i)
    for (int j = 0; j < shrunk.extents[1]; ++j)
      out.at(i, j) = f.at(direction == 0 ? i + 1 : i, direction == 1 ? j + 1 : j);
  return out;
}

namespace {
void check_leibniz_parameter(double a) {
  if (a < 0.0 || a > 1.0)
    throw std::invalid_argument("product_difference: a must be in [0,1]");
}
}  // namespace

NodeFunction1D product_difference(const NodeFunction1D& f, const NodeFunction1D& g, double a) {
  check_leibniz_parameter(a);
  if (!(f.grid == g.grid))
    throw std::invalid_argument("product_difference: mismatched grids");
  const Grid1D& grid = f.grid;
  if (grid.n_nodes < 2)
    throw std::invalid_argument("product_difference: need at least 2 nodes");
  const double h = grid.step;
  const int n_out = grid.periodic ? grid.n_nodes : grid.n_nodes - 1;
  Grid1D out_grid(h, n_out, grid.periodic);
  std::vector<double> v(static_cast<std::size_t>(n_out));
  for (int k = 0; k < n_out; ++k) {
    const int k1 = grid.periodic ? (k + 1) % grid.n_nodes : k + 1;
    const double df = (f[k1] - f[k]) / h;
    const double dg = (g[k1] - g[k]) / h;
    v[static_cast<std::size_t>(k)] =
        (a * f[k1] + (1.0 - a) * f[k]) * dg + df * ((1.0 - a) * g[k1] + a * g[k]);
  }
  return {out_grid, std::move(v)};
}

NodeFunction2D product_difference(const NodeFunction2D& f, const NodeFunction2D& g,
                                  int direction, double a) {
  check_leibniz_parameter(a);
  if (!(f.grid == g.grid))
    throw std::invalid_argument("product_difference: mismatched grids");
  NodeFunction2D df = forward_difference(f, direction);
  NodeFunction2D dg = forward_difference(g, direction);
  NodeFunction2D sf = shift(f, direction);
  NodeFunction2D sg = shift(g, direction);
  NodeFunction2D out(df.grid);
  for (int i = 0; i < out.grid.extents[0]; ++i)
    for (int j = 0; j < out.grid.extents[1]; ++j) {
      const double fk = f.at(i, j), gk = g.at(i, j);
      const double fk1 = sf.at(i, j), gk1 = sg.at(i, j);
      out.at(i, j) = (a * fk1 + (1.0 - a) * fk) * dg.at(i, j) +
                     df.at(i, j) * ((1.0 - a) * gk1 + a * gk);
    }
  return out;
}

double discrete_integral(const NodeFunction1D& f) {
  if (f.grid.periodic)
    throw std::invalid_argument("discrete_integral: periodic grid has no boundary");
  double sum = 0.0;
  for (int k = 0; k + 1 < f.grid.n_nodes; ++k)
    sum += f.grid.step * (f[k + 1] - f[k]) / f.grid.step;
  return sum;
}

}  // namespace dvarint
