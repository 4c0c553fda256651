#include <doctest.h>

#include <random>

#include "dvarint/lattice_form.hpp"
#include "dvarint/node_function.hpp"

using namespace dvarint;

namespace {

Grid2D periodic_grid(int n) {
  return Grid2D{{1.0, 1.0}, {n, n}, {true, true}};
}

NodeFunction2D random_function(const Grid2D& g, std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  return NodeFunction2D::sample(g, [&](int, int) { return dist(rng); });
}

double max_coeff_abs(const LatticeForm& w) {
  double m = 0.0;
  for (const auto& c : w.coefficients)
    for (double v : c.values) m = std::max(m, std::abs(v));
  return m;
}

double max_coeff_diff(const LatticeForm& a, const LatticeForm& b) {
  double m = 0.0;
  for (std::size_t c = 0; c < a.coefficients.size(); ++c)
    for (std::size_t k = 0; k < a.coefficients[c].values.size(); ++k)
      m = std::max(m, std::abs(a.coefficients[c].values[k] - b.coefficients[c].values[k]));
  return m;
}

}  // namespace

TEST_CASE("forward difference on a 1D grid") {
  Grid1D g{0.5, 3, false};
  NodeFunction1D f(g, {1.0, 2.0, 4.0});
  auto df = forward_difference(f);
  REQUIRE(df.size() == 2);
  CHECK(df[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(df[1] == doctest::Approx(4.0).epsilon(1e-15));

  NodeFunction1D c(g, {3.0, 3.0, 3.0});
  for (double v : forward_difference(c).values) CHECK(v == 0.0);

  auto lin = NodeFunction1D::sample(Grid1D{0.25, 8, false},
                                    [](int k) { return 3.0 * 0.25 * k; });
  for (double v : forward_difference(lin).values) CHECK(v == doctest::Approx(3.0));
}

TEST_CASE("shift relates to the forward difference") {
  Grid1D g{1.0, 3, false};
  NodeFunction1D f(g, {1.0, 2.0, 4.0});
  auto rf = shift(f);
  REQUIRE(rf.size() == 2);
  CHECK(rf[0] == 2.0);
  CHECK(rf[1] == 4.0);
  auto df = forward_difference(f);
  for (int k = 0; k < df.size(); ++k)
    CHECK(df[k] == doctest::Approx((rf[k] - f[k]) / g.step));

  Grid1D gp{1.0, 4, true};
  NodeFunction1D cp(gp, {5.0, 5.0, 5.0, 5.0});
  auto rcp = shift(cp);
  for (int k = 0; k < rcp.size(); ++k) CHECK(rcp[k] == 5.0);
}

TEST_CASE("product difference equals the difference of the product") {
  Grid1D g{1.0, 2, false};
  NodeFunction1D f(g, {1.0, 2.0});
  NodeFunction1D h(g, {3.0, 5.0});
  CHECK(product_difference(f, h, 1.0)[0] == doctest::Approx(7.0));
  CHECK(product_difference(f, h, 0.5)[0] == doctest::Approx(7.0));

  // constant second factor scales the difference of the first
  NodeFunction1D c(g, {4.0, 4.0});
  for (double a : {0.0, 0.3, 1.0})
    CHECK(product_difference(f, c, a)[0] == doctest::Approx(4.0 * 1.0));

  // the a-family is constant in a on random data
  std::mt19937 rng(7u);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Grid1D gr{0.2, 12, false};
  for (int trial = 0; trial < 20; ++trial) {
    auto fr = NodeFunction1D::sample(gr, [&](int) { return dist(rng); });
    auto gr2 = NodeFunction1D::sample(gr, [&](int) { return dist(rng); });
    NodeFunction1D prod = fr;
    for (int k = 0; k < prod.size(); ++k) prod[k] = fr[k] * gr2[k];
    auto dprod = forward_difference(prod);
    const double a = 0.5 * (dist(rng) + 1.0);
    auto pd = product_difference(fr, gr2, a);
    for (int k = 0; k < dprod.size(); ++k)
      CHECK(std::abs(pd[k] - dprod[k]) <= 1e-13);
  }
}

TEST_CASE("discrete integral telescopes") {
  Grid1D g{1.0, 3, false};
  CHECK(discrete_integral(NodeFunction1D(g, {1.0, 4.0, 9.0})) == doctest::Approx(8.0));
  CHECK(discrete_integral(NodeFunction1D(g, {2.0, 2.0, 2.0})) == doctest::Approx(0.0));
  CHECK(discrete_integral(NodeFunction1D(g, {0.0, 1.0, 0.0})) == doctest::Approx(0.0));
  CHECK_THROWS_AS(discrete_integral(NodeFunction1D(Grid1D{1.0, 3, true}, {1, 2, 3})),
                  std::invalid_argument);

  std::mt19937 rng(11u);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  Grid1D gr{0.7, 20, false};
  for (int trial = 0; trial < 100; ++trial) {
    auto f = NodeFunction1D::sample(gr, [&](int) { return dist(rng); });
    CHECK(discrete_integral(f) == doctest::Approx(f[19] - f[0]).epsilon(1e-14));
  }
}

TEST_CASE("exterior derivative of simple forms") {
  Grid2D g = periodic_grid(8);
  auto f = NodeFunction2D::sample(g, [](int i, int j) { return double(i * j); });
  auto df = exterior_derivative(LatticeForm::from_function(f));
  // away from the wrap seam: coefficient of dq^1 is j, of dq^2 is i
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) {
      CHECK(df.coefficients[0].at(i, j) == doctest::Approx(double(j)));
      CHECK(df.coefficients[1].at(i, j) == doctest::Approx(double(i)));
    }
  auto zero = NodeFunction2D(g);
  auto dw = exterior_derivative(LatticeForm::one_form(f, zero));
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j)
      CHECK(dw.coefficients[0].at(i, j) == doctest::Approx(-double(i)));
}

TEST_CASE("nilpotency of d") {
  Grid2D g = periodic_grid(16);
  std::mt19937 rng(3u);
  for (int trial = 0; trial < 100; ++trial) {
    auto f = random_function(g, rng);
    CHECK(max_coeff_abs(exterior_derivative(
              exterior_derivative(LatticeForm::from_function(f)))) <= 1e-14);
    auto w = LatticeForm::one_form(random_function(g, rng), random_function(g, rng));
    CHECK(max_coeff_abs(exterior_derivative(exterior_derivative(w))) <= 1e-14);
  }
}

TEST_CASE("graded Leibniz rule for the wedge") {
  Grid2D g = periodic_grid(16);
  std::mt19937 rng(5u);
  for (int trial = 0; trial < 100; ++trial) {
    auto f = LatticeForm::from_function(random_function(g, rng));
    auto w = LatticeForm::one_form(random_function(g, rng), random_function(g, rng));
    auto lhs = exterior_derivative(wedge(f, w));
    auto rhs_a = wedge(exterior_derivative(f), w);
    auto rhs_b = wedge(f, exterior_derivative(w));
    LatticeForm rhs = rhs_a;
    for (std::size_t c = 0; c < rhs.coefficients.size(); ++c)
      for (std::size_t k = 0; k < rhs.coefficients[c].values.size(); ++k)
        rhs.coefficients[c].values[k] += rhs_b.coefficients[c].values[k];
    CHECK(max_coeff_diff(lhs, rhs) <= 1e-13);
  }
}

TEST_CASE("wedge algebra basics") {
  Grid2D g = periodic_grid(6);
  auto one = NodeFunction2D::sample(g, [](int, int) { return 1.0; });
  auto zero = NodeFunction2D(g);
  auto dq1 = LatticeForm::one_form(one, zero);
  CHECK(max_coeff_abs(wedge(dq1, dq1)) == 0.0);

  std::mt19937 rng(9u);
  auto f = random_function(g, rng);
  auto h = random_function(g, rng);
  auto prod = wedge(LatticeForm::one_form(f, zero), LatticeForm::one_form(zero, h));
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      CHECK(prod.coefficients[0].at(i, j) ==
            doctest::Approx(f.at(i, j) * h.wrapped(i + 1, j)));
}

TEST_CASE("lattice Laplacian equals the 5-point stencil") {
  Grid2D g = periodic_grid(8);
  auto c = NodeFunction2D::sample(g, [](int, int) { return 2.5; });
  for (double v : laplacian(c).values) CHECK(std::abs(v) <= 1e-14);

  auto f2 = NodeFunction2D::sample(g, [](int i, int) { return double(i * i); });
  auto lap2 = laplacian(f2);
  for (int i = 1; i < 7; ++i)
    for (int j = 0; j < 8; ++j) CHECK(lap2.at(i, j) == doctest::Approx(2.0));

  std::mt19937 rng(13u);
  for (int trial = 0; trial < 20; ++trial) {
    auto f = random_function(g, rng);
    auto lap = laplacian(f);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) {
        const double stencil = f.wrapped(i + 1, j) + f.wrapped(i - 1, j) +
                               f.wrapped(i, j + 1) + f.wrapped(i, j - 1) -
                               4.0 * f.at(i, j);
        CHECK(std::abs(lap.at(i, j) - stencil) <= 1e-13);
      }
  }
}
