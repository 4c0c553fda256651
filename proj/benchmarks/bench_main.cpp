#include <benchmark/benchmark.h>

#include <random>

#include "dvarint/fieldtheory.hpp"
#include "dvarint/lattice_form.hpp"
#include "dvarint/mechanics.hpp"
#include "dvarint/models.hpp"
#include "dvarint/verify.hpp"

using namespace dvarint;

namespace {

void BM_midpoint_step(benchmark::State& state) {
  auto m = make_mechanics({"pendulum", {}});
  Vec z(2);
  z << 0.1, 0.9;
  for (auto _ : state) {
    z = midpoint_step(m.hamiltonian, z, 0.05);
    benchmark::DoNotOptimize(z);
  }
}
BENCHMARK(BM_midpoint_step);

void BM_fourth_order_step(benchmark::State& state) {
  auto m = make_mechanics({"pendulum", {}});
  Vec z(2);
  z << 0.1, 0.9;
  for (auto _ : state) {
    z = fourth_order_step(m.hamiltonian, z, 0.05);
    benchmark::DoNotOptimize(z);
  }
}
BENCHMARK(BM_fourth_order_step);

void BM_cohomology_residual(benchmark::State& state) {
  auto m = make_mechanics({"pendulum", {}});
  const ELForm form = make_el_form(Scheme::Midpoint, m.hamiltonian, 0.1);
  std::mt19937 rng(1u);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vec window(4), xi(4), eta(4);
  for (int i = 0; i < 4; ++i) {
    window[i] = dist(rng);
    xi[i] = dist(rng);
    eta[i] = dist(rng);
  }
  const double step = 1e-5 * (1.0 + window.norm());
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        cohomology_identity_residual(form, window, xi, eta, 0.1, step));
  }
}
BENCHMARK(BM_cohomology_residual);

void BM_box_step_row(benchmark::State& state) {
  auto sys = *make_field({"sine_gordon_bridges", {}}).pde;
  const int n = static_cast<int>(state.range(0));
  const double h = 0.4;
  Grid1D grid{h, n, true};
  FieldRow row(grid, 3);
  for (int j = 0; j < n; ++j) {
    const double x = (j - n / 2) * h;
    row.values(0, j) = sine_gordon_kink(x, 0.0, 0.0);
    row.values(2, j) = 2.0 / std::cosh(x);
  }
  for (auto _ : state) {
    FieldRow next = box_step_row(sys, row, h / 2.0);
    benchmark::DoNotOptimize(next);
  }
}
BENCHMARK(BM_box_step_row)->Arg(16)->Arg(64);

void BM_laplacian(benchmark::State& state) {
  Grid2D g{{1.0, 1.0}, {64, 64}, {true, true}};
  std::mt19937 rng(2u);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  auto f = NodeFunction2D::sample(g, [&](int, int) { return dist(rng); });
  for (auto _ : state) {
    auto lap = laplacian(f);
    benchmark::DoNotOptimize(lap);
  }
}
BENCHMARK(BM_laplacian);

}  // namespace

BENCHMARK_MAIN();
