// Timing comparison of the serial reference grid kernels against their
// OpenMP counterparts. Not part of the test suite; build and run directly:
//   ./build/bench/bench_density [draws] [grid_points]
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "snmix/gibbs.hpp"
#include "snmix/rng.hpp"
#include "snmix/rounding.hpp"

using namespace snmix;

namespace {

PosteriorSummary synthetic_summary(int n_draws, int hmax, std::uint64_t seed) {
  Rng rng(seed);
  PosteriorSummary s;
  s.n_data = 100;
  for (int d = 0; d < n_draws; ++d) {
    MixtureDraw draw;
    double total = 0.0;
    std::vector<double> raw(hmax);
    for (int h = 0; h < hmax; ++h) {
      draw.atoms.emplace_back(rng.normal(0.0, 4.0), std::exp(rng.normal(0.0, 0.4)),
                              rng.normal(0.0, 2.0));
      raw[h] = rng.gamma(1.0, 1.0);
      total += raw[h];
    }
    for (int h = 0; h < hmax; ++h) draw.weights.push_back(raw[h] / total);
    draw.alpha = 1.0;
    draw.occupied = hmax;
    s.draws.push_back(draw);
  }
  return s;
}

template <typename F>
double time_ms(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const int n_draws = argc > 1 ? std::atoi(argv[1]) : 400;
  const int n_grid = argc > 2 ? std::atoi(argv[2]) : 2001;

  const PosteriorSummary summary = synthetic_summary(n_draws, 20, 99);
  std::vector<double> grid(n_grid);
  for (int i = 0; i < n_grid; ++i) grid[i] = -20.0 + 40.0 * i / (n_grid - 1.0);

#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (OpenMP disabled)\n");
#endif
  std::printf("summary: %d draws x 20 atoms, grid %d points\n", n_draws, n_grid);

  std::vector<double> serial_out, parallel_out;
  const double t_serial =
      time_ms([&] { serial_out = posterior_mean_density_serial(summary, grid); });
  const double t_parallel =
      time_ms([&] { parallel_out = posterior_mean_density(summary, grid); });
  bool equal = serial_out == parallel_out;
  std::printf("density  serial %8.1f ms | openmp %8.1f ms | speedup %.2fx | bit-equal %s\n",
              t_serial, t_parallel, t_serial / t_parallel, equal ? "yes" : "NO");

  const RoundingGrid count = RoundingGrid::count();
  std::vector<double> pmf_serial, pmf_parallel;
  const double t_pmf_serial =
      time_ms([&] { pmf_serial = posterior_mean_pmf_serial(summary, count, 200); });
  const double t_pmf_parallel =
      time_ms([&] { pmf_parallel = posterior_mean_pmf(summary, count, 200); });
  equal = pmf_serial == pmf_parallel;
  std::printf("pmf      serial %8.1f ms | openmp %8.1f ms | speedup %.2fx | bit-equal %s\n",
              t_pmf_serial, t_pmf_parallel, t_pmf_serial / t_pmf_parallel,
              equal ? "yes" : "NO");
  return equal ? 0 : 1;
}
