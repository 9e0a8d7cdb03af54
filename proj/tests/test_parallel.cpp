// The OpenMP grid kernels must agree bit for bit with their serial reference
// implementations for any thread count.
#include <doctest.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <vector>

#include "snmix/gibbs.hpp"
#include "snmix/rounding.hpp"
#include "snmix/rng.hpp"
#include "snmix/study.hpp"

using namespace snmix;

namespace {
PosteriorSummary random_summary(int n_draws, int hmax, std::uint64_t seed) {
  Rng rng(seed);
  PosteriorSummary s;
  s.n_data = 10;
  for (int d = 0; d < n_draws; ++d) {
    MixtureDraw draw;
    double total = 0.0;
    std::vector<double> raw(hmax);
    for (int h = 0; h < hmax; ++h) {
      draw.atoms.emplace_back(rng.normal(0.0, 3.0), std::exp(rng.normal(0.0, 0.5)),
                              rng.normal(0.0, 2.0));
      raw[h] = rng.gamma(1.0, 1.0);
      total += raw[h];
    }
    for (int h = 0; h < hmax; ++h) draw.weights.push_back(raw[h] / total);
    draw.alpha = rng.gamma(1.0, 1.0);
    draw.occupied = 1 + static_cast<int>(rng.uniform() * hmax);
    s.draws.push_back(draw);
  }
  return s;
}
}  // namespace

TEST_CASE("posterior_mean_density: parallel equals serial exactly") {
  const PosteriorSummary s = random_summary(40, 12, 11);
  std::vector<double> grid;
  for (double x = -12.0; x <= 12.0; x += 0.01) grid.push_back(x);
  const std::vector<double> serial = posterior_mean_density_serial(s, grid);
  const std::vector<double> parallel = posterior_mean_density(s, grid);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) CHECK(serial[i] == parallel[i]);

#ifdef _OPENMP
  omp_set_num_threads(1);
  const std::vector<double> one_thread = posterior_mean_density(s, grid);
  omp_set_num_threads(omp_get_num_procs());
  for (std::size_t i = 0; i < serial.size(); ++i) CHECK(serial[i] == one_thread[i]);
#endif
}

TEST_CASE("posterior_mean_pmf: parallel equals serial exactly") {
  const PosteriorSummary s = random_summary(30, 8, 12);
  const RoundingGrid g = RoundingGrid::count();
  const std::vector<double> serial = posterior_mean_pmf_serial(s, g, 25);
  const std::vector<double> parallel = posterior_mean_pmf(s, g, 25);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) CHECK(serial[i] == parallel[i]);
}

TEST_CASE("study results do not depend on the thread count") {
#ifdef _OPENMP
  StudyConfig cfg;
  cfg.scenario_ids = {4};
  cfg.sample_sizes = {20};
  cfg.replicates = 2;
  cfg.root_seed = 7;
  cfg.n_iter = 120;
  cfg.burn_in = 40;
  cfg.hmax = 6;
  cfg.grid_points = 201;

  omp_set_num_threads(1);
  const std::vector<StudyRecord> serial = run_study(cfg);
  omp_set_num_threads(omp_get_num_procs());
  const std::vector<StudyRecord> parallel = run_study(cfg);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].kl == parallel[i].kl);
    CHECK(serial[i].l2 == parallel[i].l2);
    CHECK(serial[i].alpha_mean == parallel[i].alpha_mean);
  }
#endif
}
