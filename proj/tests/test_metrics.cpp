#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracle.hpp"
#include "snmix/metrics.hpp"
#include "snmix/rng.hpp"
#include "snmix/special.hpp"

using namespace snmix;

namespace {
DensityGrid gaussian_grid(double mean, double sd, double lo, double hi, int npts) {
  std::vector<double> x(npts), v(npts);
  for (int i = 0; i < npts; ++i) {
    x[i] = lo + (hi - lo) * i / (npts - 1.0);
    v[i] = normal_pdf((x[i] - mean) / sd) / sd;
  }
  return DensityGrid(std::move(x), std::move(v));
}
}  // namespace

TEST_CASE("density grid validation") {
  CHECK_THROWS_AS(DensityGrid({1.0, 0.5}, {0.1, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(DensityGrid({0.0, 1.0}, {0.1}), std::invalid_argument);
  CHECK_THROWS_AS(DensityGrid({0.0, 1.0}, {0.1, std::nan("")}), std::invalid_argument);
}

TEST_CASE("KL divergence on grids") {
  const DensityGrid f = gaussian_grid(0.0, 1.0, -10.0, 10.0, 4001);
  SUBCASE("KL(f,f) = 0") { CHECK(std::abs(kl_divergence(f, f)) < 1e-12); }
  SUBCASE("Gaussian shift: KL = 1/2") {
    const DensityGrid g = gaussian_grid(1.0, 1.0, -10.0, 10.0, 4001);
    CHECK(kl_divergence(f, g) == doctest::Approx(0.5).epsilon(2e-4));
    CHECK(std::abs(kl_divergence(f, g) - 0.5) < 1e-4);
  }
  SUBCASE("support violation returns +inf with the flag") {
    DensityGrid g = f;
    for (std::size_t i = 0; i < g.values.size(); ++i)
      if (g.points[i] > 3.0) g.values[i] = 0.0;
    bool flag = false;
    CHECK(std::isinf(kl_divergence(f, g, &flag)));
    CHECK(flag);
  }
  SUBCASE("mismatched grids are rejected") {
    const DensityGrid g = gaussian_grid(0.0, 1.0, -9.0, 10.0, 4001);
    CHECK_THROWS_AS(kl_divergence(f, g), std::invalid_argument);
  }
}

TEST_CASE("KL on pmfs is an exact sum") {
  const std::vector<double> f = {0.2, 0.6, 0.2};
  const std::vector<double> g = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  const double hand = 0.2 * std::log(0.2 / (1.0 / 3)) + 0.6 * std::log(0.6 / (1.0 / 3)) +
                      0.2 * std::log(0.2 / (1.0 / 3));
  CHECK(kl_divergence_pmf(f, g) == doctest::Approx(hand).epsilon(1e-15));
  CHECK(kl_divergence_pmf(f, f) == 0.0);
  bool flag = false;
  const std::vector<double> half = {0.5, 0.5}, degenerate = {1.0, 0.0};
  CHECK(std::isinf(kl_divergence_pmf(half, degenerate, &flag)));
  CHECK(flag);
}

TEST_CASE("L2 distance") {
  const DensityGrid f = gaussian_grid(0.0, 1.0, -12.0, 12.0, 6001);
  const DensityGrid g = gaussian_grid(0.0, 2.0, -12.0, 12.0, 6001);
  SUBCASE("zero on itself and symmetric") {
    CHECK(l2_distance(f, f) == 0.0);
    CHECK(l2_distance(f, g) == doctest::Approx(l2_distance(g, f)).epsilon(1e-15));
  }
  SUBCASE("matches the quadrature oracle") {
    const double oracle_l2 = std::sqrt(oracle::integrate(
        [](double x) {
          const double a = normal_pdf(x);
          const double b = normal_pdf(x / 2.0) / 2.0;
          return (a - b) * (a - b);
        },
        -12.0, 12.0, 1e-14));
    CHECK(std::abs(l2_distance(f, g) - oracle_l2) < 1e-6);
  }
  SUBCASE("pmf variant is an exact sum") {
    const std::vector<double> a = {0.2, 0.8}, b = {0.4, 0.6};
    CHECK(l2_distance_pmf(a, b) == doctest::Approx(std::sqrt(0.08)).epsilon(1e-15));
  }
}

TEST_CASE("grid refinement stability") {
  const DensityGrid f1 = gaussian_grid(0.0, 1.0, -10.0, 10.0, 2001);
  const DensityGrid g1 = gaussian_grid(0.7, 1.3, -10.0, 10.0, 2001);
  const DensityGrid f2 = gaussian_grid(0.0, 1.0, -10.0, 10.0, 4001);
  const DensityGrid g2 = gaussian_grid(0.7, 1.3, -10.0, 10.0, 4001);
  CHECK(std::abs(kl_divergence(f1, g1) - kl_divergence(f2, g2)) < 1e-4);
  CHECK(std::abs(l2_distance(f1, g1) - l2_distance(f2, g2)) < 1e-4);
}

TEST_CASE("occupied cluster posterior") {
  PosteriorSummary s;
  MixtureDraw d;
  d.atoms = {SkewNormalParams{0, 1, 0}};
  d.weights = {1.0};
  SUBCASE("point mass when every draw has one cluster") {
    for (int i = 0; i < 5; ++i) {
      d.occupied = 1;
      s.draws.push_back(d);
    }
    const OccupiedHistogram h = occupied_cluster_posterior(s);
    CHECK(h.probability.at(1) == doctest::Approx(1.0));
    CHECK(h.mean == doctest::Approx(1.0));
  }
  SUBCASE("hand-built three-draw histogram") {
    for (int k : {2, 4, 2}) {
      d.occupied = k;
      s.draws.push_back(d);
    }
    const OccupiedHistogram h = occupied_cluster_posterior(s);
    CHECK(h.probability.at(2) == doctest::Approx(2.0 / 3.0));
    CHECK(h.probability.at(4) == doctest::Approx(1.0 / 3.0));
    CHECK(h.mean == doctest::Approx(8.0 / 3.0));
    double total = 0.0;
    for (const auto& [k, p] : h.probability) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("batch-means ESS") {
  SUBCASE("constant trace returns the +inf sentinel") {
    const std::vector<double> trace(500, 1.23);
    CHECK(std::isinf(batch_means_ess(trace)));
  }
  SUBCASE("iid traces have ESS near the draw count") {
    Rng rng(606);
    const int n = 2000, reps = 100;
    double mean_ess = 0.0;
    for (int r = 0; r < reps; ++r) {
      std::vector<double> trace(n);
      for (int i = 0; i < n; ++i) trace[i] = rng.normal();
      mean_ess += batch_means_ess(trace);
    }
    mean_ess /= reps;
    CHECK(mean_ess > 0.8 * n);
    CHECK(mean_ess < 1.2 * n);
  }
}

TEST_CASE("trace diagnostics") {
  PosteriorSummary s;
  Rng rng(607);
  for (int d = 0; d < 64; ++d) {
    MixtureDraw draw;
    draw.atoms = {SkewNormalParams{rng.normal(0.0, 0.3), 1.0, 0.0}};
    draw.weights = {1.0};
    draw.occupied = 1;
    s.draws.push_back(draw);
  }
  const std::vector<double> pts = {-1.0, 0.0, 2.0};
  const TraceDiagnostics td = trace_diagnostics(s, pts);
  REQUIRE(td.traces.size() == 3);
  for (const auto& trace : td.traces) CHECK(trace.size() == s.draws.size());
  CHECK(td.traces[1][0] ==
        doctest::Approx(mixture_pdf(s.draws[0], 0.0)).epsilon(1e-15));
  CHECK(td.ess.size() == 3);
}

TEST_CASE("default grid spans data +- 4 sd") {
  const std::vector<double> data = {0.0, 1.0, 2.0, 3.0, 4.0};
  const std::vector<double> grid = default_grid(data, 101);
  const double sd = std::sqrt(2.5);
  CHECK(grid.front() == doctest::Approx(0.0 - 4.0 * sd));
  CHECK(grid.back() == doctest::Approx(4.0 + 4.0 * sd));
  CHECK(grid.size() == 101);
}
