#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracle.hpp"
#include "snmix/rng.hpp"
#include "snmix/skew_normal.hpp"
#include "snmix/special.hpp"

using namespace snmix;

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(SkewNormalParams(0.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(SkewNormalParams(0.0, -2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(SkewNormalParams(std::nan(""), 1.0, 1.0), std::invalid_argument);
  const SkewNormalParams p(0.0, 1.0, 3.0);
  CHECK(p.delta() == doctest::Approx(3.0 / std::sqrt(10.0)).epsilon(1e-15));
  CHECK(std::abs(SkewNormalParams(0, 1, 1e30).delta()) < 1.0);  // clamp keeps |delta| < 1
  CHECK(SkewNormalParams(0, 1, 1e30).delta() > 0.999999);
}

TEST_CASE("sn_pdf values and normal reduction") {
  CHECK(sn_pdf(0.0, {0, 1, 0}) == doctest::Approx(0.3989422804).epsilon(1e-9));
  for (double lambda : {-5.0, -0.7, 0.3, 2.0, 40.0})
    CHECK(sn_pdf(0.0, {0, 1, lambda}) == doctest::Approx(0.3989422804).epsilon(1e-9));
  for (double x = -6.0; x <= 6.0; x += 0.25) {
    const double diff = std::abs(sn_pdf(x, {1.0, 2.0, 0.0}) - normal_pdf((x - 1.0) / 2.0) / 2.0);
    CHECK(diff < 1e-14);
  }
}

TEST_CASE("sn_pdf integrates to one") {
  const SkewNormalParams p(1.5, 2.0, 4.0);
  const double mass =
      oracle::integrate([&](double x) { return sn_pdf(x, p); }, -20.0, 30.0, 1e-12);
  CHECK(std::abs(mass - 1.0) < 1e-8);
}

TEST_CASE("sn_cdf values, limits, monotonicity") {
  CHECK(sn_cdf(2.0, {2.0, 3.0, 0.0}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sn_cdf(0.0, {0, 1, 1}) == doctest::Approx(0.25).epsilon(1e-10));
  const SkewNormalParams p(1.0, 0.5, 3.0);
  CHECK(std::abs(sn_cdf(p.xi + 8.0 * p.omega, p) - 1.0) < 1e-10);
  CHECK(sn_cdf(p.xi - 12.0 * p.omega, p) < 1e-10);
  // Nondecreasing up to cancellation noise in the extreme tails (the
  // Phi - 2T form loses all relative precision below ~1e-20).
  double prev = -1.0;
  for (double x = -4.0; x <= 6.0; x += 0.05) {
    const double c = sn_cdf(x, p);
    CHECK(c >= prev - 1e-15);
    if (c > 1e-12 && prev > 1e-12) CHECK(c >= prev);
    prev = c;
  }
}

TEST_CASE("sn_cdf derivative matches sn_pdf") {
  const SkewNormalParams p(0.5, 1.3, -2.0);
  for (double x = -5.0; x <= 5.0; x += 0.5) {
    const double h = 1e-5;
    const double fd = (sn_cdf(x + h, p) - sn_cdf(x - h, p)) / (2.0 * h);
    CHECK(std::abs(fd - sn_pdf(x, p)) < 1e-6);
  }
}

TEST_CASE("sn_cdf equals quadrature of sn_pdf") {
  const SkewNormalParams p(-1.0, 2.0, 5.0);
  for (double x : {-2.0, 0.0, 1.5, 4.0}) {
    const double q =
        oracle::integrate([&](double t) { return sn_pdf(t, p); }, p.xi - 15.0 * p.omega, x, 1e-12);
    CHECK(sn_cdf(x, p) == doctest::Approx(q).epsilon(1e-9));
  }
}

TEST_CASE("sn_quantile basics and roundtrip") {
  CHECK(sn_quantile(0.5, {0, 1, 0}) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(std::abs(sn_quantile(0.25, {0, 1, 1})) < 1e-8);
  CHECK_THROWS_AS(sn_quantile(0.0, {0, 1, 0}), std::domain_error);
  CHECK_THROWS_AS(sn_quantile(1.0, {0, 1, 0}), std::domain_error);
  CHECK_THROWS_AS(sn_quantile(-0.3, {0, 1, 0}), std::domain_error);

  Rng rng(12345);
  const std::vector<SkewNormalParams> ps = {
      {0, 1, 0}, {2, 0.5, 4}, {-3, 2.2, -6}, {0.1, 10, 1}, {5, 0.01, 12}};
  for (const auto& p : ps) {
    for (int k = 0; k < 40; ++k) {
      const double x = sn_sample(p, rng);
      const double back = sn_quantile(sn_cdf(x, p), p);
      CHECK(std::abs(back - x) < 1e-8 * std::max(1.0, std::abs(x)));
    }
  }
}

TEST_CASE("sn_quantile is monotone in u") {
  const SkewNormalParams p(1.0, 2.0, -3.0);
  double prev = -1e308;
  for (double u = 0.001; u < 0.999; u += 0.007) {
    const double q = sn_quantile(u, p);
    CHECK(q >= prev - 1e-9);
    prev = q;
  }
}

TEST_CASE("sn_sample moments") {
  const int n = 1000000;
  for (double lambda : {0.0, 2.0, -5.0}) {
    const SkewNormalParams p(0.0, 1.0, lambda);
    const double d = p.delta();
    Rng rng(777);
    std::vector<double> xs(n), sq(n);
    for (int i = 0; i < n; ++i) {
      xs[i] = sn_sample(p, rng);
      sq[i] = xs[i] * xs[i];
    }
    const auto mx = oracle::mean_se(xs);
    const auto m2 = oracle::mean_se(sq);
    const double true_mean = d * std::sqrt(2.0 / std::numbers::pi);
    const double true_var = 1.0 - 2.0 * d * d / std::numbers::pi;
    CHECK(std::abs(mx.mean - true_mean) < 4.0 * mx.se);
    CHECK(std::abs((m2.mean - mx.mean * mx.mean) - true_var) < 5.0 * m2.se);
  }
}

TEST_CASE("second moment equals squared scale for xi = 0") {
  const SkewNormalParams p(0.0, 1.7, 2.5);
  const int n = 1000000;
  Rng rng(2024);
  std::vector<double> sq(n);
  for (int i = 0; i < n; ++i) {
    const double x = sn_sample(p, rng);
    sq[i] = x * x;
  }
  const auto m = oracle::mean_se(sq);
  CHECK(std::abs(m.mean - p.omega * p.omega) < 4.0 * m.se);
}

TEST_CASE("sampler agrees with sn_cdf (KS at 1%)") {
  const int n = 100000;
  for (const SkewNormalParams& p :
       {SkewNormalParams{0, 1, 0}, SkewNormalParams{1, 2, 3}, SkewNormalParams{-2, 0.5, -8}}) {
    Rng rng(99);
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = sn_sample(p, rng);
    const double d = oracle::ks_statistic(xs, [&](double x) { return sn_cdf(x, p); });
    CHECK(d < oracle::ks_crit_1pct(n));
  }
}

TEST_CASE("truncated positive normal sampler") {
  Rng rng(5150);
  SUBCASE("half-normal case") {
    const int n = 1000000;
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = truncated_positive_normal_sample(0.0, 1.0, rng);
    const auto m = oracle::mean_se(xs);
    CHECK(std::abs(m.mean - std::sqrt(2.0 / std::numbers::pi)) < 4.0 * m.se);
    CHECK(*std::min_element(xs.begin(), xs.end()) > 0.0);
  }
  SUBCASE("far-tail mean") {
    const int n = 200000;
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) {
      xs[i] = truncated_positive_normal_sample(-8.0, 1.0, rng);
      REQUIRE(std::isfinite(xs[i]));
      REQUIRE(xs[i] > 0.0);
    }
    // mean of N(-8,1) truncated to (0,inf) via quadrature; the constant
    // phi(8) cancels in the ratio, avoiding underflow
    auto g = [](double x) { return std::exp(-8.0 * x - 0.5 * x * x); };
    const double z0 = oracle::integrate(g, 0.0, 6.0, 1e-14);
    const double m1 = oracle::integrate([&](double x) { return x * g(x); }, 0.0, 6.0, 1e-14);
    const auto m = oracle::mean_se(xs);
    CHECK(std::abs(m.mean - m1 / z0) < 4.0 * m.se);
  }
}

TEST_CASE("sun conditional sampler") {
  SUBCASE("empty z draws exactly from the prior") {
    const SunConditional c(10.0, {});
    Rng rng(31);
    const int n = 100000;
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = sun_conditional_sample(c, 3.0, 1.0, rng);
    const double d = oracle::ks_statistic(
        xs, [](double x) { return normal_cdf(x / std::sqrt(10.0)); });
    CHECK(d < oracle::ks_crit_1pct(n));
  }
  SUBCASE("all-zero z draws exactly from the prior") {
    const SunConditional c(4.0, {0.0, 0.0, 0.0});
    Rng rng(32);
    const int n = 100000;
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = sun_conditional_sample(c, -1.0, 1.0, rng);
    const double d =
        oracle::ks_statistic(xs, [](double x) { return normal_cdf(x / 2.0); });
    CHECK(d < oracle::ks_crit_1pct(n));
  }
  SUBCASE("Metropolis chain matches the quadrature-normalized target") {
    const SunConditional c(10.0, {1.0, -0.5});
    Rng rng(33);
    const int n = 200000;
    std::vector<double> xs(n);
    double lam = 0.0;
    for (int i = 0; i < n; ++i) {
      lam = sun_conditional_sample(c, lam, 2.5, rng);
      xs[i] = lam;
    }
    const double z0 = oracle::integrate(
        [&](double l) { return std::exp(c.log_unnormalized(l)); }, -25.0, 25.0, 1e-13);
    std::vector<double> grid;
    for (double g = -8.0; g <= 8.0; g += 0.25) grid.push_back(g);
    const double sup = oracle::ecdf_sup_distance(xs, grid, [&](double g) {
      return oracle::integrate(
                 [&](double l) { return std::exp(c.log_unnormalized(l)); }, -25.0, g, 1e-12) /
             z0;
    });
    CHECK(sup < 0.01);
  }
}
