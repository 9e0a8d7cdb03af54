#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracle.hpp"
#include "snmix/scenarios.hpp"

using namespace snmix;

namespace {

struct Moments {
  double mean, var;
};

// analytic mean/variance per scenario (default parameter readings)
Moments analytic(int id) {
  switch (id) {
    case 1: {
      const double m = 0.35 * -2.0 + 0.5 * 4.0 + 0.15 * 5.0;
      const double ex2 = 0.35 * (1.0 + 4.0) + 0.5 * (4.0 + 16.0) + 0.15 * (6.25 + 25.0);
      return {m, ex2 - m * m};
    }
    case 2: {
      auto sn_m = [](double xi, double om, double lam) {
        const double d = lam / std::sqrt(1.0 + lam * lam);
        return xi + om * d * std::sqrt(2.0 / std::numbers::pi);
      };
      auto sn_ex2 = [](double xi, double om, double lam) {
        const double d = lam / std::sqrt(1.0 + lam * lam);
        const double m = om * d * std::sqrt(2.0 / std::numbers::pi);
        const double v = om * om * (1.0 - 2.0 * d * d / std::numbers::pi);
        return v + (xi + m) * (xi + m);
      };
      const double m = 0.65 * sn_m(0, 1, 5) + 0.35 * sn_m(4, 2, 3);
      const double ex2 = 0.65 * sn_ex2(0, 1, 5) + 0.35 * sn_ex2(4, 2, 3);
      return {m, ex2 - m * m};
    }
    case 3: {
      const double m = 0.25 * 2.0 + 0.75 * 3.0;
      const double ex2 = 0.25 * (2.0 + 4.0) + 0.75 * (1.0 + 9.0);
      return {m, ex2 - m * m};
    }
    case 4:
      return {2.0, 4.0};
    case 5: {
      const double m = 0.2 * 2 + 0.6 * 3 + 0.2 * 4;
      const double ex2 = 0.2 * 4 + 0.6 * 9 + 0.2 * 16;
      return {m, ex2 - m * m};
    }
    case 6: {
      double m = 0.0, ex2 = 0.0;
      for (int j = 0; j < 60; ++j) {
        const double p = true_pmf(6, j);
        m += j * p;
        ex2 += double(j) * j * p;
      }
      return {m, ex2 - m * m};
    }
    case 7: {
      // Po(2.5) and 9 + Po(0.5)
      const double m = 0.65 * 2.5 + 0.35 * 9.5;
      const double ex2 = 0.65 * (2.5 + 6.25) + 0.35 * (0.5 + 9.5 * 9.5);
      return {m, ex2 - m * m};
    }
    case 8: {
      double m = 0.0, ex2 = 0.0;
      for (int j = 0; j <= 40; ++j) {
        const double p = true_pmf(8, j);
        m += j * p;
        ex2 += double(j) * j * p;
      }
      return {m, ex2 - m * m};
    }
  }
  return {0, 0};
}

}  // namespace

TEST_CASE("every generator matches its analytic mean and variance") {
  const int n = 1000000;
  for (int id = 1; id <= 8; ++id) {
    CAPTURE(id);
    Rng rng(1000 + id);
    std::vector<double> xs;
    if (scenario_is_discrete(id)) {
      const std::vector<int> draw = sample_scenario_discrete(id, n, rng);
      xs.assign(draw.begin(), draw.end());
    } else {
      xs = sample_scenario_continuous(id, n, rng);
    }
    const auto m = oracle::mean_se(xs);
    const Moments a = analytic(id);
    CHECK(std::abs(m.mean - a.mean) < 4.0 * m.se);
    std::vector<double> sq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - a.mean) * (xs[i] - a.mean);
    const auto v = oracle::mean_se(sq);
    CHECK(std::abs(v.mean - a.var) < 4.0 * v.se);
  }
}

TEST_CASE("scenario 4 mean is 2") {
  Rng rng(99);
  const std::vector<double> xs = sample_scenario_continuous(4, 1000000, rng);
  const auto m = oracle::mean_se(xs);
  CHECK(std::abs(m.mean - 2.0) < 4.0 * m.se);
}

TEST_CASE("scenario 5 frequencies") {
  Rng rng(55);
  const std::vector<int> xs = sample_scenario_discrete(5, 1000000, rng);
  double c2 = 0, c3 = 0, c4 = 0;
  for (int x : xs) {
    REQUIRE(x >= 2);
    REQUIRE(x <= 4);
    if (x == 2) ++c2;
    if (x == 3) ++c3;
    if (x == 4) ++c4;
  }
  const double n = xs.size();
  for (auto [count, p] : {std::pair{c2, 0.2}, {c3, 0.6}, {c4, 0.2}}) {
    const double se = std::sqrt(p * (1 - p) / n);
    CHECK(std::abs(count / n - p) < 4.0 * se);
  }
  CHECK(true_pmf(5, 3) == 0.6);
  CHECK(true_pmf(5, 1) == 0.0);
}

TEST_CASE("R-Poisson: support, defining formula, negative skewness") {
  const int n = 500000;
  std::vector<long> freq(41, 0);
  Rng rng2(89);
  const std::vector<int> xs = sample_scenario_discrete(8, n, rng2);
  for (int x : xs) {
    REQUIRE(x >= 0);
    REQUIRE(x <= 40);
    ++freq[x];
  }
  CHECK(*std::max_element(xs.begin(), xs.end()) <= 12);  // R-Po capped at gamma, Po(0.5) tiny
  double sum_pmf = 0.0;
  for (int j = 0; j <= 14; ++j) {
    const double p = true_pmf(8, j);
    sum_pmf += p;
    const double f = static_cast<double>(freq[j]) / n;
    const double se = std::sqrt(std::max(p * (1 - p), 1e-12) / n);
    CHECK(std::abs(f - p) < 4.5 * se);
  }
  CHECK(sum_pmf == doctest::Approx(1.0).epsilon(1e-9));
  // normalized lambda^{gamma-j} e^{-lambda}: ratio p(12)/p(11) = 1/lambda = 2
  CHECK(r_poisson_pmf(0.5, 12, 12) / r_poisson_pmf(0.5, 12, 11) == doctest::Approx(2.0));
  CHECK(r_poisson_pmf(0.5, 12, 13) == 0.0);
  CHECK(r_poisson_pmf(0.5, 12, -1) == 0.0);
  // mode at gamma = negative skew
  for (int j = 0; j < 12; ++j)
    CHECK(r_poisson_pmf(0.5, 12, j) < r_poisson_pmf(0.5, 12, 12));
}

TEST_CASE("shifted Poisson equals nu + Po(lambda) exactly") {
  // distributional identity through the pmf
  for (int j = 0; j < 25; ++j) {
    const double shifted_part = j >= 9 ? poisson_pmf(0.5, j - 9) : 0.0;
    const double expect = 0.65 * poisson_pmf(2.5, j) + 0.35 * shifted_part;
    CHECK(true_pmf(7, j) == doctest::Approx(expect).epsilon(1e-14));
  }
  // empirical check that the S-Po component never lands below 9
  Rng rng(77);
  const std::vector<int> xs = sample_scenario_discrete(7, 200000, rng);
  double mass_9_to_11 = 0.0;
  for (int x : xs)
    if (x >= 9 && x <= 11) ++mass_9_to_11;
  mass_9_to_11 /= xs.size();
  double expect_mass = 0.0;
  for (int j = 9; j <= 11; ++j) expect_mass += true_pmf(7, j);
  CHECK(std::abs(mass_9_to_11 - expect_mass) < 0.005);
}

TEST_CASE("COM-Poisson pmf matches brute-force normalized ratios") {
  // brute force: p(j) proportional to lambda^j / (j!)^nu with a long sum
  long double z = 0.0L;
  for (int j = 0; j < 200; ++j)
    z += std::exp(static_cast<long double>(j) * std::log(3.0L) -
                  5.0L * std::lgamma(static_cast<long double>(j) + 1.0L));
  for (int j = 0; j < 12; ++j) {
    const long double brute =
        std::exp(static_cast<long double>(j) * std::log(3.0L) -
                 5.0L * std::lgamma(static_cast<long double>(j) + 1.0L)) /
        z;
    CHECK(true_pmf(6, j) == doctest::Approx(static_cast<double>(brute)).epsilon(1e-11));
  }
  double total = 0.0;
  for (int j = 0; j < 40; ++j) total += true_pmf(6, j);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("continuous true densities integrate to one") {
  for (int id = 1; id <= 4; ++id) {
    CAPTURE(id);
    const double lo = id == 3 || id == 4 ? 0.0 : -30.0;  // gamma/exponential support
    double mass = oracle::integrate([&](double x) { return true_density(id, x); },
                                    lo, 40.0, 1e-12);
    if (id == 3) mass += oracle::integrate([&](double x) { return true_density(3, x); },
                                           -30.0, 0.0, 1e-12);
    CHECK(std::abs(mass - 1.0) < 1e-8);
  }
}

TEST_CASE("scenario toggles") {
  ScenarioOptions opt;
  opt.normal_scale_is_variance = true;
  // variance reading shrinks the spread of components 2 and 3
  const double base = true_density(1, 4.0);
  const double toggled = true_density(1, 4.0, opt);
  CHECK(toggled > base);  // tighter component 2 puts more density at its mode
  Rng rng(31);
  const auto xs = sample_scenario_continuous(1, 200000, rng, opt);
  std::vector<double> sq(xs.size());
  const auto m = oracle::mean_se(xs);
  for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - m.mean) * (xs[i] - m.mean);
  const auto v = oracle::mean_se(sq);
  const double var_toggled = 0.35 * (1.0 + 4.0) + 0.5 * (2.0 + 16.0) + 0.15 * (2.5 + 25.0) -
                             (0.35 * -2.0 + 0.5 * 4.0 + 0.15 * 5.0) *
                                 (0.35 * -2.0 + 0.5 * 4.0 + 0.15 * 5.0);
  CHECK(std::abs(v.mean - var_toggled) < 4.0 * v.se);
}

TEST_CASE("determinism and validation") {
  Rng a(5), b(5);
  CHECK(sample_scenario_continuous(2, 50, a) == sample_scenario_continuous(2, 50, b));
  Rng c(5), d(5);
  CHECK(sample_scenario_discrete(6, 50, c) == sample_scenario_discrete(6, 50, d));
  CHECK_THROWS_AS(sample_scenario_continuous(5, 10, a), std::invalid_argument);
  CHECK_THROWS_AS(sample_scenario_discrete(1, 10, a), std::invalid_argument);
  CHECK(scenario_is_valid(8));
  CHECK(!scenario_is_valid(9));
  CHECK(!scenario_is_valid(0));
}
