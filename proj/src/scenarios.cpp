#include "snmix/scenarios.hpp"

#include <cmath>
#include <stdexcept>

#include "snmix/skew_normal.hpp"
#include "snmix/special.hpp"

namespace snmix {

bool scenario_is_discrete(int id) { return id >= 5 && id <= 8; }
bool scenario_is_valid(int id) { return id >= 1 && id <= 8; }

namespace {

double normal_density(double x, double mean, double sd) {
  return normal_pdf((x - mean) / sd) / sd;
}

double gamma_density(double x, double shape, double rate) {
  if (x <= 0.0) return 0.0;
  return std::exp(shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) -
                  rate * x);
}

// scenario 1 component scales as standard deviations (default reading)
void scenario1_sds(const ScenarioOptions& opt, double out[3]) {
  const double raw[3] = {1.0, 2.0, 2.5};
  for (int k = 0; k < 3; ++k) out[k] = opt.normal_scale_is_variance ? std::sqrt(raw[k]) : raw[k];
}

// Ga(2, 1): with the second parameter equal to 1 the shape-rate and
// shape-scale readings coincide, so the toggle only matters for manifests.
double scenario3_rate(const ScenarioOptions& opt) {
  return opt.gamma_shape_scale ? 1.0 / 1.0 : 1.0;
}

// pmf table with inverse-cdf sampling; builds once per call site
struct PmfTable {
  std::vector<double> p;
  int sample(Rng& rng) const {
    double u = rng.uniform();
    for (std::size_t j = 0; j < p.size(); ++j) {
      u -= p[j];
      if (u <= 0.0) return static_cast<int>(j);
    }
    return static_cast<int>(p.size()) - 1;
  }
};

PmfTable com_poisson_table(double lambda, double nu) {
  PmfTable t;
  const double logz = com_poisson_log_normalizer(lambda, nu);
  double cum = 0.0;
  for (int j = 0; j < 500; ++j) {
    const double lp = j * std::log(lambda) - nu * std::lgamma(j + 1.0) - logz;
    const double pj = std::exp(lp);
    t.p.push_back(pj);
    cum += pj;
    if (cum > 1.0 - 1e-15 && j > 3) break;
  }
  return t;
}

PmfTable r_poisson_table(double lambda, int gamma) {
  PmfTable t;
  t.p.resize(gamma + 1);
  for (int j = 0; j <= gamma; ++j) t.p[j] = r_poisson_pmf(lambda, gamma, j);
  return t;
}

}  // namespace

double com_poisson_log_normalizer(double lambda, double nu) {
  // series in log space; terms decay superexponentially for nu > 0
  double log_sum = 0.0;  // j = 0 term is 1
  double log_term = 0.0;
  for (int j = 1; j < 10000; ++j) {
    log_term += std::log(lambda) - nu * std::log(static_cast<double>(j));
    const double m = std::max(log_sum, log_term);
    log_sum = m + std::log(std::exp(log_sum - m) + std::exp(log_term - m));
    if (log_term - log_sum < std::log(1e-13) && j > 3) break;
  }
  return log_sum;
}

double r_poisson_pmf(double lambda, int gamma, int j) {
  if (j < 0 || j > gamma) return 0.0;
  double denom = 0.0;
  for (int i = 0; i <= gamma; ++i) denom += std::pow(lambda, gamma - i);
  return std::pow(lambda, gamma - j) / denom;
}

double poisson_pmf(double mean, int j) {
  if (j < 0) return 0.0;
  return std::exp(j * std::log(mean) - mean - std::lgamma(j + 1.0));
}

std::vector<double> sample_scenario_continuous(int id, int n, Rng& rng,
                                               const ScenarioOptions& opt) {
  if (!scenario_is_valid(id) || scenario_is_discrete(id))
    throw std::invalid_argument("sample_scenario_continuous: not a continuous scenario");
  std::vector<double> out(n);
  switch (id) {
    case 1: {
      double sd[3];
      scenario1_sds(opt, sd);
      for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        if (u < 0.35)
          out[i] = rng.normal(-2.0, sd[0]);
        else if (u < 0.85)
          out[i] = rng.normal(4.0, sd[1]);
        else
          out[i] = rng.normal(5.0, sd[2]);
      }
      break;
    }
    case 2: {
      const SkewNormalParams p1(0.0, 1.0, 5.0), p2(4.0, 2.0, 3.0);
      for (int i = 0; i < n; ++i)
        out[i] = rng.uniform() < 0.65 ? sn_sample(p1, rng) : sn_sample(p2, rng);
      break;
    }
    case 3: {
      const double rate = scenario3_rate(opt);
      for (int i = 0; i < n; ++i)
        out[i] = rng.uniform() < 0.25 ? rng.gamma(2.0, rate) : rng.normal(3.0, 1.0);
      break;
    }
    case 4:
      for (int i = 0; i < n; ++i) out[i] = rng.exponential(0.5);
      break;
  }
  return out;
}

std::vector<int> sample_scenario_discrete(int id, int n, Rng& rng) {
  if (!scenario_is_discrete(id))
    throw std::invalid_argument("sample_scenario_discrete: not a discrete scenario");
  std::vector<int> out(n);
  switch (id) {
    case 5:
      for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        out[i] = u < 0.2 ? 2 : (u < 0.8 ? 3 : 4);
      }
      break;
    case 6: {
      const PmfTable t = com_poisson_table(3.0, 5.0);
      for (int i = 0; i < n; ++i) out[i] = t.sample(rng);
      break;
    }
    case 7:
      for (int i = 0; i < n; ++i)
        out[i] = rng.uniform() < 0.65 ? rng.poisson(2.5) : 9 + rng.poisson(0.5);
      break;
    case 8: {
      const PmfTable t = r_poisson_table(0.5, 12);
      for (int i = 0; i < n; ++i)
        out[i] = rng.uniform() < 0.6 ? rng.poisson(0.5) : t.sample(rng);
      break;
    }
  }
  return out;
}

double true_density(int id, double x, const ScenarioOptions& opt) {
  switch (id) {
    case 1: {
      double sd[3];
      scenario1_sds(opt, sd);
      return 0.35 * normal_density(x, -2.0, sd[0]) + 0.5 * normal_density(x, 4.0, sd[1]) +
             0.15 * normal_density(x, 5.0, sd[2]);
    }
    case 2: {
      const SkewNormalParams p1(0.0, 1.0, 5.0), p2(4.0, 2.0, 3.0);
      return 0.65 * sn_pdf(x, p1) + 0.35 * sn_pdf(x, p2);
    }
    case 3:
      return 0.25 * gamma_density(x, 2.0, scenario3_rate(opt)) +
             0.75 * normal_density(x, 3.0, 1.0);
    case 4:
      return x < 0.0 ? 0.0 : 0.5 * std::exp(-0.5 * x);
    default:
      throw std::invalid_argument("true_density: not a continuous scenario");
  }
}

double true_pmf(int id, int j) {
  switch (id) {
    case 5:
      if (j == 2 || j == 4) return 0.2;
      if (j == 3) return 0.6;
      return 0.0;
    case 6: {
      if (j < 0) return 0.0;
      const double logz = com_poisson_log_normalizer(3.0, 5.0);
      return std::exp(j * std::log(3.0) - 5.0 * std::lgamma(j + 1.0) - logz);
    }
    case 7:
      return 0.65 * poisson_pmf(2.5, j) + (j >= 9 ? 0.35 * poisson_pmf(0.5, j - 9) : 0.0);
    case 8:
      return 0.6 * poisson_pmf(0.5, j) + 0.4 * r_poisson_pmf(0.5, 12, j);
    default:
      throw std::invalid_argument("true_pmf: not a discrete scenario");
  }
}

}  // namespace snmix
