#pragma once

#include <vector>

#include "snmix/rng.hpp"

namespace snmix {

/// Parameter-convention toggles for the two ambiguous generators.
struct ScenarioOptions {
  bool normal_scale_is_variance = false;  // scenario 1: second argument read as variance
  bool gamma_shape_scale = false;         // scenario 3: Ga(2,1) read as shape-scale
};

/// True-distribution generators for the eight study scenarios:
/// 1: 0.35 N(-2,1) + 0.5 N(4,2) + 0.15 N(5,2.5)      (continuous)
/// 2: 0.65 SN(0,1,5) + 0.35 SN(4,2,3)                (continuous)
/// 3: 0.25 Ga(2,1) + 0.75 N(3,1)                     (continuous)
/// 4: Exp(mean 2)                                    (continuous)
/// 5: p(2)=p(4)=0.2, p(3)=0.6                        (discrete)
/// 6: COM-Poisson(lambda=3, nu=5)                    (discrete)
/// 7: 0.65 Po(2.5) + 0.35 S-Po(0.5, 9)               (discrete)
/// 8: 0.6 Po(0.5) + 0.4 R-Po(0.5, 12)                (discrete)
bool scenario_is_discrete(int id);
bool scenario_is_valid(int id);

std::vector<double> sample_scenario_continuous(int id, int n, Rng& rng,
                                               const ScenarioOptions& opt = {});
std::vector<int> sample_scenario_discrete(int id, int n, Rng& rng);

double true_density(int id, double x, const ScenarioOptions& opt = {});
double true_pmf(int id, int j);

/// log sum_{k>=0} lambda^k / (k!)^nu, truncated at relative error 1e-12.
double com_poisson_log_normalizer(double lambda, double nu);
/// p(j) = C(lambda,gamma) lambda^{gamma-j} e^{-lambda} on {0..gamma}.
double r_poisson_pmf(double lambda, int gamma, int j);

double poisson_pmf(double mean, int j);

}  // namespace snmix
