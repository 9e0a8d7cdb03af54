#pragma once

#include <span>
#include <string>
#include <vector>

#include "snmix/gibbs.hpp"

namespace snmix {

/// Threshold sequence a_0 < a_1 < ... with a_0 = -inf defining the rounding
/// cells (a_j, a_{j+1}]. Built-in schemes use a_j = j for j >= 1; "count"
/// follows the Canale-Dunson convention (y = 0 absorbs the whole latent axis
/// below 1), "floor" is the same grid tagged for floored age-style data.
/// Custom grids come from a file and are extended past their last entry with
/// unit spacing.
class RoundingGrid {
 public:
  enum class Scheme { count, floor_scheme, custom };

  static RoundingGrid count();
  static RoundingGrid floor_grid();
  static RoundingGrid custom(std::vector<double> ascending_thresholds);

  Scheme scheme() const { return scheme_; }
  std::string scheme_name() const;

  /// a_j; a_0 = -inf always.
  double threshold(long j) const;

  long cell_of(double y_star) const;

 private:
  RoundingGrid(Scheme s, std::vector<double> t) : scheme_(s), custom_(std::move(t)) {}
  Scheme scheme_;
  std::vector<double> custom_;  // a_1, a_2, ... for the custom scheme
};

/// h(y*) = j such that y* lies in (a_j, a_{j+1}].
long round_value(double y_star, const RoundingGrid& g);

/// Cell probability F_SN(a_{j+1}) - F_SN(a_j) for a single atom.
double pmf_from_latent(const SkewNormalParams& p, const RoundingGrid& g, long j);
/// Same for a mixture draw (weighted sum of atom cell probabilities).
double pmf_from_latent(const MixtureDraw& draw, const RoundingGrid& g, long j);

/// Draws y* from the atom's skew-normal truncated to cell(y) by uniform
/// inversion inside the cdf bracket. When the bracket underflows (< 1e-300)
/// falls back to the cell midpoint and bumps *fallbacks. The result always
/// rounds back to y.
double impute_latent(long y, const SkewNormalParams& atom, const RoundingGrid& g, Rng& rng,
                     long* fallbacks = nullptr);

/// Algorithm 2 step 1b: allocations from cell probabilities (log-space).
void update_allocations_discrete(ChainState& state, std::span<const int> data,
                                 const RoundingGrid& g, Rng& rng);

/// One full discrete sweep: allocations from cell probabilities, latent
/// imputation under the fresh allocations, then the continuous steps 2-6
/// on y*. (Imputing before reallocating leaves stale y* values in the
/// downstream conditionals and fails the prior-reproduction test.)
void gibbs_sweep_discrete(ChainState& state, std::span<const int> data,
                          std::vector<double>& ystar, const RoundingGrid& g,
                          const ChainConfig& cfg, Rng& rng, long* fallbacks = nullptr);

/// Runs the discrete sampler. Throws std::invalid_argument on negative data.
PosteriorSummary run_chain_discrete(std::span<const int> data, const ChainConfig& cfg,
                                    const RoundingGrid& g);

/// Posterior mean of the latent mixture cdf at thresholds a_0 .. a_{count-1}.
std::vector<double> posterior_mean_latent_cdf(const PosteriorSummary& summary,
                                              const RoundingGrid& g, long count);
std::vector<double> posterior_mean_latent_cdf_serial(const PosteriorSummary& summary,
                                                     const RoundingGrid& g, long count);

/// Smallest j with posterior-mean latent cdf(a_{j+1}) > 1 - 1e-8, capped at
/// 10x the largest observed value.
long choose_j_max(const PosteriorSummary& summary, const RoundingGrid& g, int max_observed);

/// Posterior mean pmf on j = 0..j_max (differences of the mean latent cdf).
std::vector<double> posterior_mean_pmf(const PosteriorSummary& summary, const RoundingGrid& g,
                                       long j_max);
std::vector<double> posterior_mean_pmf_serial(const PosteriorSummary& summary,
                                              const RoundingGrid& g, long j_max);

}  // namespace snmix
