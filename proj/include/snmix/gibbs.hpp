#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "snmix/rng.hpp"
#include "snmix/skew_normal.hpp"

namespace snmix {

enum class KernelFamily { skew_normal, gaussian };

/// How the DP concentration parameter is refreshed each sweep.
///
/// escobar_west is the classic auxiliary-variable update given (n, H occupied)
/// and is exact for the infinite DP (the occupied count is sufficient there);
/// under a finite truncation it is an approximation whose error vanishes as
/// H_max grows. stick_conjugate is the exact conditional of the truncated
/// stick-breaking model, alpha | V ~ Ga(a_alpha + H_max - 1,
/// b_alpha - sum_{h<H_max} log(1 - V_h)).
enum class AlphaUpdate { escobar_west, stick_conjugate };

/// Hyperparameters of the atom base measure
/// N(xi; xi0, kappa omega^2) x Ga(omega^{-2}; a, b) x N(lambda; 0, psi0)
/// plus the Ga(a_alpha, b_alpha) prior on the concentration (shape-rate).
struct BaseMeasure {
  double xi0 = 0.0;
  double kappa = 1.0;
  double a = 0.5;
  double b = 0.5;
  double psi0 = 10.0;
  double a_alpha = 1.0;
  double b_alpha = 1.0;

  BaseMeasure() = default;
  BaseMeasure(double xi0_, double kappa_, double a_, double b_, double psi0_, double a_alpha_,
              double b_alpha_);

  /// xi0 = sample mean, kappa = sample variance; other fields left at their
  /// defaults (psi0 = 10, a = b = 1/2, alpha ~ Ga(1,1)).
  static BaseMeasure defaults_from_data(std::span<const double> data);
};

struct ChainConfig {
  int hmax = 50;
  int n_iter = 6000;
  int burn_in = 1000;
  int thin = 1;
  std::uint64_t seed = 1;
  KernelFamily kernel = KernelFamily::skew_normal;
  BaseMeasure base;
  AlphaUpdate alpha_update = AlphaUpdate::escobar_west;
  int adapt_interval = 50;  // shape-step adaptation cadence during burn-in
};

/// Full Gibbs state. weights are always the stick-breaking transform of
/// sticks with V_{hmax} = 1, so they sum to one and the residual stick mass
/// is folded into the last component.
struct ChainState {
  int hmax = 0;
  std::vector<SkewNormalParams> atoms;
  std::vector<double> sticks;
  std::vector<double> weights;
  std::vector<int> alloc;  // 0-based component index per observation
  std::vector<double> eta;  // latent half-normal contributions, all > 0
  double alpha = 1.0;

  // Per-cluster Metropolis step sizes and accept bookkeeping for the shape
  // updates (adapted during burn-in only).
  std::vector<double> shape_step;
  std::vector<long> shape_attempts;
  std::vector<long> shape_accepts;

  void recompute_weights();
  std::vector<int> cluster_counts() const;
  int occupied_count() const;
};

/// One retained draw; everything needed for density/pmf summaries.
struct MixtureDraw {
  std::vector<SkewNormalParams> atoms;
  std::vector<double> weights;
  double alpha = 0.0;
  int occupied = 0;
};

struct ChainDiagnostics {
  long shape_attempts = 0;
  long shape_accepts = 0;
  long impute_fallbacks = 0;  // used by the discrete sampler
};

struct PosteriorSummary {
  std::vector<MixtureDraw> draws;
  int n_data = 0;
  ChainDiagnostics diag;
};

// --- single conditional updates (Algorithm 1 steps) ---

/// Step 1: allocation log-probabilities for one observation, up to a common
/// constant: log pi_h + log f_SN(y; atom_h).
std::vector<double> allocation_log_probs(const ChainState& state, double y);
void update_allocations(ChainState& state, std::span<const double> data, Rng& rng);

/// Step 2, Escobar-West given n observations and H occupied clusters.
void update_alpha(ChainState& state, const BaseMeasure& base, int n, Rng& rng);
/// Step 2 alternative: exact conjugate update of the truncated model.
void update_alpha_stick_conjugate(ChainState& state, const BaseMeasure& base, Rng& rng);

/// Step 3: V_h ~ Be(1 + n_h, alpha + sum_{l>h} n_l); V_{hmax} = 1.
void update_sticks(ChainState& state, Rng& rng);

/// Step 4: eta_i ~ N(delta (y_i - xi), omega^2 (1 - delta^2)) on (0, inf).
void update_eta(ChainState& state, std::span<const double> data, Rng& rng);

/// Step 5: joint (xi_h, omega_h^2) draw from the normal-inverse-gamma
/// conditional of the augmented model; prior draw when the cluster is empty.
void update_atom_location_scale(ChainState& state, std::span<const double> data, int h,
                                const BaseMeasure& base, Rng& rng);

/// Step 6: Metropolis move on lambda_h targeting
/// N(lambda; 0, psi0) prod Phi(lambda (y_i - xi_h)/omega_h); no-op for the
/// gaussian family.
void update_atom_shape(ChainState& state, std::span<const double> data, int h,
                       const BaseMeasure& base, KernelFamily kernel, Rng& rng);

/// Starting state: sticks/atoms/alpha from the prior, allocations dispersed
/// uniformly over components (so small-alpha chains can consolidate down
/// instead of having to climb out of a single block), eta from its prior.
ChainState init_state(std::span<const double> data, const ChainConfig& cfg, Rng& rng);

/// One full sweep in the fixed order 1 -> 2 -> 3 -> 4 -> 5 -> 6.
void gibbs_sweep(ChainState& state, std::span<const double> data, const ChainConfig& cfg,
                 Rng& rng);

/// Adapts shape-update step sizes toward a 20-50% acceptance window; call
/// only during burn-in.
void adapt_shape_steps(ChainState& state);

/// Runs Algorithm 1 end to end; deterministic given cfg.seed. Throws
/// std::invalid_argument on empty/non-finite data or n_iter <= burn_in.
PosteriorSummary run_chain(std::span<const double> data, const ChainConfig& cfg);

double mixture_pdf(const MixtureDraw& draw, double x);
double mixture_cdf(const MixtureDraw& draw, double x);

/// Pointwise posterior mean of the mixture density over retained draws.
/// The parallel version splits the grid across OpenMP threads; per-point
/// accumulation order is identical to the serial reference, so results are
/// bit-equal for any thread count.
std::vector<double> posterior_mean_density(const PosteriorSummary& summary,
                                           std::span<const double> grid);
std::vector<double> posterior_mean_density_serial(const PosteriorSummary& summary,
                                                  std::span<const double> grid);

}  // namespace snmix
