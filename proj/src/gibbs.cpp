#include "snmix/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace snmix {

namespace {
constexpr double kStickEps = 1e-15;

void check_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw std::invalid_argument(std::string("BaseMeasure: ") + name + " must be positive");
}
}  // namespace

BaseMeasure::BaseMeasure(double xi0_, double kappa_, double a_, double b_, double psi0_,
                         double a_alpha_, double b_alpha_)
    : xi0(xi0_), kappa(kappa_), a(a_), b(b_), psi0(psi0_), a_alpha(a_alpha_), b_alpha(b_alpha_) {
  if (!std::isfinite(xi0)) throw std::invalid_argument("BaseMeasure: xi0 must be finite");
  check_positive(kappa, "kappa");
  check_positive(a, "a");
  check_positive(b, "b");
  check_positive(psi0, "psi0");
  check_positive(a_alpha, "a_alpha");
  check_positive(b_alpha, "b_alpha");
}

BaseMeasure BaseMeasure::defaults_from_data(std::span<const double> data) {
  BaseMeasure base;
  if (data.empty()) return base;
  const double n = static_cast<double>(data.size());
  double mean = 0.0;
  for (double y : data) mean += y;
  mean /= n;
  double ss = 0.0;
  for (double y : data) ss += (y - mean) * (y - mean);
  const double var = data.size() > 1 ? ss / (n - 1.0) : 1.0;
  base.xi0 = mean;
  base.kappa = var > 0.0 ? var : 1.0;
  return base;
}

void ChainState::recompute_weights() {
  weights.assign(hmax, 0.0);
  double remaining = 1.0;
  for (int h = 0; h < hmax; ++h) {
    weights[h] = sticks[h] * remaining;
    remaining *= (1.0 - sticks[h]);
  }
}

std::vector<int> ChainState::cluster_counts() const {
  std::vector<int> counts(hmax, 0);
  for (int s : alloc) ++counts[s];
  return counts;
}

int ChainState::occupied_count() const {
  std::vector<char> seen(hmax, 0);
  int k = 0;
  for (int s : alloc)
    if (!seen[s]) {
      seen[s] = 1;
      ++k;
    }
  return k;
}

std::vector<double> allocation_log_probs(const ChainState& state, double y) {
  std::vector<double> logw(state.hmax);
  for (int h = 0; h < state.hmax; ++h)
    logw[h] = std::log(state.weights[h]) + sn_log_pdf(y, state.atoms[h]);
  return logw;
}

void update_allocations(ChainState& state, std::span<const double> data, Rng& rng) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    const std::vector<double> logw = allocation_log_probs(state, data[i]);
    state.alloc[i] = static_cast<int>(rng.categorical_from_log(logw));
  }
}

void update_alpha(ChainState& state, const BaseMeasure& base, int n, Rng& rng) {
  const int occupied = state.occupied_count();
  const double eta_aux = rng.beta(state.alpha + 1.0, static_cast<double>(n));
  const double rate = base.b_alpha - std::log(eta_aux);
  const double odds = (base.a_alpha + occupied - 1.0) / (n * rate);
  const double p_big = odds / (1.0 + odds);
  const double shape =
      rng.uniform() < p_big ? base.a_alpha + occupied : base.a_alpha + occupied - 1.0;
  state.alpha = rng.gamma(shape, rate);
}

void update_alpha_stick_conjugate(ChainState& state, const BaseMeasure& base, Rng& rng) {
  double rate = base.b_alpha;
  for (int h = 0; h < state.hmax - 1; ++h) rate -= std::log1p(-state.sticks[h]);
  const double shape = base.a_alpha + state.hmax - 1.0;
  state.alpha = rng.gamma(shape, rate);
}

void update_sticks(ChainState& state, Rng& rng) {
  const std::vector<int> counts = state.cluster_counts();
  int tail = std::accumulate(counts.begin(), counts.end(), 0);
  for (int h = 0; h < state.hmax - 1; ++h) {
    tail -= counts[h];
    double v = rng.beta(1.0 + counts[h], state.alpha + tail);
    state.sticks[h] = std::clamp(v, kStickEps, 1.0 - kStickEps);
  }
  state.sticks[state.hmax - 1] = 1.0;
  state.recompute_weights();
}

void update_eta(ChainState& state, std::span<const double> data, Rng& rng) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    const SkewNormalParams& atom = state.atoms[state.alloc[i]];
    const double d = atom.delta();
    const double mean = d * (data[i] - atom.xi);
    const double var = std::max(atom.omega * atom.omega * (1.0 - d * d), 1e-300);
    state.eta[i] = truncated_positive_normal_sample(mean, var, rng);
  }
}

void update_atom_location_scale(ChainState& state, std::span<const double> data, int h,
                                const BaseMeasure& base, Rng& rng) {
  const double d = state.atoms[h].delta();
  const double one_m = std::max(1.0 - d * d, 1e-12);

  double sum_w = 0.0, sum_eta2 = 0.0;
  std::vector<double> w;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (state.alloc[i] != h) continue;
    const double wi = data[i] - d * state.eta[i];
    w.push_back(wi);
    sum_w += wi;
    sum_eta2 += state.eta[i] * state.eta[i];
  }
  const double nh = static_cast<double>(w.size());

  if (w.empty()) {
    // Empty cluster: refresh (xi, omega) from the base measure.
    const double omega2 = rng.inverse_gamma(base.a, base.b);
    const double xi = rng.normal(base.xi0, std::sqrt(base.kappa * omega2));
    state.atoms[h].omega = std::sqrt(omega2);
    state.atoms[h].xi = xi;
    return;
  }

  const double denom = nh * base.kappa + one_m;
  const double mu_hat = (base.kappa * sum_w + one_m * base.xi0) / denom;
  const double kappa_hat = base.kappa * one_m / denom;

  double q0 = (mu_hat - base.xi0) * (mu_hat - base.xi0) / base.kappa;
  for (double wi : w) q0 += (wi - mu_hat) * (wi - mu_hat) / one_m;

  const double shape = base.a + nh;
  const double rate = base.b + 0.5 * sum_eta2 + 0.5 * q0;
  const double omega2 = rng.inverse_gamma(shape, rate);
  const double xi = rng.normal(mu_hat, std::sqrt(kappa_hat * omega2));
  state.atoms[h].omega = std::sqrt(omega2);
  state.atoms[h].xi = xi;
}

void update_atom_shape(ChainState& state, std::span<const double> data, int h,
                       const BaseMeasure& base, KernelFamily kernel, Rng& rng) {
  if (kernel == KernelFamily::gaussian) {
    state.atoms[h].lambda = 0.0;
    return;
  }
  std::vector<double> z;
  for (std::size_t i = 0; i < data.size(); ++i)
    if (state.alloc[i] == h)
      z.push_back((data[i] - state.atoms[h].xi) / state.atoms[h].omega);
  const SunConditional cond(base.psi0, std::move(z));
  bool accepted = false;
  state.atoms[h].lambda =
      sun_conditional_sample(cond, state.atoms[h].lambda, state.shape_step[h], rng, &accepted);
  ++state.shape_attempts[h];
  if (accepted) ++state.shape_accepts[h];
}

ChainState init_state(std::span<const double> data, const ChainConfig& cfg, Rng& rng) {
  ChainState state;
  state.hmax = cfg.hmax;
  state.alpha = rng.gamma(cfg.base.a_alpha, cfg.base.b_alpha);
  state.sticks.assign(cfg.hmax, 1.0);
  for (int h = 0; h < cfg.hmax - 1; ++h)
    state.sticks[h] = std::clamp(rng.beta(1.0, state.alpha), kStickEps, 1.0 - kStickEps);
  state.recompute_weights();
  state.atoms.reserve(cfg.hmax);
  for (int h = 0; h < cfg.hmax; ++h) {
    const double omega2 = rng.inverse_gamma(cfg.base.a, cfg.base.b);
    const double xi = rng.normal(cfg.base.xi0, std::sqrt(cfg.base.kappa * omega2));
    const double lambda = cfg.kernel == KernelFamily::gaussian
                              ? 0.0
                              : rng.normal(0.0, std::sqrt(cfg.base.psi0));
    state.atoms.emplace_back(xi, std::sqrt(omega2), lambda);
  }
  // Allocations start dispersed (uniform over components) rather than from
  // the prior sticks: with a small concentration parameter the prior stick
  // tail is vanishingly thin and a chain started in one block could take an
  // astronomically long time to open further clusters. Consolidation from a
  // dispersed start is likelihood-driven and fast.
  state.alloc.resize(data.size());
  for (std::size_t i = 0; i < data.size(); ++i)
    state.alloc[i] =
        std::min(cfg.hmax - 1, static_cast<int>(rng.uniform() * cfg.hmax));
  state.eta.resize(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double om = state.atoms[state.alloc[i]].omega;
    state.eta[i] = truncated_positive_normal_sample(0.0, om * om, rng);
  }
  state.shape_step.assign(cfg.hmax, 1.0);
  state.shape_attempts.assign(cfg.hmax, 0);
  state.shape_accepts.assign(cfg.hmax, 0);
  return state;
}

void gibbs_sweep(ChainState& state, std::span<const double> data, const ChainConfig& cfg,
                 Rng& rng) {
  update_allocations(state, data, rng);
  if (cfg.alpha_update == AlphaUpdate::escobar_west)
    update_alpha(state, cfg.base, static_cast<int>(data.size()), rng);
  else
    update_alpha_stick_conjugate(state, cfg.base, rng);
  update_sticks(state, rng);
  update_eta(state, data, rng);
  for (int h = 0; h < state.hmax; ++h)
    update_atom_location_scale(state, data, h, cfg.base, rng);
  for (int h = 0; h < state.hmax; ++h)
    update_atom_shape(state, data, h, cfg.base, cfg.kernel, rng);
}

void adapt_shape_steps(ChainState& state) {
  for (int h = 0; h < state.hmax; ++h) {
    if (state.shape_attempts[h] == 0) continue;
    const double rate =
        static_cast<double>(state.shape_accepts[h]) / static_cast<double>(state.shape_attempts[h]);
    if (rate < 0.20)
      state.shape_step[h] *= 0.7;
    else if (rate > 0.50)
      state.shape_step[h] *= 1.4;
    state.shape_step[h] = std::clamp(state.shape_step[h], 1e-3, 1e3);
    state.shape_attempts[h] = 0;
    state.shape_accepts[h] = 0;
  }
}

namespace {
void validate_chain_inputs(std::span<const double> data, const ChainConfig& cfg) {
  if (data.empty()) throw std::invalid_argument("run_chain: data must be nonempty");
  for (double y : data)
    if (!std::isfinite(y)) throw std::invalid_argument("run_chain: data must be finite");
  if (cfg.n_iter <= cfg.burn_in)
    throw std::invalid_argument("run_chain: n_iter must exceed burn_in");
  if (cfg.hmax < 1) throw std::invalid_argument("run_chain: hmax must be >= 1");
  if (cfg.thin < 1) throw std::invalid_argument("run_chain: thin must be >= 1");
}
}  // namespace

PosteriorSummary run_chain(std::span<const double> data, const ChainConfig& cfg) {
  validate_chain_inputs(data, cfg);
  Rng rng(cfg.seed);
  ChainState state = init_state(data, cfg, rng);

  PosteriorSummary summary;
  summary.n_data = static_cast<int>(data.size());
  summary.draws.reserve((cfg.n_iter - cfg.burn_in + cfg.thin - 1) / cfg.thin);

  for (int iter = 1; iter <= cfg.n_iter; ++iter) {
    gibbs_sweep(state, data, cfg, rng);
    if (iter <= cfg.burn_in) {
      if (iter % cfg.adapt_interval == 0 || iter == cfg.burn_in) adapt_shape_steps(state);
      continue;
    }
    if ((iter - cfg.burn_in - 1) % cfg.thin == 0)
      summary.draws.push_back(
          {state.atoms, state.weights, state.alpha, state.occupied_count()});
  }
  // Counters were last reset at the end of burn-in, so they cover exactly the
  // retained phase.
  for (int h = 0; h < state.hmax; ++h) {
    summary.diag.shape_attempts += state.shape_attempts[h];
    summary.diag.shape_accepts += state.shape_accepts[h];
  }
  return summary;
}

// Stick weights far down the tail are astronomically small (e^-100 scale);
// atoms below this threshold cannot move any summary by more than ~1e-16.
static constexpr double kWeightFloor = 1e-18;

double mixture_pdf(const MixtureDraw& draw, double x) {
  double s = 0.0;
  for (std::size_t h = 0; h < draw.atoms.size(); ++h)
    if (draw.weights[h] > kWeightFloor) s += draw.weights[h] * sn_pdf(x, draw.atoms[h]);
  return s;
}

double mixture_cdf(const MixtureDraw& draw, double x) {
  double s = 0.0;
  for (std::size_t h = 0; h < draw.atoms.size(); ++h)
    if (draw.weights[h] > kWeightFloor) s += draw.weights[h] * sn_cdf(x, draw.atoms[h]);
  return s;
}

std::vector<double> posterior_mean_density_serial(const PosteriorSummary& summary,
                                                  std::span<const double> grid) {
  std::vector<double> out(grid.size(), 0.0);
  if (summary.draws.empty()) return out;
  const double inv = 1.0 / static_cast<double>(summary.draws.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double acc = 0.0;
    for (const MixtureDraw& draw : summary.draws) acc += mixture_pdf(draw, grid[g]);
    out[g] = acc * inv;
  }
  return out;
}

std::vector<double> posterior_mean_density(const PosteriorSummary& summary,
                                           std::span<const double> grid) {
  std::vector<double> out(grid.size(), 0.0);
  if (summary.draws.empty()) return out;
  const double inv = 1.0 / static_cast<double>(summary.draws.size());
  const auto npts = static_cast<std::int64_t>(grid.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t g = 0; g < npts; ++g) {
    double acc = 0.0;
    for (const MixtureDraw& draw : summary.draws) acc += mixture_pdf(draw, grid[g]);
    out[g] = acc * inv;
  }
  return out;
}

}  // namespace snmix
