#include "snmix/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace snmix {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

RoundingGrid RoundingGrid::count() { return RoundingGrid(Scheme::count, {}); }
RoundingGrid RoundingGrid::floor_grid() { return RoundingGrid(Scheme::floor_scheme, {}); }

RoundingGrid RoundingGrid::custom(std::vector<double> t) {
  if (t.empty()) throw std::invalid_argument("RoundingGrid: custom grid needs thresholds");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i]))
      throw std::invalid_argument("RoundingGrid: custom thresholds must be finite");
    if (i > 0 && !(t[i] > t[i - 1]))
      throw std::invalid_argument("RoundingGrid: thresholds must be strictly increasing");
  }
  return RoundingGrid(Scheme::custom, std::move(t));
}

std::string RoundingGrid::scheme_name() const {
  switch (scheme_) {
    case Scheme::count: return "count";
    case Scheme::floor_scheme: return "floor";
    default: return "custom";
  }
}

double RoundingGrid::threshold(long j) const {
  if (j <= 0) return -kInf;
  if (scheme_ != Scheme::custom) return static_cast<double>(j);
  const auto k = static_cast<std::size_t>(j - 1);
  if (k < custom_.size()) return custom_[k];
  // past the listed range: continue with unit steps
  return custom_.back() + static_cast<double>(k - custom_.size() + 1);
}

long RoundingGrid::cell_of(double y_star) const {
  if (scheme_ != Scheme::custom) {
    if (y_star <= 1.0) return 0;
    // cell (j, j+1]: integers belong to the lower cell
    const double c = std::ceil(y_star);
    return static_cast<long>(c) - 1;
  }
  if (y_star <= custom_.front()) return 0;
  auto it = std::lower_bound(custom_.begin(), custom_.end(), y_star);
  // lower_bound gives first threshold >= y*; cell index = its position
  long j = static_cast<long>(it - custom_.begin());
  if (it == custom_.end()) {
    const double over = y_star - custom_.back();
    j += static_cast<long>(std::ceil(over)) - 1;
  }
  return j;
}

long round_value(double y_star, const RoundingGrid& g) {
  if (!std::isfinite(y_star)) throw std::invalid_argument("round_value: y* must be finite");
  return g.cell_of(y_star);
}

double pmf_from_latent(const SkewNormalParams& p, const RoundingGrid& g, long j) {
  const double lo = g.threshold(j);
  const double hi = g.threshold(j + 1);
  const double f_lo = std::isinf(lo) ? 0.0 : sn_cdf(lo, p);
  const double f_hi = sn_cdf(hi, p);
  return std::max(0.0, f_hi - f_lo);
}

double pmf_from_latent(const MixtureDraw& draw, const RoundingGrid& g, long j) {
  double s = 0.0;
  for (std::size_t h = 0; h < draw.atoms.size(); ++h)
    if (draw.weights[h] > 1e-18) s += draw.weights[h] * pmf_from_latent(draw.atoms[h], g, j);
  return s;
}

double impute_latent(long y, const SkewNormalParams& atom, const RoundingGrid& g, Rng& rng,
                     long* fallbacks) {
  const double a_lo = g.threshold(y);
  const double a_hi = g.threshold(y + 1);
  const double f_lo = std::isinf(a_lo) ? 0.0 : sn_cdf(a_lo, atom);
  const double f_hi = sn_cdf(a_hi, atom);

  const double lo_x = std::isinf(a_lo) ? std::min(atom.xi - 40.0 * atom.omega, a_hi - 1.0) : a_lo;
  const double cell_lo = std::isinf(a_lo) ? a_hi - 1.0 : a_lo;

  if (!(f_hi - f_lo > 1e-300)) {
    if (fallbacks) ++(*fallbacks);
    return 0.5 * (cell_lo + a_hi);
  }

  const double u = rng.uniform(f_lo, f_hi);
  // Bisection + Newton restricted to the cell bracket.
  double lo = lo_x, hi = a_hi, x = 0.5 * (lo + hi);
  for (int it = 0; it < 120; ++it) {
    const double f = sn_cdf(x, atom) - u;
    if (std::abs(f) <= 1e-13 || hi - lo < 1e-13 * atom.omega) break;
    if (f > 0.0)
      hi = x;
    else
      lo = x;
    double next = x;
    const double d = sn_pdf(x, atom);
    if (it >= 6 && d > 1e-300) next = x - f / d;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  // Keep the invariant round_value(y*, g) == y exactly.
  if (x > a_hi) x = a_hi;
  if (!std::isinf(a_lo) && x <= a_lo) x = std::nextafter(a_lo, kInf);
  return x;
}

void update_allocations_discrete(ChainState& state, std::span<const int> data,
                                 const RoundingGrid& g, Rng& rng) {
  const int max_y = data.empty() ? 0 : *std::max_element(data.begin(), data.end());
  // Per-atom cdf table at thresholds a_0 .. a_{max_y+1}; cells read off by
  // differencing.
  std::vector<std::vector<double>> cdf(state.hmax, std::vector<double>(max_y + 2, 0.0));
  for (int h = 0; h < state.hmax; ++h)
    for (long t = 1; t <= max_y + 1; ++t)
      cdf[h][t] = sn_cdf(g.threshold(t), state.atoms[h]);

  std::vector<double> logw(state.hmax);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int y = data[i];
    for (int h = 0; h < state.hmax; ++h) {
      const double cell = cdf[h][y + 1] - cdf[h][y];
      const double logcell = cell > 0.0 ? std::log(cell) : -745.0;
      logw[h] = std::log(state.weights[h]) + logcell;
    }
    state.alloc[i] = static_cast<int>(rng.categorical_from_log(logw));
  }
}

void gibbs_sweep_discrete(ChainState& state, std::span<const int> data,
                          std::vector<double>& ystar, const RoundingGrid& g,
                          const ChainConfig& cfg, Rng& rng, long* fallbacks) {
  // Allocations first, from cell probabilities (the y*-marginalized
  // conditional), then the latent imputation under the fresh allocations.
  // The reverse order leaves every y* attached to its previous component
  // while steps 2-6 consume it, which measurably breaks the invariant
  // distribution (the prior-reproduction test rejects it).
  update_allocations_discrete(state, data, g, rng);
  for (std::size_t i = 0; i < data.size(); ++i)
    ystar[i] = impute_latent(data[i], state.atoms[state.alloc[i]], g, rng, fallbacks);
  // continuous sweep steps 2-6 on y*
  if (cfg.alpha_update == AlphaUpdate::escobar_west)
    update_alpha(state, cfg.base, static_cast<int>(data.size()), rng);
  else
    update_alpha_stick_conjugate(state, cfg.base, rng);
  update_sticks(state, rng);
  update_eta(state, ystar, rng);
  for (int h = 0; h < state.hmax; ++h)
    update_atom_location_scale(state, ystar, h, cfg.base, rng);
  for (int h = 0; h < state.hmax; ++h)
    update_atom_shape(state, ystar, h, cfg.base, cfg.kernel, rng);
}

PosteriorSummary run_chain_discrete(std::span<const int> data, const ChainConfig& cfg,
                                    const RoundingGrid& g) {
  if (data.empty()) throw std::invalid_argument("run_chain_discrete: data must be nonempty");
  for (int y : data)
    if (y < 0) throw std::invalid_argument("run_chain_discrete: data must be nonnegative");
  if (cfg.n_iter <= cfg.burn_in)
    throw std::invalid_argument("run_chain_discrete: n_iter must exceed burn_in");

  Rng rng(cfg.seed);

  // Latent y* starts at cell midpoints; everything else from the prior.
  std::vector<double> ystar(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double hi = g.threshold(data[i] + 1);
    const double lo = data[i] == 0 ? hi - 1.0 : g.threshold(data[i]);
    ystar[i] = 0.5 * (lo + hi);
  }
  ChainState state = init_state(ystar, cfg, rng);

  PosteriorSummary summary;
  summary.n_data = static_cast<int>(data.size());
  summary.draws.reserve((cfg.n_iter - cfg.burn_in + cfg.thin - 1) / cfg.thin);

  for (int iter = 1; iter <= cfg.n_iter; ++iter) {
    gibbs_sweep_discrete(state, data, ystar, g, cfg, rng, &summary.diag.impute_fallbacks);

    if (iter <= cfg.burn_in) {
      if (iter % cfg.adapt_interval == 0 || iter == cfg.burn_in) adapt_shape_steps(state);
      continue;
    }
    if ((iter - cfg.burn_in - 1) % cfg.thin == 0)
      summary.draws.push_back(
          {state.atoms, state.weights, state.alpha, state.occupied_count()});
  }
  for (int h = 0; h < state.hmax; ++h) {
    summary.diag.shape_attempts += state.shape_attempts[h];
    summary.diag.shape_accepts += state.shape_accepts[h];
  }
  return summary;
}

std::vector<double> posterior_mean_latent_cdf_serial(const PosteriorSummary& summary,
                                                     const RoundingGrid& g, long count) {
  std::vector<double> out(count, 0.0);
  if (summary.draws.empty() || count <= 0) return out;
  const double inv = 1.0 / static_cast<double>(summary.draws.size());
  for (long t = 0; t < count; ++t) {
    const double a = g.threshold(t);
    double acc = 0.0;
    if (!std::isinf(a))
      for (const MixtureDraw& draw : summary.draws) acc += mixture_cdf(draw, a);
    out[t] = acc * inv;
  }
  return out;
}

std::vector<double> posterior_mean_latent_cdf(const PosteriorSummary& summary,
                                              const RoundingGrid& g, long count) {
  std::vector<double> out(count, 0.0);
  if (summary.draws.empty() || count <= 0) return out;
  const double inv = 1.0 / static_cast<double>(summary.draws.size());
#pragma omp parallel for schedule(static)
  for (long t = 0; t < count; ++t) {
    const double a = g.threshold(t);
    double acc = 0.0;
    if (!std::isinf(a))
      for (const MixtureDraw& draw : summary.draws) acc += mixture_cdf(draw, a);
    out[t] = acc * inv;
  }
  return out;
}

long choose_j_max(const PosteriorSummary& summary, const RoundingGrid& g, int max_observed) {
  const long cap = std::max(10L * std::max(max_observed, 0), 1L);
  const std::vector<double> cdf = posterior_mean_latent_cdf(summary, g, cap + 2);
  for (long j = 0; j <= cap; ++j)
    if (cdf[j + 1] > 1.0 - 1e-8) return j;
  return cap;
}

std::vector<double> posterior_mean_pmf(const PosteriorSummary& summary, const RoundingGrid& g,
                                       long j_max) {
  const std::vector<double> cdf = posterior_mean_latent_cdf(summary, g, j_max + 2);
  std::vector<double> pmf(j_max + 1, 0.0);
  for (long j = 0; j <= j_max; ++j) pmf[j] = std::max(0.0, cdf[j + 1] - cdf[j]);
  return pmf;
}

std::vector<double> posterior_mean_pmf_serial(const PosteriorSummary& summary,
                                              const RoundingGrid& g, long j_max) {
  const std::vector<double> cdf = posterior_mean_latent_cdf_serial(summary, g, j_max + 2);
  std::vector<double> pmf(j_max + 1, 0.0);
  for (long j = 0; j <= j_max; ++j) pmf[j] = std::max(0.0, cdf[j + 1] - cdf[j]);
  return pmf;
}

}  // namespace snmix
