#include "snmix/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace snmix {

namespace {
constexpr double kDensityFloor = 1e-300;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

DensityGrid::DensityGrid(std::vector<double> pts, std::vector<double> vals)
    : points(std::move(pts)), values(std::move(vals)) {
  if (points.size() != values.size())
    throw std::invalid_argument("DensityGrid: points/values length mismatch");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i]) || !std::isfinite(values[i]))
      throw std::invalid_argument("DensityGrid: entries must be finite");
    if (i > 0 && !(points[i] > points[i - 1]))
      throw std::invalid_argument("DensityGrid: points must be ascending");
  }
}

std::vector<double> default_grid(std::span<const double> data, int n_points) {
  if (data.empty() || n_points < 2) throw std::invalid_argument("default_grid: bad inputs");
  double mean = 0.0;
  for (double y : data) mean += y;
  mean /= static_cast<double>(data.size());
  double ss = 0.0;
  for (double y : data) ss += (y - mean) * (y - mean);
  double sd = data.size() > 1 ? std::sqrt(ss / (static_cast<double>(data.size()) - 1.0)) : 1.0;
  if (!(sd > 0.0)) sd = 1.0;
  const double lo = *std::min_element(data.begin(), data.end()) - 4.0 * sd;
  const double hi = *std::max_element(data.begin(), data.end()) + 4.0 * sd;
  std::vector<double> grid(n_points);
  for (int i = 0; i < n_points; ++i)
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / (n_points - 1.0);
  return grid;
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
  return s;
}

namespace {
void require_common_grid(const DensityGrid& f, const DensityGrid& g) {
  if (f.points.size() != g.points.size())
    throw std::invalid_argument("metrics: grids must match");
  for (std::size_t i = 0; i < f.points.size(); ++i)
    if (f.points[i] != g.points[i]) throw std::invalid_argument("metrics: grids must match");
}
}  // namespace

double kl_divergence(const DensityGrid& f, const DensityGrid& g, bool* support_violation) {
  require_common_grid(f, g);
  if (support_violation) *support_violation = false;
  std::vector<double> integrand(f.points.size(), 0.0);
  for (std::size_t i = 0; i < f.points.size(); ++i) {
    if (f.values[i] < kDensityFloor) continue;  // 0 log 0 = 0
    if (!(g.values[i] > 0.0)) {
      if (support_violation) *support_violation = true;
      return kInf;
    }
    integrand[i] = f.values[i] * std::log(f.values[i] / g.values[i]);
  }
  return trapezoid(f.points, integrand);
}

double kl_divergence_pmf(std::span<const double> f, std::span<const double> g,
                         bool* support_violation) {
  if (f.size() != g.size()) throw std::invalid_argument("kl_divergence_pmf: length mismatch");
  if (support_violation) *support_violation = false;
  double s = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (f[j] < kDensityFloor) continue;
    if (!(g[j] > 0.0)) {
      if (support_violation) *support_violation = true;
      return kInf;
    }
    s += f[j] * std::log(f[j] / g[j]);
  }
  return s;
}

double l2_distance(const DensityGrid& f, const DensityGrid& g) {
  require_common_grid(f, g);
  std::vector<double> sq(f.points.size());
  for (std::size_t i = 0; i < f.points.size(); ++i) {
    const double d = f.values[i] - g.values[i];
    sq[i] = d * d;
  }
  return std::sqrt(trapezoid(f.points, sq));
}

double l2_distance_pmf(std::span<const double> f, std::span<const double> g) {
  if (f.size() != g.size()) throw std::invalid_argument("l2_distance_pmf: length mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double d = f[j] - g[j];
    s += d * d;
  }
  return std::sqrt(s);
}

OccupiedHistogram occupied_cluster_posterior(const PosteriorSummary& summary) {
  OccupiedHistogram hist;
  if (summary.draws.empty()) return hist;
  const double inv = 1.0 / static_cast<double>(summary.draws.size());
  for (const MixtureDraw& draw : summary.draws) {
    hist.probability[draw.occupied] += inv;
    hist.mean += draw.occupied * inv;
  }
  return hist;
}

double batch_means_ess(std::span<const double> trace) {
  const std::size_t n = trace.size();
  if (n < 2) throw std::invalid_argument("batch_means_ess: need at least 2 draws");
  double mean = 0.0;
  for (double v : trace) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : trace) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n - 1);
  if (!(var > 0.0)) return kInf;

  const std::size_t b = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(double(n))));
  const std::size_t k = n / b;
  if (k < 2) return static_cast<double>(n);
  double bm_mean = 0.0;
  std::vector<double> bm(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t t = 0; t < b; ++t) bm[j] += trace[j * b + t];
    bm[j] /= static_cast<double>(b);
    bm_mean += bm[j];
  }
  bm_mean /= static_cast<double>(k);
  double bm_var = 0.0;
  for (double v : bm) bm_var += (v - bm_mean) * (v - bm_mean);
  bm_var /= static_cast<double>(k - 1);
  if (!(bm_var > 0.0)) return kInf;
  const double tau = static_cast<double>(b) * bm_var / var;
  return static_cast<double>(n) / tau;
}

TraceDiagnostics trace_diagnostics(const PosteriorSummary& summary,
                                   std::span<const double> points) {
  if (summary.draws.size() < 2)
    throw std::invalid_argument("trace_diagnostics: need at least 2 retained draws");
  TraceDiagnostics out;
  out.traces.resize(points.size());
  out.ess.resize(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    out.traces[p].resize(summary.draws.size());
    for (std::size_t d = 0; d < summary.draws.size(); ++d)
      out.traces[p][d] = mixture_pdf(summary.draws[d], points[p]);
    out.ess[p] = batch_means_ess(out.traces[p]);
  }
  return out;
}

}  // namespace snmix
