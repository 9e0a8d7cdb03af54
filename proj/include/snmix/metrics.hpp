#pragma once

#include <map>
#include <span>
#include <vector>

#include "snmix/gibbs.hpp"

namespace snmix {

/// A density sampled on an ascending grid.
struct DensityGrid {
  std::vector<double> points;
  std::vector<double> values;

  DensityGrid() = default;
  DensityGrid(std::vector<double> pts, std::vector<double> vals);
};

/// 2001 equispaced points spanning [min(data) - 4 sd, max(data) + 4 sd].
std::vector<double> default_grid(std::span<const double> data, int n_points = 2001);

double trapezoid(std::span<const double> x, std::span<const double> y);

/// KL(f,g) = int f log(f/g) by the trapezoid rule; integrand is taken as 0
/// where f < 1e-300. If f > 0 somewhere g == 0, returns +inf and sets the
/// flag when given.
double kl_divergence(const DensityGrid& f, const DensityGrid& g,
                     bool* support_violation = nullptr);
/// Exact counting-measure sum for pmfs on a common index range.
double kl_divergence_pmf(std::span<const double> f, std::span<const double> g,
                         bool* support_violation = nullptr);

double l2_distance(const DensityGrid& f, const DensityGrid& g);
double l2_distance_pmf(std::span<const double> f, std::span<const double> g);

struct OccupiedHistogram {
  std::map<int, double> probability;  // normalized over retained draws
  double mean = 0.0;
};

OccupiedHistogram occupied_cluster_posterior(const PosteriorSummary& summary);

/// Batch-means effective sample size. A zero-variance trace returns +inf
/// (documented sentinel).
double batch_means_ess(std::span<const double> trace);

struct TraceDiagnostics {
  std::vector<std::vector<double>> traces;  // one per monitored point
  std::vector<double> ess;
};

/// Density-at-point traces across retained draws plus their batch-means ESS.
TraceDiagnostics trace_diagnostics(const PosteriorSummary& summary,
                                   std::span<const double> points);

}  // namespace snmix
