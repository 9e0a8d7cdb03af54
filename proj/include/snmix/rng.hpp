#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace snmix {

/// Deterministic random source. All distributions are implemented here (not
/// delegated to <random> distribution objects) so that a given seed yields the
/// same stream on every platform and build.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// U(0,1), never returns 0 or 1.
  double uniform();
  double uniform(double lo, double hi);

  /// N(0,1) via Marsaglia polar; the spare deviate is cached.
  double normal();
  double normal(double mean, double sd);

  /// Ga(shape, rate), Marsaglia-Tsang with the shape<1 boost.
  double gamma(double shape, double rate);
  /// X with 1/X ~ Ga(shape, rate).
  double inverse_gamma(double shape, double rate);
  double beta(double a, double b);
  double exponential(double rate);
  /// Inversion by sequential search; intended for small means.
  int poisson(double mean);

  /// Draw an index proportional to exp(logw[k]); -inf entries are allowed.
  /// If every entry is -inf the draw is uniform over indices.
  std::size_t categorical_from_log(std::span<const double> logw);

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Derives an independent child seed from a root seed and an index path,
/// e.g. derive_seed(root, {scenario, n, replicate}). The rule is a fixed
/// splitmix64-style combiner; identical paths always give identical seeds.
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path);

}  // namespace snmix
