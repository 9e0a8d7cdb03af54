#include "snmix/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace snmix {

double Rng::uniform() {
  for (;;) {
    // 53 random bits -> [0,1); reject the exact endpoints.
    double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    if (u > 0.0 && u < 1.0) return u;
  }
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double v1, v2, s;
  do {
    v1 = 2.0 * uniform() - 1.0;
    v2 = 2.0 * uniform() - 1.0;
    s = v1 * v1 + v2 * v2;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v2 * f;
  has_spare_ = true;
  return v1 * f;
}

double Rng::normal(double mean, double sd) { return mean + sd * normal(); }

double Rng::gamma(double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0))
    throw std::invalid_argument("gamma: shape and rate must be positive");
  if (shape < 1.0) {
    // Ga(shape) = Ga(shape+1) * U^{1/shape}
    const double u = uniform();
    return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v / rate;
  }
}

double Rng::inverse_gamma(double shape, double rate) {
  const double g = gamma(shape, rate);
  if (g <= 0.0) return std::numeric_limits<double>::max();
  return 1.0 / g;
}

double Rng::beta(double a, double b) {
  const double x = gamma(a, 1.0);
  const double y = gamma(b, 1.0);
  const double s = x + y;
  if (s <= 0.0) {
    // Both components underflowed (only possible for extreme tiny shapes).
    return a >= b ? 1.0 : 0.0;
  }
  return x / s;
}

double Rng::exponential(double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be positive");
  return -std::log(uniform()) / rate;
}

int Rng::poisson(double mean) {
  if (!(mean > 0.0)) return 0;
  const double limit = std::exp(-mean);
  int k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= uniform();
  } while (p > limit && k < 100000);
  return k - 1;
}

std::size_t Rng::categorical_from_log(std::span<const double> logw) {
  if (logw.empty()) throw std::invalid_argument("categorical_from_log: empty weights");
  double m = -std::numeric_limits<double>::infinity();
  for (double w : logw)
    if (w > m) m = w;
  if (!std::isfinite(m)) {
    // Everything underflowed; fall back to a uniform pick.
    return static_cast<std::size_t>(uniform() * static_cast<double>(logw.size())) %
           logw.size();
  }
  double total = 0.0;
  for (double w : logw) total += std::exp(w - m);
  double r = uniform() * total;
  for (std::size_t k = 0; k < logw.size(); ++k) {
    r -= std::exp(logw[k] - m);
    if (r <= 0.0) return k;
  }
  return logw.size() - 1;
}

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}
}  // namespace

std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(root);
  for (std::uint64_t c : path) h = splitmix64(h ^ splitmix64(c + 0x9E3779B97F4A7C15ULL));
  return h;
}

}  // namespace snmix
