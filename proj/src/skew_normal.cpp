#include "snmix/skew_normal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "snmix/special.hpp"

namespace snmix {

namespace {
constexpr double kLambdaClamp = 1e8;
}

SkewNormalParams::SkewNormalParams(double xi_, double omega_, double lambda_)
    : xi(xi_), omega(omega_), lambda(lambda_) {
  if (!std::isfinite(xi) || !std::isfinite(lambda) || !(omega > 0.0) || !std::isfinite(omega))
    throw std::invalid_argument("SkewNormalParams: omega must be positive and all fields finite");
}

double SkewNormalParams::delta() const {
  const double l = std::clamp(lambda, -kLambdaClamp, kLambdaClamp);
  // keep strictly inside (-1, 1) even when the ratio rounds to 1
  const double bound = std::nextafter(1.0, 0.0);
  return std::clamp(l / std::sqrt(1.0 + l * l), -bound, bound);
}

double sn_pdf(double x, const SkewNormalParams& p) {
  const double z = (x - p.xi) / p.omega;
  return 2.0 / p.omega * normal_pdf(z) * normal_cdf(p.lambda * z);
}

double sn_log_pdf(double x, const SkewNormalParams& p) {
  const double z = (x - p.xi) / p.omega;
  return std::numbers::ln2 - std::log(p.omega) + log_normal_pdf(z) +
         log_normal_cdf(p.lambda * z);
}

double sn_cdf(double x, const SkewNormalParams& p) {
  const double z = (x - p.xi) / p.omega;
  const double v = normal_cdf(z) - 2.0 * owens_t(z, p.lambda);
  return std::clamp(v, 0.0, 1.0);
}

double sn_quantile(double u, const SkewNormalParams& p) {
  if (!(u > 0.0) || !(u < 1.0)) throw std::domain_error("sn_quantile: u must lie in (0,1)");
  double lo = p.xi - 40.0 * p.omega;
  double hi = p.xi + 40.0 * p.omega;
  double x = 0.5 * (lo + hi);

  // Bisection to localize, then Newton with the pdf, falling back to
  // bisection whenever Newton leaves the bracket or the pdf underflows.
  for (int it = 0; it < 200; ++it) {
    const double f = sn_cdf(x, p) - u;
    const double tol = 1e-12 + 1e-10 * std::min(u, 1.0 - u);
    if (std::abs(f) <= tol) return x;
    if (f > 0.0)
      hi = x;
    else
      lo = x;
    if (hi - lo < 1e-14 * p.omega) return x;
    double next = x;
    const double d = sn_pdf(x, p);
    if (it >= 20 && d > 1e-300) next = x - f / d;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  return x;
}

double sn_sample(const SkewNormalParams& p, Rng& rng) {
  const double d = p.delta();
  const double z = std::abs(rng.normal());
  const double v = rng.normal();
  return p.xi + p.omega * (d * z + std::sqrt(std::max(0.0, 1.0 - d * d)) * v);
}

double truncated_positive_normal_sample(double mean, double var, Rng& rng) {
  if (!(var > 0.0)) throw std::invalid_argument("truncated_positive_normal_sample: var <= 0");
  const double sd = std::sqrt(var);
  const double t = -mean / sd;  // standardized truncation point
  double z;
  if (t < 0.45) {
    do {
      z = rng.normal();
    } while (z <= t);
  } else {
    // Robert (1995) exponential rejection, efficient arbitrarily far out.
    const double a = 0.5 * (t + std::sqrt(t * t + 4.0));
    for (;;) {
      z = t + rng.exponential(a);
      const double r = std::exp(-0.5 * (z - a) * (z - a));
      if (rng.uniform() <= r) break;
    }
  }
  double x = mean + sd * z;
  if (x <= 0.0) x = std::numeric_limits<double>::min();
  return x;
}

SunConditional::SunConditional(double psi0_, std::vector<double> z_)
    : psi0(psi0_), z(std::move(z_)) {
  if (!(psi0 > 0.0)) throw std::invalid_argument("SunConditional: psi0 must be positive");
}

double SunConditional::log_unnormalized(double lambda) const {
  double s = -0.5 * lambda * lambda / psi0;
  for (double zi : z) s += log_normal_cdf(lambda * zi);
  return s;
}

double sun_conditional_sample(const SunConditional& c, double current, double step, Rng& rng,
                              bool* accepted) {
  const bool trivial =
      c.z.empty() || std::all_of(c.z.begin(), c.z.end(), [](double v) { return v == 0.0; });
  if (trivial) {
    if (accepted) *accepted = true;
    return rng.normal(0.0, std::sqrt(c.psi0));
  }
  const double proposal = current + step * rng.normal();
  const double log_ratio = c.log_unnormalized(proposal) - c.log_unnormalized(current);
  const bool take = std::log(rng.uniform()) < log_ratio;
  if (accepted) *accepted = take;
  return take ? proposal : current;
}

}  // namespace snmix
