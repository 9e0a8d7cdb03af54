#pragma once

#include <vector>

#include "snmix/rng.hpp"

namespace snmix {

/// One kernel atom: location xi, scale omega > 0, shape lambda.
struct SkewNormalParams {
  double xi = 0.0;
  double omega = 1.0;
  double lambda = 0.0;

  SkewNormalParams() = default;
  SkewNormalParams(double xi_, double omega_, double lambda_);

  /// delta = lambda / sqrt(1 + lambda^2), in (-1, 1). |lambda| saturates at
  /// 1e8; beyond that the density is numerically half-normal.
  double delta() const;
};

double sn_pdf(double x, const SkewNormalParams& p);
double sn_log_pdf(double x, const SkewNormalParams& p);

/// F_SN(x) = Phi(z) - 2 T(z, lambda), z = (x - xi)/omega. Clamped to [0,1].
double sn_cdf(double x, const SkewNormalParams& p);

/// Inverse cdf by bracketed bisection plus safeguarded Newton refinement on
/// [xi - 40 omega, xi + 40 omega]. Throws std::domain_error unless 0 < u < 1.
double sn_quantile(double u, const SkewNormalParams& p);

/// Convolution representation: xi + omega (delta |Z| + sqrt(1-delta^2) V).
double sn_sample(const SkewNormalParams& p, Rng& rng);

/// One draw from N(mean, var) restricted to (0, inf). Plain rejection for
/// easy truncation points, Robert's exponential rejection in the far tail.
double truncated_positive_normal_sample(double mean, double var, Rng& rng);

/// Unnormalized full conditional of a shape parameter:
/// pi(lambda) proportional to N(lambda; 0, psi0) * prod_i Phi(lambda z_i).
struct SunConditional {
  double psi0 = 1.0;
  std::vector<double> z;

  SunConditional(double psi0_, std::vector<double> z_);
  double log_unnormalized(double lambda) const;
};

/// One Metropolis transition targeting the SunConditional (exact draw from
/// N(0, psi0) when z is empty or all zero, in which case the product term is
/// constant). `accepted`, when given, reports whether the proposal was taken.
double sun_conditional_sample(const SunConditional& c, double current, double step,
                              Rng& rng, bool* accepted = nullptr);

}  // namespace snmix
