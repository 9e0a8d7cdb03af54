#pragma once

namespace snmix {

double normal_pdf(double x);
double log_normal_pdf(double x);
double normal_cdf(double x);

/// log Phi(x), finite for any finite x (asymptotic series in the deep left
/// tail where Phi underflows).
double log_normal_cdf(double x);

/// Owen's T function T(h, a) = (1/2pi) int_0^a exp(-h^2(1+x^2)/2)/(1+x^2) dx.
/// Evaluated by adaptive Gauss-Legendre on the tan-substituted integral
/// int_0^{atan a} exp(-h^2/(2 cos^2 t)) dt, after reducing to h >= 0, a >= 0
/// with T(-h,a) = T(h,a) and T(h,-a) = -T(h,a). Absolute accuracy ~1e-13.
double owens_t(double h, double a);

}  // namespace snmix
