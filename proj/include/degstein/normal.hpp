#pragma once

namespace degstein {

inline constexpr double kSqrt2Pi = 2.5066282746310005024;
inline constexpr double kInvSqrt2 = 0.70710678118654752440;

double norm_pdf(double x);
double norm_cdf(double x);
double norm_sf(double x);

/// Inverse standard normal CDF (Wichura's PPND16), full double precision.
double norm_quantile(double p);

/// exp(t^2/2) * P(Z > t), stable for all t >= -37; uses the asymptotic
/// Mills-ratio series for large positive t where erfc underflows.
double scaled_norm_sf(double t);

/// Antiderivative of the normal CDF: A(z) = z*Phi(z) + phi(z), A(-inf) = 0.
double norm_cdf_antideriv(double z);

}  // namespace degstein
