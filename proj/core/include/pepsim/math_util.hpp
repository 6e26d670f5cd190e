#pragma once

#include <cmath>

namespace pepsim {

// FWHM = 2*sqrt(2*ln 2) * sigma for a Gaussian.
inline constexpr double kFwhmPerSigma = 2.3548200450309493;

inline double sigma_from_fwhm(double fwhm) { return fwhm / kFwhmPerSigma; }
inline double fwhm_from_sigma(double sigma) { return sigma * kFwhmPerSigma; }

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Inverse standard-normal CDF (Acklam's rational approximation, ~1e-9 absolute).
double normal_quantile(double p);

// Fraction of a Gaussian line contained in |x - mu| <= half_width.
inline double gaussian_containment(double half_width, double sigma) {
  return std::erf(half_width / (sigma * std::sqrt(2.0)));
}

}  // namespace pepsim
