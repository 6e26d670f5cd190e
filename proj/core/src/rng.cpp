#include "pepsim/rng.hpp"

#include <cmath>

#include "pepsim/errors.hpp"

namespace pepsim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t root, std::string_view stage, std::uint64_t index) {
  std::uint64_t h = splitmix64(root ^ fnv1a(stage));
  return splitmix64(h ^ index);
}

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  if (n == 0) throw ContractError("Rng::uniform_index: n must be positive");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double Rng::gaussian(double mean, double sigma) {
  const double u1 = 1.0 - uniform01();  // (0, 1]
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  return mean + sigma * r * std::cos(2.0 * M_PI * u2);
}

double Rng::gaussian_fwhm(double mean, double fwhm) {
  return gaussian(mean, fwhm / 2.3548200450309493);
}

std::uint64_t Rng::poisson(double mean) {
  if (mean < 0.0 || !std::isfinite(mean)) {
    throw ContractError("Rng::poisson: mean must be finite and nonnegative");
  }
  if (mean == 0.0) return 0;
  if (mean < 30.0) {
    // Knuth inversion by uniform products.
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform01();
    } while (p > limit);
    return k - 1;
  }
  // PTRD transformed rejection (Hoermann 1993), exact for mean >= 10.
  const double smu = std::sqrt(mean);
  const double b = 0.931 + 2.53 * smu;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mu = std::log(mean);
  for (;;) {
    double u = uniform01() - 0.5;
    double v = uniform01();
    const double us = 0.5 - std::fabs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) {
      return static_cast<std::uint64_t>(kf);
    }
    if (kf < 0.0 || (us < 0.013 && v > us)) {
      continue;
    }
    const double log_accept = std::log(v * inv_alpha / (a / (us * us) + b));
    if (log_accept <= kf * log_mu - mean - std::lgamma(kf + 1.0)) {
      return static_cast<std::uint64_t>(kf);
    }
  }
}

double Rng::triangular(double lo, double mode, double hi) {
  if (!(lo <= mode && mode <= hi) || !(lo < hi)) {
    throw ContractError("Rng::triangular: require lo <= mode <= hi and lo < hi");
  }
  const double u = uniform01();
  const double span = hi - lo;
  const double cut = (mode - lo) / span;
  if (u < cut) {
    return lo + std::sqrt(u * span * (mode - lo));
  }
  return hi - std::sqrt((1.0 - u) * span * (hi - mode));
}

double Rng::lognormal(double mu_log, double sigma_log) {
  return std::exp(gaussian(mu_log, sigma_log));
}

}  // namespace pepsim
