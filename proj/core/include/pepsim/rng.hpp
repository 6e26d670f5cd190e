#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace pepsim {

// Stable seed derivation for pipeline stages and batches. All randomness in a
// run flows from one root seed; per-stage streams are decorrelated by hashing
// (root, stage name, batch index) with FNV-1a + splitmix64 finalization.
std::uint64_t derive_seed(std::uint64_t root, std::string_view stage, std::uint64_t index);

// Deterministic sampler. The engine (mt19937_64) is fully specified by the
// standard; the std:: distributions are not, so the transforms live here to
// keep output streams bit-identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer on [0, n). Rejection-free modulo bias is irrelevant for
  // the small n used here (counter ids), but keep it unbiased anyway.
  std::uint64_t uniform_index(std::uint64_t n);

  // Box-Muller; consumes two uniforms per call, no spare caching.
  double gaussian(double mean, double sigma);
  double gaussian_fwhm(double mean, double fwhm);

  // Exact Poisson sampling: inversion for small means, PTRD rejection
  // (Hoermann) for large ones.
  std::uint64_t poisson(double mean);

  // Inverse-CDF triangular on [lo, hi] with the given mode.
  double triangular(double lo, double mode, double hi);

  double lognormal(double mu_log, double sigma_log);

 private:
  std::mt19937_64 engine_;
};

}  // namespace pepsim
