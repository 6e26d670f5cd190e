#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "pepsim/config.hpp"
#include "pepsim/quon.hpp"

namespace pepsim {

enum class Origin {
  PepViolation,
  CosmicInducedK,
  EnvironmentalK,
  Continuum,
  CosmicCharged,
};

const char* origin_name(Origin origin);
Origin origin_from_name(std::string_view name);

struct TruthEvent {
  Origin origin = Origin::Continuum;
  std::optional<double> true_energy_ev;  // absent for CosmicCharged
  double true_time_ns = 0.0;
  // Correlation key pairing a cosmic-induced K photon with its parent track.
  std::optional<std::uint64_t> cosmic_id;
};

// Deterministic expectation for the number of detected violation photons:
// beta^2/2 * (I*T/e) * capture probability * acceptance * efficiency.
double expected_signal_count(const QuonParameter& param, const ExperimentConfig& config,
                             double duration_s);

// Per-origin Poisson draws; times uniform over the run; line energies are
// deltas (all broadening lives in the detector response). Output is sorted by
// true time and bit-reproducible for a given plan.rng_seed: generation is
// partitioned into fixed, separately-seeded batches, so thread count cannot
// change the stream. Throws CapacityError when the expected total exceeds
// plan.max_events.
std::vector<TruthEvent> generate_run(const QuonParameter& param, const ExperimentConfig& config,
                                     const RunPlan& plan);

struct OriginCounts {
  std::uint64_t pep_violation = 0;
  std::uint64_t cosmic_induced_k = 0;
  std::uint64_t environmental_k = 0;
  std::uint64_t continuum = 0;
  std::uint64_t cosmic_charged = 0;
  std::uint64_t total() const {
    return pep_violation + cosmic_induced_k + environmental_k + continuum + cosmic_charged;
  }
};
OriginCounts count_by_origin(const std::vector<TruthEvent>& events);

// CSV dump with `# duration_s=` / `# current_on=` metadata comments and the
// header `origin,true_energy_eV,true_time_ns,cosmic_id`.
void write_truth_csv(const std::filesystem::path& path, const std::vector<TruthEvent>& events,
                     const RunPlan& plan);

struct TruthFile {
  std::vector<TruthEvent> events;
  double duration_s = 0.0;
  bool current_on = false;
};
TruthFile read_truth_csv(const std::filesystem::path& path);

}  // namespace pepsim
