#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace pepsim {

struct SpectralLine {
  double energy_ev = 0.0;
  double relative_intensity = 0.0;
};

// Default normal Cu K lines (Kalpha1/Kalpha2/Kbeta with standard-table
// energies and 100:51:17 intensity ratios).
std::vector<SpectralLine> default_cu_k_lines();

// Default energy of the Pauli-forbidden 2p->1s line, from a screened
// hydrogenic estimate: fit the Moseley screening constant so the normal
// Kalpha1 lands at its tabulated energy, then add one extra 1s screening unit
// for the already-doubly-occupied ground state. Stored in configs with
// provenance "derived-default".
double default_anomalous_line_energy_ev();

struct TargetConfig {
  std::string material = "Cu";
  double length_cm = 3.0;
  double current_a = 100.0;
  double capture_probability_per_electron = 0.1;
  double anomalous_line_energy_ev = default_anomalous_line_energy_ev();
  std::vector<SpectralLine> normal_lines = default_cu_k_lines();

  static constexpr double electron_charge_c = 1.602176634e-19;  // CODATA 2018
};

struct DetectorConfig {
  int n_sdd = 6;
  double total_active_area_cm2 = 6.0;
  double energy_resolution_fwhm_at_8kev_ev = 170.0;
  double geometric_acceptance = 0.12;
  double drift_time_fwhm_ns = 400.0;
  double charge_collection_max_ns = 1000.0;
  double detection_efficiency_at_8kev = 0.99;
};

struct VetoConfig {
  int n_counters = 32;  // first half top layer, second half bottom layer
  std::array<double, 3> counter_dimensions_mm{40.0, 32.0, 250.0};
  double solid_angle_coverage = 0.90;
  double per_counter_efficiency = 0.97;
  double sipm_time_resolution_fwhm_ns = 3.0;
  double veto_window_ns = 1000.0;      // half-width of the SDD/tag time cut
  double scint_pair_window_ns = 20.0;  // max |dt| between top and bottom hits
  int qdc_pedestal_threshold = 100;
  double qdc_most_probable = 1200.0;
  double qdc_width = 300.0;
};

struct RunPlan {
  double duration_s = 86400.0;
  bool current_on = true;
  double cosmic_rate_hz = 0.1;
  double environmental_k_rate_hz = 0.01;
  double flat_background_rate_hz_per_kev = 0.005;
  double cosmic_k_conversion_probability = 0.05;
  std::uint64_t rng_seed = 42;
  std::uint64_t max_events = 20000000;
};

struct AnalysisConfig {
  double band_low_ev = 4000.0;
  double band_high_ev = 12000.0;
  double bin_width_ev = 50.0;
  double roi_half_width_fwhm = 1.5;
  double confidence_level = 0.9;
};

enum class Provenance { Default, DerivedDefault, File, Environment };
const char* provenance_name(Provenance p);

struct ExperimentConfig {
  TargetConfig target;
  DetectorConfig detector;
  VetoConfig veto;
  RunPlan run;
  AnalysisConfig analysis;

  // Per-key provenance (default vs derived-default vs file vs environment).
  std::map<std::string, Provenance> provenance;
  // Non-fatal validation notes (e.g. veto window narrower than drift support).
  std::vector<std::string> warnings;

  // Gaussian FWHM at an arbitrary energy, sqrt(E) scaling anchored at 8 keV.
  double fwhm_at(double energy_ev) const;
};

// Fully-defaulted, validated configuration.
ExperimentConfig default_config();

// Parse + env overrides (PEPSIM_SECTION_KEY) + validation. Unknown keys are
// errors. Throws ConfigError with the offending key/line.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(std::string_view text, const std::string& source_label);

// Every key, full precision, provenance as a trailing comment. Reloading the
// output reproduces the same values.
std::string serialize_config(const ExperimentConfig& cfg);

// Field-by-field value equality (provenance ignored).
bool config_values_equal(const ExperimentConfig& a, const ExperimentConfig& b);

// Throws ConfigError naming field, bound, and actual value; records warnings.
void validate_config(ExperimentConfig& cfg);

// current * duration / e: how many fresh electrons the supply pushed through.
double n_new_electrons(const TargetConfig& target, double duration_s);

}  // namespace pepsim
