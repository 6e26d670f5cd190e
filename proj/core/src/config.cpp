#include "pepsim/config.hpp"

#include <cmath>
#include <cstdlib>
#include <functional>
#include <sstream>

#include "pepsim/errors.hpp"
#include "pepsim/math_util.hpp"
#include "pepsim/text.hpp"

namespace pepsim {

std::vector<SpectralLine> default_cu_k_lines() {
  // Standard-table Cu K energies; intensities 100:51:17 normalized.
  return {
      {8047.78, 100.0 / 168.0},  // Kalpha1
      {8027.83, 51.0 / 168.0},   // Kalpha2
      {8905.29, 17.0 / 168.0},   // Kbeta
  };
}

double default_anomalous_line_energy_ev() {
  constexpr double rydberg_ev = 13.605693122994;
  constexpr double kalpha1_ev = 8047.78;
  const double factor = rydberg_ev * 0.75;  // 1 - 1/n^2 at n = 2
  const double z_eff = std::sqrt(kalpha1_ev / factor);
  // One extra screening unit from the second 1s electron.
  return factor * (z_eff - 1.0) * (z_eff - 1.0);
}

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Default: return "default";
    case Provenance::DerivedDefault: return "derived-default";
    case Provenance::File: return "file";
    case Provenance::Environment: return "environment";
  }
  return "unknown";
}

double ExperimentConfig::fwhm_at(double energy_ev) const {
  return detector.energy_resolution_fwhm_at_8kev_ev * std::sqrt(energy_ev / 8000.0);
}

double n_new_electrons(const TargetConfig& target, double duration_s) {
  if (!(duration_s > 0.0)) {
    throw ContractError("n_new_electrons: duration must be positive");
  }
  return target.current_a * duration_s / TargetConfig::electron_charge_c;
}

namespace {

std::string format_lines(const std::vector<SpectralLine>& lines) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out += ",";
    out += format_double(lines[i].energy_ev);
    out += ":";
    out += format_double(lines[i].relative_intensity);
  }
  return out;
}

std::vector<SpectralLine> parse_lines(std::string_view value, const std::string& ctx) {
  std::vector<SpectralLine> lines;
  for (const std::string& item : split(value, ',')) {
    const auto parts = split(trim(item), ':');
    if (parts.size() != 2) {
      throw DataError(ctx + ": expected 'energy:intensity' entries, got '" + item + "'");
    }
    lines.push_back({parse_double(parts[0], ctx), parse_double(parts[1], ctx)});
  }
  return lines;
}

std::string format_dims(const std::array<double, 3>& d) {
  return format_double(d[0]) + "x" + format_double(d[1]) + "x" + format_double(d[2]);
}

std::array<double, 3> parse_dims(std::string_view value, const std::string& ctx) {
  const auto parts = split(value, 'x');
  if (parts.size() != 3) {
    throw DataError(ctx + ": expected 'LxWxH' dimensions, got '" + std::string(value) + "'");
  }
  return {parse_double(parts[0], ctx), parse_double(parts[1], ctx), parse_double(parts[2], ctx)};
}

struct KeyDef {
  const char* key;
  std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
  Provenance initial = Provenance::Default;
};

const std::vector<KeyDef>& key_table() {
  static const std::vector<KeyDef> table = [] {
    std::vector<KeyDef> t;
    auto add_d = [&t](const char* key, std::function<double&(ExperimentConfig&)> ref,
                      Provenance prov = Provenance::Default) {
      t.push_back({key,
                   [ref](ExperimentConfig& c, const std::string& v, const std::string& ctx) {
                     ref(c) = parse_double(v, ctx);
                   },
                   [ref](const ExperimentConfig& c) {
                     return format_double(ref(const_cast<ExperimentConfig&>(c)));
                   },
                   prov});
    };
    auto add_i = [&t](const char* key, std::function<int&(ExperimentConfig&)> ref) {
      t.push_back({key,
                   [ref](ExperimentConfig& c, const std::string& v, const std::string& ctx) {
                     ref(c) = static_cast<int>(parse_i64(v, ctx));
                   },
                   [ref](const ExperimentConfig& c) {
                     return std::to_string(ref(const_cast<ExperimentConfig&>(c)));
                   },
                   Provenance::Default});
    };
    auto add_u = [&t](const char* key, std::function<std::uint64_t&(ExperimentConfig&)> ref) {
      t.push_back({key,
                   [ref](ExperimentConfig& c, const std::string& v, const std::string& ctx) {
                     ref(c) = parse_u64(v, ctx);
                   },
                   [ref](const ExperimentConfig& c) {
                     return std::to_string(ref(const_cast<ExperimentConfig&>(c)));
                   },
                   Provenance::Default});
    };
    auto add_b = [&t](const char* key, std::function<bool&(ExperimentConfig&)> ref) {
      t.push_back({key,
                   [ref](ExperimentConfig& c, const std::string& v, const std::string& ctx) {
                     ref(c) = parse_bool(v, ctx);
                   },
                   [ref](const ExperimentConfig& c) {
                     return ref(const_cast<ExperimentConfig&>(c)) ? std::string("true")
                                                                  : std::string("false");
                   },
                   Provenance::Default});
    };

    t.push_back({"target.material",
                 [](ExperimentConfig& c, const std::string& v, const std::string&) {
                   c.target.material = v;
                 },
                 [](const ExperimentConfig& c) { return c.target.material; },
                 Provenance::Default});
    add_d("target.length", [](ExperimentConfig& c) -> double& { return c.target.length_cm; });
    add_d("target.current", [](ExperimentConfig& c) -> double& { return c.target.current_a; });
    add_d("target.capture_probability_per_electron",
          [](ExperimentConfig& c) -> double& { return c.target.capture_probability_per_electron; });
    add_d("target.anomalous_line_energy",
          [](ExperimentConfig& c) -> double& { return c.target.anomalous_line_energy_ev; },
          Provenance::DerivedDefault);
    t.push_back({"target.normal_lines",
                 [](ExperimentConfig& c, const std::string& v, const std::string& ctx) {
                   c.target.normal_lines = parse_lines(v, ctx);
                 },
                 [](const ExperimentConfig& c) { return format_lines(c.target.normal_lines); },
                 Provenance::DerivedDefault});

    add_i("detector.n_sdd", [](ExperimentConfig& c) -> int& { return c.detector.n_sdd; });
    add_d("detector.total_active_area",
          [](ExperimentConfig& c) -> double& { return c.detector.total_active_area_cm2; });
    add_d("detector.energy_resolution_fwhm_at_8keV",
          [](ExperimentConfig& c) -> double& { return c.detector.energy_resolution_fwhm_at_8kev_ev; });
    add_d("detector.geometric_acceptance",
          [](ExperimentConfig& c) -> double& { return c.detector.geometric_acceptance; });
    add_d("detector.drift_time_fwhm",
          [](ExperimentConfig& c) -> double& { return c.detector.drift_time_fwhm_ns; });
    add_d("detector.charge_collection_max",
          [](ExperimentConfig& c) -> double& { return c.detector.charge_collection_max_ns; });
    add_d("detector.detection_efficiency_at_8keV",
          [](ExperimentConfig& c) -> double& { return c.detector.detection_efficiency_at_8kev; });

    add_i("veto.n_counters", [](ExperimentConfig& c) -> int& { return c.veto.n_counters; });
    t.push_back({"veto.counter_dimensions",
                 [](ExperimentConfig& c, const std::string& v, const std::string& ctx) {
                   c.veto.counter_dimensions_mm = parse_dims(v, ctx);
                 },
                 [](const ExperimentConfig& c) { return format_dims(c.veto.counter_dimensions_mm); },
                 Provenance::Default});
    add_d("veto.solid_angle_coverage",
          [](ExperimentConfig& c) -> double& { return c.veto.solid_angle_coverage; });
    add_d("veto.per_counter_efficiency",
          [](ExperimentConfig& c) -> double& { return c.veto.per_counter_efficiency; });
    add_d("veto.sipm_time_resolution_fwhm",
          [](ExperimentConfig& c) -> double& { return c.veto.sipm_time_resolution_fwhm_ns; });
    add_d("veto.veto_window", [](ExperimentConfig& c) -> double& { return c.veto.veto_window_ns; });
    add_d("veto.scint_pair_window",
          [](ExperimentConfig& c) -> double& { return c.veto.scint_pair_window_ns; });
    add_i("veto.qdc_pedestal_threshold",
          [](ExperimentConfig& c) -> int& { return c.veto.qdc_pedestal_threshold; });
    add_d("veto.qdc_most_probable",
          [](ExperimentConfig& c) -> double& { return c.veto.qdc_most_probable; });
    add_d("veto.qdc_width", [](ExperimentConfig& c) -> double& { return c.veto.qdc_width; });

    add_d("run.duration", [](ExperimentConfig& c) -> double& { return c.run.duration_s; });
    add_b("run.current_on", [](ExperimentConfig& c) -> bool& { return c.run.current_on; });
    add_d("run.cosmic_rate", [](ExperimentConfig& c) -> double& { return c.run.cosmic_rate_hz; });
    add_d("run.environmental_k_rate",
          [](ExperimentConfig& c) -> double& { return c.run.environmental_k_rate_hz; });
    add_d("run.flat_background_rate",
          [](ExperimentConfig& c) -> double& { return c.run.flat_background_rate_hz_per_kev; });
    add_d("run.cosmic_k_conversion_probability",
          [](ExperimentConfig& c) -> double& { return c.run.cosmic_k_conversion_probability; });
    add_u("run.rng_seed", [](ExperimentConfig& c) -> std::uint64_t& { return c.run.rng_seed; });
    add_u("run.max_events", [](ExperimentConfig& c) -> std::uint64_t& { return c.run.max_events; });

    add_d("analysis.band_low", [](ExperimentConfig& c) -> double& { return c.analysis.band_low_ev; });
    add_d("analysis.band_high",
          [](ExperimentConfig& c) -> double& { return c.analysis.band_high_ev; });
    add_d("analysis.bin_width", [](ExperimentConfig& c) -> double& { return c.analysis.bin_width_ev; });
    add_d("analysis.roi_half_width_fwhm",
          [](ExperimentConfig& c) -> double& { return c.analysis.roi_half_width_fwhm; });
    add_d("analysis.confidence_level",
          [](ExperimentConfig& c) -> double& { return c.analysis.confidence_level; });
    return t;
  }();
  return table;
}

std::string env_name_for(const std::string& key) {
  std::string name = "PEPSIM_";
  for (char c : key) {
    if (c == '.') {
      name += '_';
    } else {
      name += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
  }
  return name;
}

void init_provenance(ExperimentConfig& cfg) {
  for (const KeyDef& def : key_table()) cfg.provenance[def.key] = def.initial;
}

void apply_env_overrides(ExperimentConfig& cfg) {
  for (const KeyDef& def : key_table()) {
    const std::string name = env_name_for(def.key);
    if (const char* value = std::getenv(name.c_str())) {
      try {
        def.set(cfg, value, name);
      } catch (const DataError& e) {
        throw ConfigError(e.what());
      }
      cfg.provenance[def.key] = Provenance::Environment;
    }
  }
}

void fail(const std::string& field, const std::string& requirement, const std::string& actual) {
  throw ConfigError(field + ": " + requirement + ", got " + actual);
}

void require(bool ok, const std::string& field, const std::string& requirement, double actual) {
  if (!ok) fail(field, requirement, format_double(actual));
}

}  // namespace

void validate_config(ExperimentConfig& cfg) {
  cfg.warnings.clear();
  const TargetConfig& t = cfg.target;
  if (t.material.empty()) fail("target.material", "must be nonempty", "''");
  require(t.length_cm > 0, "target.length", "must be > 0 cm", t.length_cm);
  require(t.current_a >= 0, "target.current", "must be >= 0 A", t.current_a);
  require(t.capture_probability_per_electron > 0 && t.capture_probability_per_electron <= 1,
          "target.capture_probability_per_electron", "must be in (0, 1]",
          t.capture_probability_per_electron);
  if (t.normal_lines.empty()) fail("target.normal_lines", "must list at least one line", "''");
  double intensity_sum = 0.0;
  double min_line = t.normal_lines.front().energy_ev;
  for (const SpectralLine& line : t.normal_lines) {
    require(line.energy_ev > 0, "target.normal_lines", "line energies must be > 0 eV",
            line.energy_ev);
    require(line.relative_intensity > 0, "target.normal_lines", "intensities must be > 0",
            line.relative_intensity);
    intensity_sum += line.relative_intensity;
    min_line = std::min(min_line, line.energy_ev);
  }
  require(std::fabs(intensity_sum - 1.0) <= 1e-9, "target.normal_lines",
          "relative intensities must sum to 1", intensity_sum);
  for (SpectralLine& line : cfg.target.normal_lines) line.relative_intensity /= intensity_sum;
  require(t.anomalous_line_energy_ev > 0, "target.anomalous_line_energy", "must be > 0 eV",
          t.anomalous_line_energy_ev);
  // Shielding by the extra 1s electron lowers the transition energy.
  require(t.anomalous_line_energy_ev < min_line, "target.anomalous_line_energy",
          "must lie below the lowest normal K line at " + format_double(min_line) + " eV",
          t.anomalous_line_energy_ev);

  const DetectorConfig& d = cfg.detector;
  require(d.n_sdd >= 1, "detector.n_sdd", "must be >= 1", d.n_sdd);
  require(d.total_active_area_cm2 > 0, "detector.total_active_area", "must be > 0 cm^2",
          d.total_active_area_cm2);
  require(d.energy_resolution_fwhm_at_8kev_ev > 0, "detector.energy_resolution_fwhm_at_8keV",
          "must be > 0 eV", d.energy_resolution_fwhm_at_8kev_ev);
  require(d.geometric_acceptance > 0 && d.geometric_acceptance <= 1,
          "detector.geometric_acceptance", "must be in (0, 1]", d.geometric_acceptance);
  require(d.drift_time_fwhm_ns > 0, "detector.drift_time_fwhm", "must be > 0 ns",
          d.drift_time_fwhm_ns);
  require(d.charge_collection_max_ns > 0 && d.charge_collection_max_ns <= 1000.0,
          "detector.charge_collection_max", "must be in (0, 1000] ns (sub-microsecond readout)",
          d.charge_collection_max_ns);
  // Triangular delay support is twice the FWHM; it must fit under the cap.
  require(2.0 * d.drift_time_fwhm_ns <= d.charge_collection_max_ns, "detector.drift_time_fwhm",
          "unreachable: 2*fwhm must be <= charge_collection_max of " +
              format_double(d.charge_collection_max_ns) + " ns",
          d.drift_time_fwhm_ns);
  require(d.detection_efficiency_at_8kev > 0 && d.detection_efficiency_at_8kev <= 1,
          "detector.detection_efficiency_at_8keV", "must be in (0, 1]",
          d.detection_efficiency_at_8kev);

  const VetoConfig& v = cfg.veto;
  require(v.n_counters >= 2 && v.n_counters % 2 == 0, "veto.n_counters",
          "must be even and >= 2 (two layers)", v.n_counters);
  for (double dim : v.counter_dimensions_mm) {
    require(dim > 0, "veto.counter_dimensions", "dimensions must be > 0 mm", dim);
  }
  require(v.solid_angle_coverage > 0 && v.solid_angle_coverage <= 1, "veto.solid_angle_coverage",
          "must be in (0, 1]", v.solid_angle_coverage);
  require(v.per_counter_efficiency > 0 && v.per_counter_efficiency <= 1,
          "veto.per_counter_efficiency", "must be in (0, 1]", v.per_counter_efficiency);
  require(v.sipm_time_resolution_fwhm_ns > 0, "veto.sipm_time_resolution_fwhm", "must be > 0 ns",
          v.sipm_time_resolution_fwhm_ns);
  require(v.veto_window_ns > 0, "veto.veto_window", "must be > 0 ns", v.veto_window_ns);
  require(v.scint_pair_window_ns > 0, "veto.scint_pair_window", "must be > 0 ns",
          v.scint_pair_window_ns);
  require(v.qdc_pedestal_threshold >= 0 && v.qdc_pedestal_threshold < 4095,
          "veto.qdc_pedestal_threshold", "must be in [0, 4095)", v.qdc_pedestal_threshold);
  require(v.qdc_most_probable > v.qdc_pedestal_threshold, "veto.qdc_most_probable",
          "must exceed the pedestal threshold", v.qdc_most_probable);
  require(v.qdc_width > 0, "veto.qdc_width", "must be > 0", v.qdc_width);
  if (v.veto_window_ns < d.charge_collection_max_ns) {
    cfg.warnings.push_back("veto.veto_window (" + format_double(v.veto_window_ns) +
                           " ns) is narrower than the drift support (" +
                           format_double(d.charge_collection_max_ns) +
                           " ns): drift tail escapes the veto");
  }

  const RunPlan& r = cfg.run;
  require(r.duration_s > 0, "run.duration", "must be > 0 s", r.duration_s);
  require(r.cosmic_rate_hz >= 0, "run.cosmic_rate", "must be >= 0 Hz", r.cosmic_rate_hz);
  require(r.environmental_k_rate_hz >= 0, "run.environmental_k_rate", "must be >= 0 Hz",
          r.environmental_k_rate_hz);
  require(r.flat_background_rate_hz_per_kev >= 0, "run.flat_background_rate",
          "must be >= 0 Hz/keV", r.flat_background_rate_hz_per_kev);
  require(r.cosmic_k_conversion_probability >= 0 && r.cosmic_k_conversion_probability <= 1,
          "run.cosmic_k_conversion_probability", "must be in [0, 1]",
          r.cosmic_k_conversion_probability);
  require(r.max_events >= 1, "run.max_events", "must be >= 1",
          static_cast<double>(r.max_events));

  const AnalysisConfig& a = cfg.analysis;
  require(a.band_low_ev > 0, "analysis.band_low", "must be > 0 eV", a.band_low_ev);
  require(a.band_high_ev > a.band_low_ev, "analysis.band_high", "must exceed analysis.band_low",
          a.band_high_ev);
  require(a.bin_width_ev > 0, "analysis.bin_width", "must be > 0 eV", a.bin_width_ev);
  const double span = a.band_high_ev - a.band_low_ev;
  const double n_bins = span / a.bin_width_ev;
  require(std::fabs(n_bins - std::round(n_bins)) < 1e-6 && std::round(n_bins) >= 1,
          "analysis.bin_width", "must divide the band evenly", a.bin_width_ev);
  require(a.roi_half_width_fwhm > 0, "analysis.roi_half_width_fwhm", "must be > 0",
          a.roi_half_width_fwhm);
  require(a.confidence_level > 0 && a.confidence_level < 1, "analysis.confidence_level",
          "must be in (0, 1)", a.confidence_level);
}

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  init_provenance(cfg);
  validate_config(cfg);
  return cfg;
}

ExperimentConfig parse_config(std::string_view text, const std::string& source_label) {
  ExperimentConfig cfg;
  init_provenance(cfg);
  for (const KeyValueLine& kv : parse_key_value_text(text, source_label)) {
    const auto& table = key_table();
    const KeyDef* def = nullptr;
    for (const KeyDef& candidate : table) {
      if (kv.key == candidate.key) {
        def = &candidate;
        break;
      }
    }
    if (!def) {
      throw ConfigError(source_label + ":" + std::to_string(kv.line_number) + ": unknown key '" +
                        kv.key + "'");
    }
    const std::string ctx = source_label + ":" + std::to_string(kv.line_number) + ": " + kv.key;
    try {
      def->set(cfg, kv.value, ctx);
    } catch (const DataError& e) {
      throw ConfigError(e.what());
    }
    cfg.provenance[kv.key] = Provenance::File;
  }
  apply_env_overrides(cfg);
  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  return parse_config(text, path.string());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "# pepsim experiment configuration\n"
      << "# units: lengths cm, areas cm^2, energies eV, times ns, durations s,\n"
      << "#        currents A, rates Hz (flat background Hz/keV)\n";
  std::string section;
  for (const KeyDef& def : key_table()) {
    const std::string key{def.key};
    const std::string sec = key.substr(0, key.find('.'));
    if (sec != section) {
      out << "\n";
      section = sec;
    }
    const auto it = cfg.provenance.find(key);
    const char* prov =
        provenance_name(it != cfg.provenance.end() ? it->second : Provenance::Default);
    out << key << " = " << def.get(cfg) << "  # " << prov << "\n";
  }
  return out.str();
}

bool config_values_equal(const ExperimentConfig& a, const ExperimentConfig& b) {
  for (const KeyDef& def : key_table()) {
    if (def.get(a) != def.get(b)) return false;
  }
  return true;
}

}  // namespace pepsim
