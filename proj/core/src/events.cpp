#include "pepsim/events.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include "pepsim/errors.hpp"
#include "pepsim/rng.hpp"
#include "pepsim/text.hpp"

namespace pepsim {

const char* origin_name(Origin origin) {
  switch (origin) {
    case Origin::PepViolation: return "pep_violation";
    case Origin::CosmicInducedK: return "cosmic_induced_k";
    case Origin::EnvironmentalK: return "environmental_k";
    case Origin::Continuum: return "continuum";
    case Origin::CosmicCharged: return "cosmic_charged";
  }
  return "unknown";
}

Origin origin_from_name(std::string_view name) {
  if (name == "pep_violation") return Origin::PepViolation;
  if (name == "cosmic_induced_k") return Origin::CosmicInducedK;
  if (name == "environmental_k") return Origin::EnvironmentalK;
  if (name == "continuum") return Origin::Continuum;
  if (name == "cosmic_charged") return Origin::CosmicCharged;
  throw DataError("unknown event origin '" + std::string(name) + "'");
}

double expected_signal_count(const QuonParameter& param, const ExperimentConfig& config,
                             double duration_s) {
  return param.violation_probability() * n_new_electrons(config.target, duration_s) *
         config.target.capture_probability_per_electron * config.detector.geometric_acceptance *
         config.detector.detection_efficiency_at_8kev;
}

namespace {

constexpr double kBatchTargetEvents = 250000.0;
constexpr std::uint64_t kCosmicIdStride = 1ULL << 40;

struct OriginRates {
  double signal = 0.0;
  double cosmic = 0.0;
  double environmental = 0.0;
  double continuum = 0.0;
};

double draw_line_energy(const std::vector<SpectralLine>& lines, Rng& rng) {
  const double u = rng.uniform01();
  double cum = 0.0;
  for (const SpectralLine& line : lines) {
    cum += line.relative_intensity;
    if (u < cum) return line.energy_ev;
  }
  return lines.back().energy_ev;
}

void generate_batch(const ExperimentConfig& config, const RunPlan& plan,
                    const OriginRates& means, std::uint64_t batch_index, std::uint64_t n_batches,
                    std::vector<TruthEvent>& out) {
  Rng rng(derive_seed(plan.rng_seed, "generate", batch_index));
  const double duration_ns = plan.duration_s * 1e9;
  const double inv = 1.0 / static_cast<double>(n_batches);

  const std::uint64_t n_signal = rng.poisson(means.signal * inv);
  for (std::uint64_t i = 0; i < n_signal; ++i) {
    out.push_back({Origin::PepViolation, config.target.anomalous_line_energy_ev,
                   rng.uniform(0.0, duration_ns), std::nullopt});
  }

  const std::uint64_t n_cosmic = rng.poisson(means.cosmic * inv);
  for (std::uint64_t i = 0; i < n_cosmic; ++i) {
    const std::uint64_t id = batch_index * kCosmicIdStride + i;
    const double t = rng.uniform(0.0, duration_ns);
    out.push_back({Origin::CosmicCharged, std::nullopt, t, id});
    // Prompt target fluorescence from the same track shares time and id.
    if (rng.uniform01() < plan.cosmic_k_conversion_probability) {
      out.push_back({Origin::CosmicInducedK, draw_line_energy(config.target.normal_lines, rng), t, id});
    }
  }

  const std::uint64_t n_env = rng.poisson(means.environmental * inv);
  for (std::uint64_t i = 0; i < n_env; ++i) {
    out.push_back({Origin::EnvironmentalK, draw_line_energy(config.target.normal_lines, rng),
                   rng.uniform(0.0, duration_ns), std::nullopt});
  }

  const std::uint64_t n_cont = rng.poisson(means.continuum * inv);
  for (std::uint64_t i = 0; i < n_cont; ++i) {
    out.push_back({Origin::Continuum,
                   rng.uniform(config.analysis.band_low_ev, config.analysis.band_high_ev),
                   rng.uniform(0.0, duration_ns), std::nullopt});
  }
}

bool truth_order(const TruthEvent& a, const TruthEvent& b) {
  return std::make_tuple(a.true_time_ns, static_cast<int>(a.origin),
                         a.cosmic_id.value_or(UINT64_MAX), a.true_energy_ev.value_or(-1.0)) <
         std::make_tuple(b.true_time_ns, static_cast<int>(b.origin),
                         b.cosmic_id.value_or(UINT64_MAX), b.true_energy_ev.value_or(-1.0));
}

}  // namespace

std::vector<TruthEvent> generate_run(const QuonParameter& param, const ExperimentConfig& config,
                                     const RunPlan& plan) {
  OriginRates means;
  means.signal = plan.current_on ? expected_signal_count(param, config, plan.duration_s) : 0.0;
  means.cosmic = plan.cosmic_rate_hz * plan.duration_s;
  means.environmental = plan.environmental_k_rate_hz * plan.duration_s;
  const double band_kev = (config.analysis.band_high_ev - config.analysis.band_low_ev) / 1000.0;
  means.continuum = plan.flat_background_rate_hz_per_kev * band_kev * plan.duration_s;

  const double expected_total =
      means.signal + means.cosmic * (1.0 + plan.cosmic_k_conversion_probability) +
      means.environmental + means.continuum;
  if (!(expected_total <= static_cast<double>(plan.max_events))) {
    throw CapacityError("generate_run: expected " + format_double(expected_total) +
                        " events exceeds run.max_events = " + std::to_string(plan.max_events));
  }

  const std::uint64_t n_batches = static_cast<std::uint64_t>(
      std::clamp(std::ceil(expected_total / kBatchTargetEvents), 1.0, 64.0));

  std::vector<TruthEvent> events;
  events.reserve(static_cast<std::size_t>(expected_total * 1.1) + 64);
  for (std::uint64_t b = 0; b < n_batches; ++b) {
    generate_batch(config, plan, means, b, n_batches, events);
  }
  std::sort(events.begin(), events.end(), truth_order);
  return events;
}

OriginCounts count_by_origin(const std::vector<TruthEvent>& events) {
  OriginCounts counts;
  for (const TruthEvent& e : events) {
    switch (e.origin) {
      case Origin::PepViolation: ++counts.pep_violation; break;
      case Origin::CosmicInducedK: ++counts.cosmic_induced_k; break;
      case Origin::EnvironmentalK: ++counts.environmental_k; break;
      case Origin::Continuum: ++counts.continuum; break;
      case Origin::CosmicCharged: ++counts.cosmic_charged; break;
    }
  }
  return counts;
}

void write_truth_csv(const std::filesystem::path& path, const std::vector<TruthEvent>& events,
                     const RunPlan& plan) {
  std::ostringstream out;
  out << "# duration_s=" << format_double(plan.duration_s) << "\n"
      << "# current_on=" << (plan.current_on ? "true" : "false") << "\n"
      << "origin,true_energy_eV,true_time_ns,cosmic_id\n";
  for (const TruthEvent& e : events) {
    out << origin_name(e.origin) << ",";
    if (e.true_energy_ev) out << format_double(*e.true_energy_ev);
    out << "," << format_double(e.true_time_ns) << ",";
    if (e.cosmic_id) out << *e.cosmic_id;
    out << "\n";
  }
  write_text_file(path, out.str());
}

TruthFile read_truth_csv(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  TruthFile file;
  bool saw_duration = false;
  bool saw_header = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line =
        std::string_view(text).substr(pos, eol == std::string::npos ? text.size() - pos : eol - pos);
    pos = (eol == std::string::npos) ? text.size() : eol + 1;
    ++line_no;
    const std::string ctx = path.string() + ":" + std::to_string(line_no);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string_view meta = trim(line.substr(1));
      const std::size_t eq = meta.find('=');
      if (eq == std::string_view::npos) continue;
      const std::string_view key = trim(meta.substr(0, eq));
      const std::string_view value = trim(meta.substr(eq + 1));
      if (key == "duration_s") {
        file.duration_s = parse_double(value, ctx);
        saw_duration = true;
      } else if (key == "current_on") {
        file.current_on = parse_bool(value, ctx);
      }
      continue;
    }
    if (!saw_header) {
      if (trim(line) != "origin,true_energy_eV,true_time_ns,cosmic_id") {
        throw DataError(ctx + ": unexpected truth CSV header '" + std::string(line) + "'");
      }
      saw_header = true;
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 4) {
      throw DataError(ctx + ": expected 4 fields, got " + std::to_string(fields.size()));
    }
    TruthEvent event;
    event.origin = origin_from_name(trim(fields[0]));
    if (!trim(fields[1]).empty()) event.true_energy_ev = parse_double(fields[1], ctx);
    event.true_time_ns = parse_double(fields[2], ctx);
    if (!trim(fields[3]).empty()) event.cosmic_id = parse_u64(fields[3], ctx);
    file.events.push_back(event);
  }
  if (!saw_header) throw DataError(path.string() + ": missing truth CSV header");
  if (!saw_duration) throw DataError(path.string() + ": missing '# duration_s=' metadata");
  return file;
}

}  // namespace pepsim
