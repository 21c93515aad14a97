#include "spdcsim/config.hpp"

#include <cmath>

#include "spdcsim/errors.hpp"

namespace spdcsim {

namespace {

const nlohmann::json& require(const nlohmann::json& j, const std::string& key,
                              const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "must be an object");
  auto it = j.find(key);
  if (it == j.end()) {
    throw ConfigError(path.empty() ? key : path + "." + key, "missing field");
  }
  return *it;
}

double require_number(const nlohmann::json& j, const std::string& key,
                      const std::string& path) {
  const auto& field = require(j, key, path);
  if (!field.is_number()) {
    throw ConfigError(path + "." + key, "must be a number");
  }
  return field.get<double>();
}

double optional_number(const nlohmann::json& j, const std::string& key,
                       const std::string& path, double fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  if (!j.at(key).is_number()) {
    throw ConfigError(path + "." + key, "must be a number");
  }
  return j.at(key).get<double>();
}

std::string require_string(const nlohmann::json& j, const std::string& key,
                           const std::string& path) {
  const auto& field = require(j, key, path);
  if (!field.is_string()) {
    throw ConfigError(path + "." + key, "must be a string");
  }
  return field.get<std::string>();
}

void check_range(double value, double lo, double hi, bool hi_open,
                 const std::string& path) {
  const bool ok = value >= lo && (hi_open ? value < hi : value <= hi);
  if (!ok) {
    throw ConfigError(path, "value " + std::to_string(value) +
                                " outside [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + (hi_open ? ")" : "]"));
  }
}

}  // namespace

void SimulationConfig::validate() const {
  check_range(lambda, 0.0, 1.0, true, "source.lambda");
  if (!(rep_rate_hz > 0.0)) {
    throw ConfigError("source.rep_rate_hz", "must be positive");
  }
  if (cavity) {
    check_range(cavity->r_in, 0.0, 1.0, true, "cavity.r_in");
    check_range(cavity->r_loop, 0.0, 1.0, true, "cavity.r_loop");
    const double scaled = lambda * std::sqrt(enhancement(*cavity));
    if (scaled >= 1.0) {
      throw ConfigError("cavity", "cavity-boosted gain " +
                                      std::to_string(scaled) +
                                      " is non-physical (>= 1)");
    }
  }
  if (!(herald.split > 0.0 && herald.split < 1.0)) {
    throw ConfigError("herald.split", "must lie in (0, 1)");
  }
  check_range(herald.eta_click, 0.0, 1.0, false, "herald.eta_click");
  check_range(herald.dark, 0.0, 1.0, true, "herald.dark");
  check_range(eta_prep, 0.0, 1.0, false, "losses.eta_prep");
  check_range(eta_d, 0.0, 1.0, false, "detection.eta_d");
  if (sampling.n_samples == 0) {
    throw ConfigError("sampling.n_samples", "must be positive");
  }
  if (sampling.schedule == ScheduleKind::Stepped && sampling.steps == 0) {
    throw ConfigError("sampling.steps", "must be positive for stepped schedules");
  }
  if (tomo.dim < 2) throw ConfigError("tomo.dim", "must be >= 2");
  if (!(tomo.eta_d > 0.0 && tomo.eta_d <= 1.0)) {
    throw ConfigError("tomo.eta_d", "must lie in (0, 1]");
  }
  if (!(tomo.tol > 0.0)) throw ConfigError("tomo.tol", "must be positive");
  if (tomo.max_iter < 1) throw ConfigError("tomo.max_iter", "must be >= 1");
}

SimulationConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config", "must be a JSON object");
  SimulationConfig config;

  const auto& source = require(j, "source", "");
  config.lambda = require_number(source, "lambda", "source");
  config.rep_rate_hz = optional_number(source, "rep_rate_hz", "source", 82e6);

  if (j.contains("cavity") && !j.at("cavity").is_null()) {
    const auto& cavity = j.at("cavity");
    CavitySpec spec;
    spec.r_in = require_number(cavity, "r_in", "cavity");
    spec.r_loop = require_number(cavity, "r_loop", "cavity");
    config.cavity = spec;
  }

  const auto& herald = require(j, "herald", "");
  config.herald.split = optional_number(herald, "split", "herald", 0.5);
  config.herald.eta_click = require_number(herald, "eta_click", "herald");
  config.herald.dark = optional_number(herald, "dark", "herald", 0.0);
  try {
    config.herald.pattern =
        click_pattern_from_string(require_string(herald, "pattern", "herald"));
  } catch (const DomainError& e) {
    throw ConfigError("herald.pattern", e.what());
  }

  if (j.contains("losses")) {
    config.eta_prep = optional_number(j.at("losses"), "eta_prep", "losses", 1.0);
  }
  if (j.contains("detection")) {
    config.eta_d = optional_number(j.at("detection"), "eta_d", "detection", 1.0);
  }

  const auto& sampling = require(j, "sampling", "");
  const double n = require_number(sampling, "n_samples", "sampling");
  if (n < 1 || n != std::floor(n)) {
    throw ConfigError("sampling.n_samples", "must be a positive integer");
  }
  config.sampling.n_samples = static_cast<std::size_t>(n);
  if (sampling.contains("schedule")) {
    try {
      config.sampling.schedule = schedule_kind_from_string(
          require_string(sampling, "schedule", "sampling"));
    } catch (const DomainError& e) {
      throw ConfigError("sampling.schedule", e.what());
    }
  }
  const double steps = optional_number(sampling, "steps", "sampling", 12);
  if (steps < 0 || steps != std::floor(steps)) {
    throw ConfigError("sampling.steps", "must be a nonnegative integer");
  }
  config.sampling.steps = static_cast<std::size_t>(steps);
  const double seed = optional_number(sampling, "seed", "sampling", 0);
  if (seed < 0 || seed != std::floor(seed)) {
    throw ConfigError("sampling.seed", "must be a nonnegative integer");
  }
  config.sampling.seed = static_cast<std::uint64_t>(seed);

  if (j.contains("tomo")) {
    const auto& tomo = j.at("tomo");
    config.tomo.dim =
        static_cast<int>(optional_number(tomo, "dim", "tomo", 5));
    config.tomo.eta_d = optional_number(tomo, "eta_d", "tomo", config.eta_d);
    config.tomo.tol = optional_number(tomo, "tol", "tomo", 1e-9);
    config.tomo.max_iter =
        static_cast<int>(optional_number(tomo, "max_iter", "tomo", 5000));
    config.tomo.histogram_bins =
        static_cast<int>(optional_number(tomo, "histogram_bins", "tomo", 0));
    if (tomo.contains("mode")) {
      try {
        config.tomo.mode =
            tomo_mode_from_string(require_string(tomo, "mode", "tomo"));
      } catch (const DomainError& e) {
        throw ConfigError("tomo.mode", e.what());
      }
    }
  } else {
    config.tomo.eta_d = config.eta_d;
  }

  if (j.contains("reference")) {
    const auto& ref = j.at("reference");
    ReferenceRates rates;
    if (ref.contains("measured_r1_hz")) {
      rates.measured_r1_hz = require_number(ref, "measured_r1_hz", "reference");
    }
    if (ref.contains("measured_r2_hz")) {
      rates.measured_r2_hz = require_number(ref, "measured_r2_hz", "reference");
    }
    if (ref.contains("measured_r2_err_hz")) {
      rates.measured_r2_err_hz =
          require_number(ref, "measured_r2_err_hz", "reference");
    }
    config.reference = rates;
  }

  config.validate();
  return config;
}

nlohmann::json config_to_json(const SimulationConfig& config) {
  nlohmann::json j;
  j["source"] = {{"lambda", config.lambda},
                 {"rep_rate_hz", config.rep_rate_hz}};
  if (config.cavity) {
    j["cavity"] = {{"r_in", config.cavity->r_in},
                   {"r_loop", config.cavity->r_loop}};
  }
  j["herald"] = {{"split", config.herald.split},
                 {"eta_click", config.herald.eta_click},
                 {"dark", config.herald.dark},
                 {"pattern", to_string(config.herald.pattern)}};
  j["losses"] = {{"eta_prep", config.eta_prep}};
  j["detection"] = {{"eta_d", config.eta_d}};
  j["sampling"] = {{"n_samples", config.sampling.n_samples},
                   {"schedule", to_string(config.sampling.schedule)},
                   {"steps", config.sampling.steps},
                   {"seed", config.sampling.seed}};
  j["tomo"] = {{"dim", config.tomo.dim},
               {"eta_d", config.tomo.eta_d},
               {"tol", config.tomo.tol},
               {"max_iter", config.tomo.max_iter},
               {"mode", to_string(config.tomo.mode)},
               {"histogram_bins", config.tomo.histogram_bins}};
  if (config.reference) {
    nlohmann::json ref;
    if (config.reference->measured_r1_hz) {
      ref["measured_r1_hz"] = *config.reference->measured_r1_hz;
    }
    if (config.reference->measured_r2_hz) {
      ref["measured_r2_hz"] = *config.reference->measured_r2_hz;
    }
    if (config.reference->measured_r2_err_hz) {
      ref["measured_r2_err_hz"] = *config.reference->measured_r2_err_hz;
    }
    j["reference"] = ref;
  }
  return j;
}

}  // namespace spdcsim
