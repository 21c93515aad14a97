#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "spdcsim/cavity.hpp"
#include "spdcsim/herald.hpp"
#include "spdcsim/homodyne.hpp"
#include "spdcsim/tomo.hpp"

namespace spdcsim {

// Externally measured rates to echo in reports next to the model predictions.
struct ReferenceRates {
  std::optional<double> measured_r1_hz;
  std::optional<double> measured_r2_hz;
  std::optional<double> measured_r2_err_hz;
};

struct SamplingSpec {
  std::size_t n_samples = 0;
  ScheduleKind schedule = ScheduleKind::UniformRandom;
  std::size_t steps = 12;  // stepped schedule only
  std::uint64_t seed = 0;
};

struct SimulationConfig {
  double lambda = 0.0;
  double rep_rate_hz = 82e6;
  std::optional<CavitySpec> cavity;
  HeraldSpec herald;
  double eta_prep = 1.0;
  double eta_d = 1.0;
  SamplingSpec sampling;
  TomoConfig tomo;
  std::optional<ReferenceRates> reference;

  void validate() const;  // throws ConfigError with the offending field path
};

SimulationConfig parse_config(const nlohmann::json& j);
nlohmann::json config_to_json(const SimulationConfig& config);

}  // namespace spdcsim
