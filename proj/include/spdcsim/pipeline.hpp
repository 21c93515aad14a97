#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "spdcsim/config.hpp"
#include "spdcsim/tomo.hpp"
#include "spdcsim/wigner.hpp"

namespace spdcsim {

struct SimulateArtifacts {
  DensityMatrix truth;  // heralded state after preparation losses
  QuadratureDataset dataset;
  nlohmann::json rate_report;
  std::string warning;  // nonempty when the source leaks past the cutoff
};

// herald -> preparation loss -> detection-lossy homodyne sampling.
SimulateArtifacts run_simulate(const SimulationConfig& config);

struct NegativityReport {
  double w_origin = 0.0;
  double min_value = 0.0;
  double min_radius = 0.0;
  bool negative = false;
};

nlohmann::json negativity_to_json(const NegativityReport& report);

struct ReconstructArtifacts {
  DensityMatrix rho_hat;
  TomoDiagnostics info;
  WignerGrid wigner;
  NegativityReport negativity;
};

ReconstructArtifacts run_reconstruct(const QuadratureDataset& data,
                                     const TomoConfig& cfg);

// R1/R2 predictions, the rate-law cross-check, cavity gains when configured,
// and any externally measured reference rates echoed untouched.
nlohmann::json run_rates(const SimulationConfig& config);

}  // namespace spdcsim
