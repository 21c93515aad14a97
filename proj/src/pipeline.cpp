#include "spdcsim/pipeline.hpp"

#include <cmath>
#include <sstream>

#include "spdcsim/errors.hpp"
#include "spdcsim/herald.hpp"

namespace spdcsim {

namespace {

// Independent sub-streams for the phase schedule and the quadrature draws.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

nlohmann::json prediction_to_json(const RatePrediction& rates) {
  return nlohmann::json{{"r1_hz", rates.r1_hz},
                        {"r2_hz", rates.r2_hz},
                        {"r2_formula_hz", rates.r2_formula_hz}};
}

}  // namespace

SimulateArtifacts run_simulate(const SimulationConfig& config) {
  config.validate();

  RateModel model{config.rep_rate_hz, config.lambda};
  if (config.cavity) model = apply_cavity(model, *config.cavity);

  SimulateArtifacts artifacts;
  const double tail = squeezed_tail_mass(model.base_gain, config.tomo.dim);
  if (tail > 1e-4) {
    std::ostringstream warning;
    warning << "source tail mass " << tail
            << " above the Fock cutoff exceeds 1e-4; consider raising tomo.dim";
    artifacts.warning = warning.str();
  }

  const HeraldOutcome outcome = herald_state(
      model.base_gain, config.herald, config.tomo.dim, model.rep_rate_hz);
  artifacts.truth = apply_loss(outcome.state, config.eta_prep);

  const std::vector<double> phases = phase_schedule(
      config.sampling.schedule, config.sampling.n_samples,
      config.sampling.steps, derive_seed(config.sampling.seed, 0));
  artifacts.dataset = sample(artifacts.truth, config.eta_d, phases,
                             derive_seed(config.sampling.seed, 1));
  artifacts.dataset.meta.seed = config.sampling.seed;

  std::ostringstream source;
  source << "heralded " << to_string(config.herald.pattern)
         << " lambda=" << model.base_gain << " eta_prep=" << config.eta_prep;
  artifacts.dataset.meta.source = source.str();

  artifacts.rate_report = run_rates(config);
  artifacts.rate_report["herald"] = {
      {"pattern", to_string(config.herald.pattern)},
      {"prob_per_pulse", outcome.prob_per_pulse},
      {"rate_hz", outcome.rate_hz}};
  return artifacts;
}

nlohmann::json negativity_to_json(const NegativityReport& report) {
  return nlohmann::json{{"w_origin", report.w_origin},
                        {"min_value", report.min_value},
                        {"min_radius", report.min_radius},
                        {"negative", report.negative}};
}

ReconstructArtifacts run_reconstruct(const QuadratureDataset& data,
                                     const TomoConfig& cfg) {
  cfg.validate();
  ReconstructArtifacts artifacts;
  if (cfg.mode == TomoMode::Diagonal) {
    DiagonalTomoResult result = diagonal_maxlik(data, cfg);
    artifacts.rho_hat = DensityMatrix::from_diagonal(result.probs.probs);
    artifacts.info = std::move(result.info);
  } else {
    TomoResult result = maxlik(data, cfg);
    artifacts.rho_hat = std::move(result.rho);
    artifacts.info = std::move(result.info);
  }

  artifacts.wigner = wigner_default_grid(artifacts.rho_hat);
  artifacts.negativity.w_origin = wigner_point(artifacts.rho_hat, 0.0, 0.0);

  if (artifacts.rho_hat.is_diagonal(1e-9)) {
    const WignerMinimum minimum = wigner_min(artifacts.rho_hat);
    artifacts.negativity.min_value = minimum.value;
    artifacts.negativity.min_radius = minimum.radius;
  } else {
    Eigen::Index xi = 0;
    Eigen::Index pj = 0;
    artifacts.negativity.min_value = artifacts.wigner.values.minCoeff(&xi, &pj);
    artifacts.negativity.min_radius =
        std::hypot(artifacts.wigner.xs[xi], artifacts.wigner.ps[pj]);
  }
  artifacts.negativity.negative = artifacts.negativity.min_value < 0.0;
  return artifacts;
}

nlohmann::json run_rates(const SimulationConfig& config) {
  config.validate();

  const RateModel single_pass{config.rep_rate_hz, config.lambda};
  const RatePrediction base = predicted_rates(single_pass, config.herald);

  nlohmann::json report;
  if (config.cavity) {
    const RateModel boosted = apply_cavity(single_pass, *config.cavity);
    const RatePrediction enhanced = predicted_rates(boosted, config.herald);
    report = prediction_to_json(enhanced);
    report["single_pass"] = prediction_to_json(base);
    report["cavity"] = {
        {"enhancement", enhancement(*config.cavity)},
        {"finesse", finesse(*config.cavity)},
        {"rate1_gain", base.r1_hz > 0.0 ? enhanced.r1_hz / base.r1_hz : 0.0},
        {"rate2_gain", base.r2_hz > 0.0 ? enhanced.r2_hz / base.r2_hz : 0.0}};
  } else {
    report = prediction_to_json(base);
  }

  if (config.reference) {
    nlohmann::json ref;
    if (config.reference->measured_r1_hz) {
      ref["measured_r1_hz"] = *config.reference->measured_r1_hz;
      ref["formula_r2_from_measured_r1_hz"] =
          rate_law_r2(*config.reference->measured_r1_hz, config.rep_rate_hz);
    }
    if (config.reference->measured_r2_hz) {
      ref["measured_r2_hz"] = *config.reference->measured_r2_hz;
    }
    if (config.reference->measured_r2_err_hz) {
      ref["measured_r2_err_hz"] = *config.reference->measured_r2_err_hz;
    }
    report["reference"] = ref;
  }
  return report;
}

}  // namespace spdcsim
