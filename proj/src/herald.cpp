#include "spdcsim/herald.hpp"

#include <algorithm>
#include <cmath>

#include "spdcsim/errors.hpp"

namespace spdcsim {

namespace {

// Cutoff large enough that the truncated geometric source mass above it is
// below 1e-14 (clamped to the wavefunction stability limit).
int rate_cutoff_dim(double lambda) {
  if (lambda <= 0.0) return 8;
  const double l2 = lambda * lambda;
  const int d = static_cast<int>(std::ceil(std::log(1e-14) / std::log(l2)));
  return std::clamp(d, 8, kMaxFockIndex);
}

}  // namespace

std::string to_string(ClickPattern pattern) {
  switch (pattern) {
    case ClickPattern::None: return "NONE";
    case ClickPattern::AOnly: return "A_ONLY";
    case ClickPattern::BOnly: return "B_ONLY";
    case ClickPattern::AOrBSingle: return "A_OR_B_SINGLE";
    case ClickPattern::Both: return "BOTH";
  }
  throw DomainError("unknown click pattern");
}

ClickPattern click_pattern_from_string(const std::string& name) {
  if (name == "NONE") return ClickPattern::None;
  if (name == "A_ONLY") return ClickPattern::AOnly;
  if (name == "B_ONLY") return ClickPattern::BOnly;
  if (name == "A_OR_B_SINGLE") return ClickPattern::AOrBSingle;
  if (name == "BOTH") return ClickPattern::Both;
  throw DomainError("unknown click pattern '" + name + "'");
}

void HeraldSpec::validate() const {
  if (!(split > 0.0 && split < 1.0)) {
    throw DomainError("beam-splitter transmittance must lie in (0, 1)");
  }
  if (!(eta_click >= 0.0 && eta_click <= 1.0)) {
    throw DomainError("detector efficiency must lie in [0, 1]");
  }
  if (!(dark >= 0.0 && dark < 1.0)) {
    throw DomainError("dark-count probability must lie in [0, 1)");
  }
}

double click_probability(ClickPattern pattern, int n, const HeraldSpec& spec) {
  spec.validate();
  if (n < 0) throw DomainError("photon number must be nonnegative");

  // A detector stays silent iff no photon routed to it is detected and its
  // dark count does not fire; photons route independently with probability
  // `split` toward A.
  const double no_dark = 1.0 - spec.dark;
  const double a_silent =
      no_dark * std::pow(1.0 - spec.split * spec.eta_click, n);
  const double b_silent =
      no_dark * std::pow(1.0 - (1.0 - spec.split) * spec.eta_click, n);
  const double both_silent =
      no_dark * no_dark * std::pow(1.0 - spec.eta_click, n);

  switch (pattern) {
    case ClickPattern::None:
      return both_silent;
    case ClickPattern::AOnly:
      return b_silent - both_silent;
    case ClickPattern::BOnly:
      return a_silent - both_silent;
    case ClickPattern::AOrBSingle:
      return a_silent + b_silent - 2.0 * both_silent;
    case ClickPattern::Both:
      return 1.0 - a_silent - b_silent + both_silent;
  }
  throw DomainError("unknown click pattern");
}

HeraldOutcome herald_state(double lambda, const HeraldSpec& spec, int dim,
                           double rep_rate_hz) {
  spec.validate();
  const PhotonDistribution source = squeezed_marginal(lambda, dim);

  Eigen::VectorXd weights(dim);
  for (int n = 0; n < dim; ++n) {
    weights[n] = source.probs[n] * click_probability(spec.pattern, n, spec);
  }
  const double total = weights.sum();
  if (!(total > 0.0)) {
    throw HeraldError("herald pattern " + to_string(spec.pattern) +
                      " has zero probability at lambda=" + std::to_string(lambda));
  }

  HeraldOutcome outcome;
  outcome.state = DensityMatrix::from_diagonal(weights / total);
  outcome.prob_per_pulse = total;
  outcome.rate_hz = total * rep_rate_hz;
  return outcome;
}

RatePrediction predicted_rates(const RateModel& model, const HeraldSpec& spec) {
  model.validate();
  spec.validate();
  const int dim = rate_cutoff_dim(model.base_gain);

  auto prob = [&](ClickPattern pattern) {
    HeraldSpec patterned = spec;
    patterned.pattern = pattern;
    double p = 0.0;
    const PhotonDistribution source = squeezed_marginal(model.base_gain, dim);
    for (int n = 0; n < dim; ++n) {
      p += source.probs[n] * click_probability(pattern, n, patterned);
    }
    return p;
  };

  RatePrediction rates;
  rates.r1_hz = model.rep_rate_hz * prob(ClickPattern::AOrBSingle);
  rates.r2_hz = model.rep_rate_hz * prob(ClickPattern::Both);
  rates.r2_formula_hz = rate_law_r2(rates.r1_hz, model.rep_rate_hz);
  return rates;
}

double rate_law_r2(double r1_hz, double rep_rate_hz) {
  if (!(rep_rate_hz > 0.0)) throw DomainError("repetition rate must be positive");
  return r1_hz * r1_hz / (2.0 * rep_rate_hz);
}

RateModel apply_cavity(const RateModel& model, const CavitySpec& spec) {
  model.validate();
  const double gain = model.base_gain * std::sqrt(enhancement(spec));
  if (gain >= 1.0) {
    throw DomainError("cavity-boosted gain " + std::to_string(gain) +
                      " is non-physical (>= 1)");
  }
  return RateModel{model.rep_rate_hz, gain};
}

}  // namespace spdcsim
