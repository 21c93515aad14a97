#pragma once

#include <string>

#include "spdcsim/cavity.hpp"
#include "spdcsim/fock.hpp"

namespace spdcsim {

// Exclusive click outcomes of the two on/off detectors behind the idler
// beam splitter; AOrBSingle means exactly one detector clicked.
enum class ClickPattern { None, AOnly, BOnly, AOrBSingle, Both };

std::string to_string(ClickPattern pattern);
ClickPattern click_pattern_from_string(const std::string& name);

struct HeraldSpec {
  double split = 0.5;      // beam-splitter transmittance toward detector A
  double eta_click = 1.0;  // lumped on/off detector efficiency (filters included)
  double dark = 0.0;       // dark-count probability per detector per pulse
  ClickPattern pattern = ClickPattern::Both;
  void validate() const;
};

struct HeraldOutcome {
  DensityMatrix state;  // diagonal signal-mode state
  double prob_per_pulse = 0.0;
  double rate_hz = 0.0;  // prob_per_pulse * rep_rate (0 when no rep rate given)
};

// Probability of the click pattern given n idler photons.
double click_probability(ClickPattern pattern, int n, const HeraldSpec& spec);

// Signal state conditioned on the click pattern, with per-pulse probability.
HeraldOutcome herald_state(double lambda, const HeraldSpec& spec, int dim,
                           double rep_rate_hz = 0.0);

struct RatePrediction {
  double r1_hz = 0.0;          // single-click (exactly one detector) herald rate
  double r2_hz = 0.0;          // coincidence (both detectors) herald rate
  double r2_formula_hz = 0.0;  // r1^2 / (2 * rep_rate)
};

RatePrediction predicted_rates(const RateModel& model, const HeraldSpec& spec);

// r1^2 / (2 * rep_rate): two-photon rate implied by a measured single-photon rate.
double rate_law_r2(double r1_hz, double rep_rate_hz);

// Scales the parametric gain by sqrt(enhancement): power build-up E boosts the
// single-photon probability by E and the two-photon one by E^2 at low gain.
RateModel apply_cavity(const RateModel& model, const CavitySpec& spec);

}  // namespace spdcsim
