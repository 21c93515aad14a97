#pragma once

#include <vector>

namespace spdcsim {

// Enhancement-cavity model: all intracavity losses lumped into one effective
// round-trip reflectivity r_loop (1 - r_loop = round-trip loss).
struct CavitySpec {
  double r_in = 0.0;    // input-coupler power reflectivity
  double r_loop = 0.0;  // overall effective cavity reflectivity
  void validate() const;
};

struct RateModel {
  double rep_rate_hz = 82e6;  // pulse repetition rate
  double base_gain = 0.0;     // single-pass parametric gain amplitude
  void validate() const;
};

// Power build-up factor (1 - r_in) / (1 - sqrt(r_in r_loop))^2.
double enhancement(const CavitySpec& spec);

// pi (r_in r_loop)^{1/4} / (1 - sqrt(r_in r_loop)).
double finesse(const CavitySpec& spec);

// argmax over r_in of enhancement(r_in, r_loop); equals r_loop (impedance
// matching) within 1e-6.
double optimal_input_coupler(double r_loop);

struct RatePoint {
  double r_m;
  double r_i;
  double enhancement;
  double rate1_hz;
  double rate2_hz;
  double rate1_gain;
  double rate2_gain;
};

// One row per (r_loop, r_in) pair: single-photon rate scales with the
// enhancement, two-photon rate with its square.
std::vector<RatePoint> rate_curves(const std::vector<double>& r_in_list,
                                   const std::vector<double>& r_loop_range,
                                   double baseline_r1_hz,
                                   double baseline_r2_hz);

}  // namespace spdcsim
