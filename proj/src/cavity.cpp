#include "spdcsim/cavity.hpp"

#include <cmath>

#include "spdcsim/errors.hpp"

namespace spdcsim {

namespace {
constexpr double kPi = 3.14159265358979323846;

double mean_reflectivity(const CavitySpec& spec) {
  const double g = std::sqrt(spec.r_in * spec.r_loop);
  if (1.0 - g < 1e-12) {
    throw NumericError("cavity diverges as sqrt(r_in * r_loop) -> 1");
  }
  return g;
}
}  // namespace

void CavitySpec::validate() const {
  if (!(r_in >= 0.0 && r_in < 1.0)) {
    throw DomainError("input-coupler reflectivity must lie in [0, 1)");
  }
  if (!(r_loop >= 0.0 && r_loop < 1.0)) {
    throw DomainError("effective cavity reflectivity must lie in [0, 1)");
  }
}

void RateModel::validate() const {
  if (!(rep_rate_hz > 0.0)) throw DomainError("repetition rate must be positive");
  if (!(base_gain >= 0.0 && base_gain < 1.0)) {
    throw DomainError("parametric gain must satisfy 0 <= lambda < 1");
  }
}

double enhancement(const CavitySpec& spec) {
  spec.validate();
  const double g = mean_reflectivity(spec);
  const double denom = 1.0 - g;
  return (1.0 - spec.r_in) / (denom * denom);
}

double finesse(const CavitySpec& spec) {
  spec.validate();
  const double g = mean_reflectivity(spec);
  return kPi * std::sqrt(g) / (1.0 - g);
}

double optimal_input_coupler(double r_loop) {
  if (!(r_loop >= 0.0 && r_loop < 1.0)) {
    throw DomainError("effective cavity reflectivity must lie in [0, 1)");
  }
  // Golden-section maximization; enhancement is unimodal in r_in.
  double a = 0.0;
  double b = 1.0 - 1e-12;
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  auto value = [r_loop](double r_in) {
    return enhancement(CavitySpec{r_in, r_loop});
  };
  double fc = value(c);
  double fd = value(d);
  while (b - a > 1e-10) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = value(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = value(d);
    }
  }
  return 0.5 * (a + b);
}

std::vector<RatePoint> rate_curves(const std::vector<double>& r_in_list,
                                   const std::vector<double>& r_loop_range,
                                   double baseline_r1_hz,
                                   double baseline_r2_hz) {
  if (!(baseline_r1_hz > 0.0 && baseline_r2_hz > 0.0)) {
    throw DomainError("baseline rates must be positive");
  }
  if (r_in_list.empty() || r_loop_range.empty()) {
    throw DomainError("rate sweep must be nonempty");
  }
  std::vector<RatePoint> rows;
  rows.reserve(r_in_list.size() * r_loop_range.size());
  for (double r_m : r_loop_range) {
    for (double r_i : r_in_list) {
      const double e = enhancement(CavitySpec{r_i, r_m});
      rows.push_back(RatePoint{r_m, r_i, e, baseline_r1_hz * e,
                               baseline_r2_hz * e * e, e, e * e});
    }
  }
  return rows;
}

}  // namespace spdcsim
