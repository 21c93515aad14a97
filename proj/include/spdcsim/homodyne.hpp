#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spdcsim/fock.hpp"

namespace spdcsim {

struct QuadratureRecord {
  double theta;
  double x;
};

struct DatasetMeta {
  std::uint64_t seed = 0;
  std::size_t n_samples = 0;
  double eta_d = 1.0;
  bool eta_applied = false;  // records already include the detection loss
  std::string source;
};

struct QuadratureDataset {
  std::vector<QuadratureRecord> records;
  DatasetMeta meta;
};

enum class ScheduleKind { UniformRandom, Stepped };

std::string to_string(ScheduleKind kind);
ScheduleKind schedule_kind_from_string(const std::string& name);

// uniform-random: i.i.d. theta in [0, pi). stepped: cycles through `steps`
// equispaced phases k*pi/steps.
std::vector<double> phase_schedule(ScheduleKind kind, std::size_t n,
                                   std::size_t steps, std::uint64_t seed);

// Inverse-CDF sampler over a trapezoid-integrated cumulative table of the
// quadrature pdf at one phase.
class InverseCdfSampler {
 public:
  InverseCdfSampler(const DensityMatrix& rho, double theta,
                    int intervals = 4096, double x_max = 8.0);

  // u in [0, 1) -> quadrature value.
  double draw(double u) const;

  // The sampler's own (table-resolution) CDF, for bias checks.
  double cdf(double x) const;

 private:
  double x_min_;
  double step_;
  std::vector<double> density_;
  std::vector<double> cumulative_;
};

// Draws one quadrature value per scheduled phase from
// quadrature_pdf(apply_loss(rho, eta_d), theta, .); deterministic given seed.
QuadratureDataset sample(const DensityMatrix& rho, double eta_d,
                         const std::vector<double>& phases, std::uint64_t seed);

}  // namespace spdcsim
