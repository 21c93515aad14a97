#include "spdcsim/homodyne.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "spdcsim/errors.hpp"

namespace spdcsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

// 53-bit uniform in [0, 1); independent of library distribution internals so
// seeded streams are stable across standard libraries.
double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::string to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::UniformRandom: return "uniform-random";
    case ScheduleKind::Stepped: return "stepped";
  }
  throw DomainError("unknown schedule kind");
}

ScheduleKind schedule_kind_from_string(const std::string& name) {
  if (name == "uniform-random") return ScheduleKind::UniformRandom;
  if (name == "stepped") return ScheduleKind::Stepped;
  throw DomainError("unknown schedule kind '" + name + "'");
}

std::vector<double> phase_schedule(ScheduleKind kind, std::size_t n,
                                   std::size_t steps, std::uint64_t seed) {
  if (n == 0) throw DomainError("schedule length must be positive");
  std::vector<double> phases(n);
  switch (kind) {
    case ScheduleKind::Stepped: {
      if (steps == 0) throw DomainError("stepped schedule needs steps > 0");
      for (std::size_t j = 0; j < n; ++j) {
        phases[j] = static_cast<double>(j % steps) * kPi / static_cast<double>(steps);
      }
      break;
    }
    case ScheduleKind::UniformRandom: {
      std::mt19937_64 rng(seed);
      for (std::size_t j = 0; j < n; ++j) {
        phases[j] = uniform_unit(rng) * kPi;
      }
      break;
    }
  }
  return phases;
}

InverseCdfSampler::InverseCdfSampler(const DensityMatrix& rho, double theta,
                                     int intervals, double x_max) {
  if (intervals < 2) throw DomainError("sampler table needs >= 2 intervals");
  x_min_ = -x_max;
  step_ = 2.0 * x_max / intervals;
  density_.resize(intervals + 1);
  cumulative_.resize(intervals + 1);
  for (int i = 0; i <= intervals; ++i) {
    const double x = x_min_ + i * step_;
    density_[i] = std::max(quadrature_pdf(rho, theta, x), 0.0);
  }
  cumulative_[0] = 0.0;
  for (int i = 0; i < intervals; ++i) {
    cumulative_[i + 1] =
        cumulative_[i] + 0.5 * step_ * (density_[i] + density_[i + 1]);
  }
  if (!(cumulative_.back() > 0.0)) {
    throw NumericError("quadrature pdf has no mass inside the sampler window");
  }
}

double InverseCdfSampler::draw(double u) const {
  const double target = u * cumulative_.back();
  const auto it =
      std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  std::size_t i = (it == cumulative_.begin())
                      ? 0
                      : static_cast<std::size_t>(it - cumulative_.begin()) - 1;
  i = std::min(i, cumulative_.size() - 2);

  // Trapezoid CDF is quadratic on the interval; invert it in the form that
  // stays stable as the density slope goes to zero.
  const double mass = target - cumulative_[i];
  const double f0 = density_[i];
  const double slope = (density_[i + 1] - density_[i]) / step_;
  const double disc = std::max(f0 * f0 + 2.0 * slope * mass, 0.0);
  const double denom = f0 + std::sqrt(disc);
  const double t = (denom > 0.0) ? 2.0 * mass / denom : 0.0;
  return x_min_ + i * step_ + std::min(t, step_);
}

double InverseCdfSampler::cdf(double x) const {
  if (x <= x_min_) return 0.0;
  const double span = (cumulative_.size() - 1) * step_;
  if (x >= x_min_ + span) return cumulative_.back();
  const auto i = static_cast<std::size_t>((x - x_min_) / step_);
  const double t = x - (x_min_ + i * step_);
  const double slope = (density_[i + 1] - density_[i]) / step_;
  return cumulative_[i] + density_[i] * t + 0.5 * slope * t * t;
}

QuadratureDataset sample(const DensityMatrix& rho, double eta_d,
                         const std::vector<double>& phases,
                         std::uint64_t seed) {
  if (!(eta_d >= 0.0 && eta_d <= 1.0)) {
    throw DomainError("detection efficiency must lie in [0, 1]");
  }
  if (phases.empty()) throw DomainError("sample count must be positive");

  const DensityMatrix lossy = (eta_d < 1.0) ? apply_loss(rho, eta_d) : rho;
  const bool phase_free = lossy.is_diagonal(1e-14);

  QuadratureDataset data;
  data.records.reserve(phases.size());
  data.meta.seed = seed;
  data.meta.n_samples = phases.size();
  data.meta.eta_d = eta_d;
  data.meta.eta_applied = true;

  std::mt19937_64 rng(seed);
  double cached_theta = phases.front();
  InverseCdfSampler sampler(lossy, phase_free ? 0.0 : cached_theta);
  for (double theta : phases) {
    if (!phase_free && theta != cached_theta) {
      sampler = InverseCdfSampler(lossy, theta);
      cached_theta = theta;
    }
    const double u = uniform_unit(rng);
    data.records.push_back(QuadratureRecord{theta, sampler.draw(u)});
  }
  return data;
}

}  // namespace spdcsim
