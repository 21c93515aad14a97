#include "spdcsim/wigner.hpp"

#include <cmath>
#include <vector>

#include "spdcsim/errors.hpp"

namespace spdcsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Wigner transform of |m><n| for n >= m at polar point (r, phi):
//   (-1)^m / pi * sqrt(m!/n!) * (sqrt(2) r)^{n-m} e^{i(n-m)phi}
//     * L_m^{n-m}(2 r^2) * e^{-r^2}
// assembled from precomputed Laguerre rows and log-scaled amplitudes.
struct KernelTables {
  int dim;
  std::vector<double> lgamma_table;

  explicit KernelTables(int d) : dim(d), lgamma_table(d + 1) {
    for (int i = 0; i <= d; ++i) lgamma_table[i] = std::lgamma(i + 1.0);
  }

  double amplitude(int m, int n, double r) const {
    // sqrt(m!/n!) * (sqrt(2) r)^{n-m}, n >= m
    if (n == m) return 1.0;
    if (r == 0.0) return 0.0;
    const double log_amp = 0.5 * (lgamma_table[m] - lgamma_table[n]) +
                           (n - m) * std::log(std::sqrt(2.0) * r);
    return std::exp(log_amp);
  }
};

double wigner_point_impl(const DensityMatrix& rho, const KernelTables& tables,
                         double x, double p) {
  const int d = rho.dim();
  const double r2 = x * x + p * p;
  const double r = std::sqrt(r2);
  const double phi = std::atan2(p, x);
  const double gauss = std::exp(-r2) / kPi;

  double w = 0.0;
  for (int alpha = 0; alpha < d; ++alpha) {
    const Eigen::VectorXd lag = laguerre_row(d - alpha, alpha, 2.0 * r2);
    for (int m = 0; m + alpha < d; ++m) {
      const int n = m + alpha;
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      if (alpha == 0) {
        w += rho.elements(m, m).real() * sign * lag[m] * gauss;
      } else {
        const double amp = tables.amplitude(m, n, r);
        if (amp == 0.0) continue;
        const std::complex<double> kernel =
            sign * amp * lag[m] * gauss * std::polar(1.0, alpha * phi);
        w += 2.0 * (rho.elements(m, n) * kernel).real();
      }
    }
  }
  return w;
}

}  // namespace

Eigen::VectorXd laguerre_row(int count, int alpha, double y) {
  if (count <= 0) throw DomainError("laguerre_row needs count > 0");
  Eigen::VectorXd lag(count);
  lag[0] = 1.0;
  if (count > 1) lag[1] = 1.0 + alpha - y;
  for (int i = 1; i + 1 < count; ++i) {
    lag[i + 1] =
        ((2.0 * i + alpha + 1.0 - y) * lag[i] - (i + alpha) * lag[i - 1]) /
        (i + 1.0);
  }
  return lag;
}

double wigner_point(const DensityMatrix& rho, double x, double p) {
  KernelTables tables(rho.dim());
  return wigner_point_impl(rho, tables, x, p);
}

WignerGrid wigner(const DensityMatrix& rho, const Eigen::VectorXd& xs,
                  const Eigen::VectorXd& ps) {
  if (xs.size() == 0 || ps.size() == 0) {
    throw DomainError("wigner grid must be nonempty");
  }
  KernelTables tables(rho.dim());
  WignerGrid grid;
  grid.xs = xs;
  grid.ps = ps;
  grid.values.resize(xs.size(), ps.size());
  for (int i = 0; i < xs.size(); ++i) {
    for (int j = 0; j < ps.size(); ++j) {
      grid.values(i, j) = wigner_point_impl(rho, tables, xs[i], ps[j]);
    }
  }
  return grid;
}

WignerGrid wigner_default_grid(const DensityMatrix& rho) {
  const Eigen::VectorXd axis = Eigen::VectorXd::LinSpaced(121, -4.0, 4.0);
  return wigner(rho, axis, axis);
}

double wigner_radial(const Eigen::VectorXd& diag_probs, double r) {
  const int d = static_cast<int>(diag_probs.size());
  const double y = 2.0 * r * r;
  const Eigen::VectorXd lag = laguerre_row(d, 0, y);
  double acc = 0.0;
  double sign = 1.0;
  for (int n = 0; n < d; ++n) {
    acc += diag_probs[n] * sign * lag[n];
    sign = -sign;
  }
  return acc * std::exp(-r * r) / kPi;
}

WignerMinimum wigner_min(const DensityMatrix& rho) {
  if (!rho.is_diagonal(1e-10)) {
    throw DomainError(
        "wigner_min supports diagonal (phase-symmetric) states only; evaluate "
        "the full grid instead");
  }
  const Eigen::VectorXd probs = rho.diagonal_real();

  // Dense scan over [0, 6].
  const int scan_points = 2401;
  const double r_max = 6.0;
  double best_r = 0.0;
  double best_w = wigner_radial(probs, 0.0);
  for (int i = 1; i < scan_points; ++i) {
    const double r = r_max * i / (scan_points - 1);
    const double w = wigner_radial(probs, r);
    if (w < best_w) {
      best_w = w;
      best_r = r;
    }
  }

  // Golden-section refinement in the bracketing interval.
  const double step = r_max / (scan_points - 1);
  double a = std::max(0.0, best_r - step);
  double b = std::min(r_max, best_r + step);
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = wigner_radial(probs, c);
  double fd = wigner_radial(probs, d);
  while (b - a > 1e-12) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = wigner_radial(probs, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = wigner_radial(probs, d);
    }
  }
  const double r_opt = 0.5 * (a + b);
  const double w_opt = wigner_radial(probs, r_opt);
  if (w_opt < best_w) return {w_opt, r_opt};
  return {best_w, best_r};
}

}  // namespace spdcsim
