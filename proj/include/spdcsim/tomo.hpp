#pragma once

#include <functional>
#include <string>
#include <vector>

#include "spdcsim/fock.hpp"
#include "spdcsim/homodyne.hpp"

namespace spdcsim {

enum class TomoMode { Full, Diagonal };

std::string to_string(TomoMode mode);
TomoMode tomo_mode_from_string(const std::string& name);

struct TomoConfig {
  int dim = 5;
  double eta_d = 1.0;   // detection efficiency assumed for POVM correction
  double tol = 1e-9;    // relative log-likelihood convergence threshold
  int max_iter = 5000;
  TomoMode mode = TomoMode::Full;
  int histogram_bins = 0;  // 0 = unbinned (one POVM element per sample)
  void validate() const;
};

// Efficiency-corrected quadrature projector: the ideal |x_theta><x_theta|
// pushed through the adjoint (Heisenberg-picture) loss map, so that
// Tr(rho Pi^eta) = Tr(apply_loss(rho, eta) Pi) for every rho.
Eigen::MatrixXcd povm_element(double x, double theta, const TomoConfig& cfg);

struct TomoDiagnostics {
  int iterations = 0;
  double loglik = 0.0;
  bool converged = false;
  std::vector<double> loglik_trace;
};

struct TomoResult {
  DensityMatrix rho;
  TomoDiagnostics info;
};

// Called once per accepted iterate with the new state and its log-likelihood.
using IterationObserver =
    std::function<void(const DensityMatrix&, double loglik)>;

// Iterates rho <- N[R rho R] with R = sum_j w_j Pi_j / Tr(rho Pi_j) from the
// maximally mixed state; falls back to a diluted step whenever a raw step
// would decrease the log-likelihood.
TomoResult maxlik_povm(const std::vector<Eigen::MatrixXcd>& elements,
                       const std::vector<double>& counts,
                       const TomoConfig& cfg,
                       const IterationObserver& observer = nullptr);

TomoResult maxlik(const QuadratureDataset& data, const TomoConfig& cfg,
                  const IterationObserver& observer = nullptr);

struct DiagonalTomoResult {
  PhotonDistribution probs;
  TomoDiagnostics info;
};

// Expectation-maximization on p(x) = sum_n rho_nn h_n(x); phase-randomized
// quadrature data determine only the diagonal.
DiagonalTomoResult diagonal_maxlik(const QuadratureDataset& data,
                                   const TomoConfig& cfg);

}  // namespace spdcsim
