#include "spdcsim/fock.hpp"

#include <cmath>
#include <string>

#include "spdcsim/errors.hpp"

namespace spdcsim {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void PhotonDistribution::validate(double tol) const {
  if (probs.size() == 0) throw DomainError("photon distribution is empty");
  for (int n = 0; n < probs.size(); ++n) {
    if (!(probs[n] >= 0.0)) {
      throw DomainError("photon distribution entry " + std::to_string(n) +
                        " is negative");
    }
  }
  if (std::abs(probs.sum() - 1.0) > tol) {
    throw DomainError("photon distribution does not sum to 1");
  }
}

bool DensityMatrix::is_diagonal(double tol) const {
  const int d = dim();
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < d; ++n) {
      if (m != n && std::abs(elements(m, n)) > tol) return false;
    }
  }
  return true;
}

PhotonDistribution DensityMatrix::diagonal_distribution() const {
  return PhotonDistribution{diagonal_real()};
}

void DensityMatrix::validate(double herm_tol, double trace_tol,
                             double psd_tol) const {
  const int d = dim();
  if (d <= 0 || elements.cols() != d) {
    throw DomainError("density matrix must be square and nonempty");
  }
  if ((elements - elements.adjoint()).cwiseAbs().maxCoeff() > herm_tol) {
    throw DomainError("density matrix is not Hermitian");
  }
  if (std::abs(elements.trace().real() - 1.0) > trace_tol ||
      std::abs(elements.trace().imag()) > trace_tol) {
    throw DomainError("density matrix does not have unit trace");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(elements,
                                                         Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -psd_tol) {
    throw DomainError("density matrix is not positive semidefinite");
  }
}

DensityMatrix DensityMatrix::from_diagonal(const Eigen::VectorXd& probs) {
  DensityMatrix rho;
  rho.elements = Eigen::MatrixXcd::Zero(probs.size(), probs.size());
  rho.elements.diagonal() = probs.cast<std::complex<double>>();
  return rho;
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  if (dim <= 0) throw DomainError("dimension must be positive");
  DensityMatrix rho;
  rho.elements =
      Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim);
  return rho;
}

DensityMatrix fock_state(int n, int dim) {
  if (dim <= 0) throw DomainError("dimension must be positive");
  if (n < 0) throw DomainError("photon number must be nonnegative");
  if (n >= dim) {
    throw CutoffError("fock_state(" + std::to_string(n) + ") does not fit in cutoff " +
                      std::to_string(dim));
  }
  DensityMatrix rho;
  rho.elements = Eigen::MatrixXcd::Zero(dim, dim);
  rho.elements(n, n) = 1.0;
  return rho;
}

PhotonDistribution squeezed_marginal(double lambda, int dim) {
  if (dim <= 0) throw DomainError("dimension must be positive");
  if (lambda < 0.0 || lambda >= 1.0) {
    throw DomainError("parametric gain must satisfy 0 <= lambda < 1");
  }
  Eigen::VectorXd probs(dim);
  const double l2 = lambda * lambda;
  double w = 1.0 - l2;
  for (int n = 0; n < dim; ++n) {
    probs[n] = w;
    w *= l2;
  }
  probs /= probs.sum();
  return PhotonDistribution{probs};
}

double squeezed_tail_mass(double lambda, int dim) {
  if (dim <= 0) throw DomainError("dimension must be positive");
  if (lambda < 0.0 || lambda >= 1.0) {
    throw DomainError("parametric gain must satisfy 0 <= lambda < 1");
  }
  return std::pow(lambda, 2.0 * dim);
}

double log_binomial(int n, int k) {
  if (k < 0 || k > n) throw DomainError("log_binomial requires 0 <= k <= n");
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

DensityMatrix apply_loss(const DensityMatrix& rho, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw DomainError("transmission must lie in [0, 1]");
  }
  const int d = rho.dim();
  if (eta == 1.0) return rho;

  DensityMatrix out;
  out.elements = Eigen::MatrixXcd::Zero(d, d);
  const double tr_in = rho.elements.trace().real();

  if (eta == 0.0) {
    out.elements(0, 0) = tr_in;
    return out;
  }

  const double log_eta = std::log(eta);
  const double log_nu = std::log1p(-eta);
  for (int m = 0; m < d; ++m) {
    for (int n = m; n < d; ++n) {
      std::complex<double> acc(0.0, 0.0);
      for (int k = 0; k + n < d; ++k) {
        const double log_coeff = 0.5 * (log_binomial(m + k, k) + log_binomial(n + k, k)) +
                                 0.5 * (m + n) * log_eta + k * log_nu;
        acc += std::exp(log_coeff) * rho.elements(m + k, n + k);
      }
      out.elements(m, n) = acc;
      if (n != m) out.elements(n, m) = std::conj(acc);
    }
  }

  const double tr_out = out.elements.trace().real();
  const double deficit = tr_in - tr_out;
  if (std::abs(deficit) >= 1e-6 * std::max(1.0, std::abs(tr_in))) {
    throw CutoffError("loss map lost trace " + std::to_string(deficit) +
                      "; raise the Fock cutoff");
  }
  if (tr_out != 0.0) out.elements *= tr_in / tr_out;
  return out;
}

Eigen::VectorXd fock_wavefunctions(int nmax, double x) {
  if (nmax < 0) throw DomainError("photon number must be nonnegative");
  if (nmax > kMaxFockIndex) {
    throw NumericError("fock_wavefunction supports n <= " +
                       std::to_string(kMaxFockIndex));
  }
  Eigen::VectorXd psi(nmax + 1);
  psi[0] = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
  if (nmax >= 1) psi[1] = std::sqrt(2.0) * x * psi[0];
  for (int k = 1; k < nmax; ++k) {
    psi[k + 1] = x * std::sqrt(2.0 / (k + 1.0)) * psi[k] -
                 std::sqrt(k / (k + 1.0)) * psi[k - 1];
  }
  return psi;
}

double fock_wavefunction(int n, double x) {
  return fock_wavefunctions(n, x)[n];
}

double quadrature_pdf(const DensityMatrix& rho, double theta, double x) {
  const int d = rho.dim();
  const Eigen::VectorXd psi = fock_wavefunctions(d - 1, x);
  Eigen::VectorXcd u(d);
  for (int n = 0; n < d; ++n) {
    u[n] = psi[n] * std::polar(1.0, n * theta);
  }
  const std::complex<double> p = u.adjoint() * rho.elements * u;
  return p.real();
}

}  // namespace spdcsim
