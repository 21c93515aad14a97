#pragma once

#include <Eigen/Dense>
#include <complex>

namespace spdcsim {

// Project-wide quadrature convention: x_theta = (a e^{-i theta} + a^dag e^{i theta})/sqrt(2),
// so the vacuum quadrature variance is 1/2 and the ground-state wavefunction is
// pi^{-1/4} exp(-x^2/2). Every sampler, POVM and Wigner kernel below uses this scaling.
inline constexpr double kVacuumQuadratureVariance = 0.5;

// Hermite-function recurrence is numerically stable up to roughly this index.
inline constexpr int kMaxFockIndex = 170;

struct PhotonDistribution {
  Eigen::VectorXd probs;

  int dim() const { return static_cast<int>(probs.size()); }
  // All entries >= 0 and sum == 1 within tol.
  void validate(double tol = 1e-10) const;
};

// Truncated Fock-basis density operator on |0>..|dim-1>.
struct DensityMatrix {
  Eigen::MatrixXcd elements;

  int dim() const { return static_cast<int>(elements.rows()); }
  double trace_real() const { return elements.trace().real(); }
  bool is_diagonal(double tol = 1e-12) const;
  Eigen::VectorXd diagonal_real() const { return elements.diagonal().real(); }
  PhotonDistribution diagonal_distribution() const;

  // Hermitian within herm_tol, unit trace within trace_tol, smallest
  // eigenvalue >= -psd_tol. Throws DomainError on violation.
  void validate(double herm_tol = 1e-12, double trace_tol = 1e-10,
                double psd_tol = 1e-10) const;

  static DensityMatrix from_diagonal(const Eigen::VectorXd& probs);
  static DensityMatrix maximally_mixed(int dim);
};

// |n><n| in a dim-dimensional truncated space.
DensityMatrix fock_state(int n, int dim);

// Photon-number marginal of the two-mode squeezed state, probs[n] ~ (1-l^2) l^{2n},
// renormalized over the cutoff.
PhotonDistribution squeezed_marginal(double lambda, int dim);

// Source mass above the cutoff, lambda^{2 dim}; used for truncation warnings.
double squeezed_tail_mass(double lambda, int dim);

// Bernoulli (binomial) loss channel with transmission eta.
DensityMatrix apply_loss(const DensityMatrix& rho, double eta);

// Harmonic-oscillator eigenfunction psi_n(x), evaluated by the normalized
// three-term recurrence (no raw Hermite polynomials or factorials).
double fock_wavefunction(int n, double x);

// psi_0(x)..psi_nmax(x) in one recurrence pass.
Eigen::VectorXd fock_wavefunctions(int nmax, double x);

// p(x|theta) = sum_{m,n} rho_mn e^{i(n-m)theta} psi_m(x) psi_n(x).
double quadrature_pdf(const DensityMatrix& rho, double theta, double x);

// log of the binomial coefficient C(n, k).
double log_binomial(int n, int k);

}  // namespace spdcsim
