#pragma once

#include "spdcsim/fock.hpp"

namespace spdcsim {

struct WignerGrid {
  Eigen::VectorXd xs;
  Eigen::VectorXd ps;
  // values(i, j) = W(xs[i], ps[j])
  Eigen::MatrixXd values;
};

// Associated Laguerre polynomials L_0^alpha(y) .. L_{count-1}^alpha(y) by the
// three-term recurrence.
Eigen::VectorXd laguerre_row(int count, int alpha, double y);

// W(x, p) for an arbitrary (possibly non-diagonal) state.
double wigner_point(const DensityMatrix& rho, double x, double p);

WignerGrid wigner(const DensityMatrix& rho, const Eigen::VectorXd& xs,
                  const Eigen::VectorXd& ps);

// 121x121 lattice over [-4, 4]^2.
WignerGrid wigner_default_grid(const DensityMatrix& rho);

// Radial profile W(r) = (1/pi) e^{-r^2} sum_n p_n (-1)^n L_n(2 r^2) of a
// phase-symmetric (diagonal) state.
double wigner_radial(const Eigen::VectorXd& diag_probs, double r);

struct WignerMinimum {
  double value;
  double radius;
};

// Minimum of the radial profile over r in [0, 6]; dense scan plus
// golden-section refinement. Diagonal states only.
WignerMinimum wigner_min(const DensityMatrix& rho);

}  // namespace spdcsim
