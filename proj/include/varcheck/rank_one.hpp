// Rank-one (Legendre-Hadamard) analysis of the second slope derivative.
//
// The central object is the biquadratic form Q(xi, eta) obtained by
// contracting a symmetric bilinear coefficient tensor against rank-one slope
// perturbations h = xi eta^T.  The coefficients are normalized so that for
// small amplitudes r the excess of the integrand satisfies
//
//   E(r xi eta^T) = Q(xi, eta) r^2 + o(r^2),
//
// i.e. the tensor is one half of the slope Hessian.  Q >= 0 on all unit
// pairs is the classical Legendre-Hadamard condition; its minimum over the
// product of unit spheres is the margin reported by this module.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "varcheck/types.hpp"

namespace varcheck::rank_one {

// A rank-one slope perturbation h = amplitude * xi * eta^T.
struct RankOneDirection {
  Vector xi;         // fiber direction, size nu
  Vector eta;        // base covector, size n
  double amplitude = 1.0;

  SlopeMatrix matrix() const { return amplitude * xi * eta.transpose(); }
};

class BiquadraticForm {
 public:
  // `coefficients` is (nu*n) x (nu*n) in flat_index ordering; it is
  // symmetrized on construction.
  BiquadraticForm(int nu, int n, Eigen::MatrixXd coefficients);

  // Half of a (flattened) slope Hessian, so that contract() matches the
  // quadratic excess coefficient exactly for quadratic integrands.
  static BiquadraticForm from_hessian(int nu, int n, const Eigen::MatrixXd& hessian);

  int nu() const { return nu_; }
  int n() const { return n_; }

  double coeff(int alpha, int i, int beta, int j) const {
    return m_(flat_index(alpha, i, n_), flat_index(beta, j, n_));
  }
  const Eigen::MatrixXd& flat() const { return m_; }

  // Q(xi, eta); homogeneous of degree 2 in each argument.
  double contract(const Vector& xi, const Vector& eta) const;

  // A(eta)_{alpha,beta} = sum_{ij} coeff(alpha,i,beta,j) eta_i eta_j  (nu x nu).
  Eigen::MatrixXd xi_matrix(const Vector& eta) const;
  // B(xi)_{i,j} = sum_{alpha,beta} coeff(alpha,i,beta,j) xi_a xi_b  (n x n).
  Eigen::MatrixXd eta_matrix(const Vector& xi) const;

  // Eigenvalues of the flat coefficient matrix, ascending.  These govern
  // convexity against arbitrary (not necessarily rank-one) perturbations.
  std::vector<double> eigenvalues() const;

 private:
  int nu_, n_;
  Eigen::MatrixXd m_;
};

struct LhOptions {
  int starts = 24;       // multistart count (axis pairs first, then seeded)
  int max_iters = 200;   // alternating eigen-iterations per start
  double tol = 1e-12;    // relative stall tolerance
  unsigned seed = 2024;
  std::vector<std::pair<Vector, Vector>> extra_starts;  // tried after the others
};

struct LhResult {
  double min_value = 0.0;
  Vector xi, eta;        // unit argmin, sign-canonicalized
  int iterations = 0;    // iterations used by the winning start
  bool converged = false;
};

// Minimize Q over unit xi, unit eta by alternating minimal-eigenvector
// updates (each update is exactly optimal for its block, so the iteration
// is monotone nonincreasing).  Deterministic for fixed options; the start
// sequence is prefix-stable in `starts`.
LhResult lh_minimize(const BiquadraticForm& form, const LhOptions& opts = {});

// Exhaustive hyperspherical-grid lower-bound search; slow but independent
// of the iterative path.  Requires nu, n <= 4 and resolution >= 8.
LhResult grid_oracle(const BiquadraticForm& form, int resolution);

// Minimum of Q over unit pairs (the Legendre-Hadamard margin).
double van_hove_margin(const BiquadraticForm& form, const LhOptions& opts = {});

// "strictly_positive" (margin > tol), "nonnegative" (>= -tol), else
// "indefinite".
std::string classify_margin(double margin, double tol = 1e-8);

}  // namespace varcheck::rank_one
