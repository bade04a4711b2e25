#pragma once

#include "varcheck/problems.hpp"
#include "varcheck/types.hpp"

namespace varcheck::calculus {

/// Finite-difference controls.  step = 0 selects the default
/// 1e-5 * max(1, ||z||_inf).  Richardson extrapolation is off by default;
/// plain second-order central differences otherwise.
struct FdOptions {
  double step = 0.0;
  bool richardson = false;
};

double default_step(const SlopeMatrix& z);

/// d f / d z (entrywise).  Uses the analytic oracle when present unless
/// `force_fd`; otherwise central differences with `opts`.
SlopeMatrix grad_z(const Lagrangian& f, const Vector& t, const Vector& x,
                   const SlopeMatrix& z, const FdOptions& opts = {},
                   bool force_fd = false);

/// d f / d x (componentwise), same oracle/fallback contract as grad_z.
Vector grad_x(const Lagrangian& f, const Vector& t, const Vector& x,
              const SlopeMatrix& z, const FdOptions& opts = {},
              bool force_fd = false);

/// Momenta q = df/dz evaluated along a candidate configuration.
Momenta weyl_momenta(const Lagrangian& f, const Vector& t, const Vector& x,
                     const SlopeMatrix& z);

/// H(q, t, x, z) = -f(t, x, z) + <q, z>.
double pontryagin_H(const Lagrangian& f, const Momenta& q, const Vector& t,
                    const Vector& x, const SlopeMatrix& z);

/// E(h) = f(z_hat + h) - f(z_hat) - <df/dz(z_hat), h>.
/// With q = df/dz(z_hat): H(q, .., z_hat + h) - H(q, .., z_hat) = -E(h).
double weierstrass_excess(const Lagrangian& f, const Vector& t, const Vector& x,
                          const SlopeMatrix& z_hat, const SlopeMatrix& h);

/// Raw two-sided comparison of the printed maximum-principle inequality,
/// [-f(z_hat+h) + <q, h>] - [-f(z_hat) + <q, z_hat>] with q = df/dz(z_hat).
/// Differs from -E(h) by the constant <q, z_hat>; exposed so reports can
/// show both forms.  Checkers use weierstrass_excess.
double eq_bracket_gap(const Lagrangian& f, const Vector& t, const Vector& x,
                      const SlopeMatrix& z_hat, const SlopeMatrix& h);

/// Flattened (nu*n) x (nu*n) second derivative d²f/dz², flat_index ordering,
/// symmetrized as (A + A^T)/2.  Analytic oracle when present unless
/// `force_fd`; otherwise central differences applied to grad_z.
Eigen::MatrixXd hess_zz(const Lagrangian& f, const Vector& t, const Vector& x,
                        const SlopeMatrix& z, const FdOptions& opts = {},
                        bool force_fd = false);

}  // namespace varcheck::calculus
