#include "varcheck/calculus.hpp"

#include <cmath>

namespace varcheck::calculus {

namespace {

double step_or_default(const FdOptions& opts, const SlopeMatrix& z) {
  if (opts.step > 0.0) return opts.step;
  return default_step(z);
}

// Central difference of a scalar function along one perturbation direction.
template <typename Eval>
double central(const Eval& at, double step) {
  return (at(step) - at(-step)) / (2.0 * step);
}

template <typename Eval>
double derivative(const Eval& at, double step, bool richardson) {
  const double d = central(at, step);
  if (!richardson) return d;
  const double d_half = central(at, step / 2.0);
  return (4.0 * d_half - d) / 3.0;
}

}  // namespace

double default_step(const SlopeMatrix& z) {
  const double scale = z.size() > 0 ? z.cwiseAbs().maxCoeff() : 0.0;
  return 1e-5 * std::max(1.0, scale);
}

SlopeMatrix grad_z(const Lagrangian& f, const Vector& t, const Vector& x,
                   const SlopeMatrix& z, const FdOptions& opts, bool force_fd) {
  if (f.grad_z && !force_fd) return f.grad_z(t, x, z);
  const double step = step_or_default(opts, z);
  SlopeMatrix g(f.nu, f.n);
  for (int a = 0; a < f.nu; ++a)
    for (int i = 0; i < f.n; ++i) {
      g(a, i) = derivative(
          [&](double d) {
            SlopeMatrix zp = z;
            zp(a, i) += d;
            return f.value(t, x, zp);
          },
          step, opts.richardson);
    }
  return g;
}

Vector grad_x(const Lagrangian& f, const Vector& t, const Vector& x,
              const SlopeMatrix& z, const FdOptions& opts, bool force_fd) {
  if (f.grad_x && !force_fd) return f.grad_x(t, x, z);
  double step = opts.step;
  if (step <= 0.0) step = 1e-5 * std::max(1.0, x.size() ? x.cwiseAbs().maxCoeff() : 0.0);
  Vector g(f.nu);
  for (int a = 0; a < f.nu; ++a) {
    g(a) = derivative(
        [&](double d) {
          Vector xp = x;
          xp(a) += d;
          return f.value(t, xp, z);
        },
        step, opts.richardson);
  }
  return g;
}

Momenta weyl_momenta(const Lagrangian& f, const Vector& t, const Vector& x,
                     const SlopeMatrix& z) {
  return grad_z(f, t, x, z);
}

double pontryagin_H(const Lagrangian& f, const Momenta& q, const Vector& t,
                    const Vector& x, const SlopeMatrix& z) {
  return -f.value(t, x, z) + q.cwiseProduct(z).sum();
}

double weierstrass_excess(const Lagrangian& f, const Vector& t, const Vector& x,
                          const SlopeMatrix& z_hat, const SlopeMatrix& h) {
  const SlopeMatrix q = grad_z(f, t, x, z_hat);
  return f.value(t, x, z_hat + h) - f.value(t, x, z_hat) - q.cwiseProduct(h).sum();
}

double eq_bracket_gap(const Lagrangian& f, const Vector& t, const Vector& x,
                      const SlopeMatrix& z_hat, const SlopeMatrix& h) {
  const SlopeMatrix q = grad_z(f, t, x, z_hat);
  const double lhs = -f.value(t, x, z_hat + h) + q.cwiseProduct(h).sum();
  const double rhs = -f.value(t, x, z_hat) + q.cwiseProduct(z_hat).sum();
  return lhs - rhs;
}

Eigen::MatrixXd hess_zz(const Lagrangian& f, const Vector& t, const Vector& x,
                        const SlopeMatrix& z, const FdOptions& opts, bool force_fd) {
  const int m = f.nu * f.n;
  if (f.hess_zz && !force_fd) {
    Eigen::MatrixXd h = f.hess_zz(t, x, z);
    if (h.rows() != m || h.cols() != m)
      throw ConfigError("hess_zz oracle has wrong dimensions");
    return 0.5 * (h + h.transpose());
  }
  // Differences applied to the gradient, one flattened column at a time.
  double step = opts.step;
  if (step <= 0.0) step = 1e-4 * std::max(1.0, z.size() ? z.cwiseAbs().maxCoeff() : 0.0);
  Eigen::MatrixXd hess(m, m);
  const FdOptions inner{};  // gradient uses its own default step
  for (int b = 0; b < f.nu; ++b)
    for (int j = 0; j < f.n; ++j) {
      SlopeMatrix zp = z, zm = z;
      zp(b, j) += step;
      zm(b, j) -= step;
      const SlopeMatrix gp = grad_z(f, t, x, zp, inner, force_fd);
      const SlopeMatrix gm = grad_z(f, t, x, zm, inner, force_fd);
      const SlopeMatrix col = (gp - gm) / (2.0 * step);
      for (int a = 0; a < f.nu; ++a)
        for (int i = 0; i < f.n; ++i)
          hess(flat_index(a, i, f.n), flat_index(b, j, f.n)) = col(a, i);
    }
  return 0.5 * (hess + hess.transpose());
}

}  // namespace varcheck::calculus
