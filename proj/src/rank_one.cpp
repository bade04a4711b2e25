#include "varcheck/rank_one.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <random>

namespace varcheck::rank_one {

namespace {

constexpr double kPi = std::numbers::pi;

double uniform01(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

// Q is even in each argument separately, so sign conventions are free; fix
// them so equal minimizers print identically: first significant component
// of each vector is positive.
void canonicalize(Vector& v) {
  for (int i = 0; i < v.size(); ++i) {
    if (std::fabs(v(i)) > 1e-12) {
      if (v(i) < 0.0) v = -v;
      return;
    }
  }
}

Vector min_eigenvector(const Eigen::MatrixXd& m, double& value) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success)
    throw NumericalError("rank_one: eigen decomposition failed");
  value = solver.eigenvalues()(0);
  Vector v = solver.eigenvectors().col(0);
  v.normalize();
  canonicalize(v);
  return v;
}

Vector random_unit(std::mt19937_64& rng, int dim) {
  Vector v(dim);
  for (;;) {
    for (int i = 0; i < dim; ++i) v(i) = 2.0 * uniform01(rng) - 1.0;
    const double norm = v.norm();
    if (norm > 1e-3) return v / norm;
  }
}

// Directions of the unit sphere in R^d on a polar-angle lattice.  d = 1 is a
// single point by evenness of Q; d = 2 is a uniform circle so right angles
// land exactly on lattice points whenever 4 | resolution.
std::vector<Vector> sphere_grid(int d, int res) {
  std::vector<Vector> out;
  if (d == 1) {
    out.push_back(Vector::Ones(1));
    return out;
  }
  const int n_polar = d - 2;            // angles in [0, pi]
  std::vector<int> idx(n_polar + 1, 0); // last angle in [0, 2 pi)
  for (;;) {
    Vector v(d);
    double sines = 1.0;
    for (int k = 0; k < n_polar; ++k) {
      const double phi = kPi * idx[k] / res;
      v(k) = sines * std::cos(phi);
      sines *= std::sin(phi);
    }
    const double last = 2.0 * kPi * idx[n_polar] / res;
    v(d - 2) = sines * std::cos(last);
    v(d - 1) = sines * std::sin(last);
    out.push_back(std::move(v));

    int axis = n_polar;
    for (;;) {
      ++idx[axis];
      const int limit = (axis == n_polar) ? res : res + 1;
      if (idx[axis] < limit) break;
      idx[axis] = 0;
      if (--axis < 0) return out;
    }
  }
}

struct StartResult {
  double value = 0.0;
  Vector xi, eta;
  int iterations = 0;
  bool converged = false;
};

StartResult run_start(const BiquadraticForm& form, Vector xi, Vector eta, int max_iters,
                      double tol) {
  xi.normalize();
  eta.normalize();
  StartResult r;
  r.value = form.contract(xi, eta);
  for (int it = 0; it < max_iters; ++it) {
    double v_xi = 0.0, v_eta = 0.0;
    xi = min_eigenvector(form.xi_matrix(eta), v_xi);
    eta = min_eigenvector(form.eta_matrix(xi), v_eta);
    r.iterations = it + 1;
    if (std::fabs(v_eta - r.value) <= tol * std::max(1.0, std::fabs(v_eta))) {
      r.value = v_eta;
      r.converged = true;
      break;
    }
    r.value = v_eta;
  }
  r.xi = xi;
  r.eta = eta;
  return r;
}

}  // namespace

BiquadraticForm::BiquadraticForm(int nu, int n, Eigen::MatrixXd coefficients)
    : nu_(nu), n_(n) {
  if (nu < 1 || n < 1) throw ConfigError("BiquadraticForm: arity must be >= 1");
  const int d = nu * n;
  if (coefficients.rows() != d || coefficients.cols() != d)
    throw ConfigError("BiquadraticForm: coefficient matrix must be (nu*n) square");
  m_ = 0.5 * (coefficients + coefficients.transpose());
}

BiquadraticForm BiquadraticForm::from_hessian(int nu, int n,
                                              const Eigen::MatrixXd& hessian) {
  return BiquadraticForm(nu, n, 0.5 * hessian);
}

double BiquadraticForm::contract(const Vector& xi, const Vector& eta) const {
  if (xi.size() != nu_ || eta.size() != n_)
    throw ConfigError("BiquadraticForm::contract: argument size mismatch");
  Vector w(nu_ * n_);
  for (int a = 0; a < nu_; ++a)
    for (int i = 0; i < n_; ++i) w(flat_index(a, i, n_)) = xi(a) * eta(i);
  return w.dot(m_ * w);
}

Eigen::MatrixXd BiquadraticForm::xi_matrix(const Vector& eta) const {
  if (eta.size() != n_) throw ConfigError("BiquadraticForm::xi_matrix: eta size mismatch");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(nu_, nu_);
  for (int al = 0; al < nu_; ++al)
    for (int be = 0; be < nu_; ++be) {
      double sum = 0.0;
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
          sum += m_(flat_index(al, i, n_), flat_index(be, j, n_)) * eta(i) * eta(j);
      a(al, be) = sum;
    }
  return a;
}

Eigen::MatrixXd BiquadraticForm::eta_matrix(const Vector& xi) const {
  if (xi.size() != nu_) throw ConfigError("BiquadraticForm::eta_matrix: xi size mismatch");
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      double sum = 0.0;
      for (int al = 0; al < nu_; ++al)
        for (int be = 0; be < nu_; ++be)
          sum += m_(flat_index(al, i, n_), flat_index(be, j, n_)) * xi(al) * xi(be);
      b(i, j) = sum;
    }
  return b;
}

std::vector<double> BiquadraticForm::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m_);
  if (solver.info() != Eigen::Success)
    throw NumericalError("BiquadraticForm: eigen decomposition failed");
  return {solver.eigenvalues().data(), solver.eigenvalues().data() + m_.rows()};
}

LhResult lh_minimize(const BiquadraticForm& form, const LhOptions& opts) {
  if (opts.starts < 1) throw ConfigError("lh_minimize: starts must be >= 1");
  const int nu = form.nu(), n = form.n();

  std::vector<std::pair<Vector, Vector>> starts;
  for (int k = 0; k < opts.starts; ++k) {
    if (k < nu * n) {
      Vector xi = Vector::Zero(nu), eta = Vector::Zero(n);
      xi(k / n) = 1.0;
      eta(k % n) = 1.0;
      starts.emplace_back(std::move(xi), std::move(eta));
    } else {
      // Per-start stream keyed by index: the sequence is prefix-stable, so
      // raising `starts` can only refine the result.
      std::mt19937_64 rng(opts.seed ^ (0x9e3779b97f4a7c15ULL * (k + 1)));
      starts.emplace_back(random_unit(rng, nu), random_unit(rng, n));
    }
  }
  for (const auto& s : opts.extra_starts) starts.push_back(s);

  LhResult best;
  bool have = false;
  for (const auto& [xi0, eta0] : starts) {
    if (xi0.size() != nu || eta0.size() != n)
      throw ConfigError("lh_minimize: extra start has wrong dimensions");
    const StartResult r = run_start(form, xi0, eta0, opts.max_iters, opts.tol);
    if (!have || r.value < best.min_value) {
      best.min_value = r.value;
      best.xi = r.xi;
      best.eta = r.eta;
      best.iterations = r.iterations;
      best.converged = r.converged;
      have = true;
    }
  }
  canonicalize(best.xi);
  canonicalize(best.eta);
  return best;
}

LhResult grid_oracle(const BiquadraticForm& form, int resolution) {
  if (form.nu() > 4 || form.n() > 4)
    throw ConfigError("grid_oracle: supported up to nu, n = 4");
  if (resolution < 8) throw ConfigError("grid_oracle: resolution must be >= 8");
  const std::vector<Vector> xis = sphere_grid(form.nu(), resolution);
  const std::vector<Vector> etas = sphere_grid(form.n(), resolution);
  if (static_cast<double>(xis.size()) * static_cast<double>(etas.size()) > 2e8)
    throw ConfigError("grid_oracle: grid too large; lower the resolution");

  LhResult best;
  bool have = false;
  for (const Vector& xi : xis)
    for (const Vector& eta : etas) {
      const double v = form.contract(xi, eta);
      if (!have || v < best.min_value) {
        best.min_value = v;
        best.xi = xi;
        best.eta = eta;
        have = true;
      }
    }
  canonicalize(best.xi);
  canonicalize(best.eta);
  best.converged = true;
  return best;
}

double van_hove_margin(const BiquadraticForm& form, const LhOptions& opts) {
  return lh_minimize(form, opts).min_value;
}

std::string classify_margin(double margin, double tol) {
  if (margin > tol) return "strictly_positive";
  if (margin >= -tol) return "nonnegative";
  return "indefinite";
}

}  // namespace varcheck::rank_one
