#include "varcheck/euler.hpp"

#include <cmath>
#include <sstream>

#include "varcheck/calculus.hpp"

namespace varcheck::euler {

namespace {

void require(bool cond, const std::string& message) {
  if (!cond) throw ConfigError(message);
}

}  // namespace

int GridField::node_count() const {
  int count = 1;
  for (int s : shape) count *= s;
  return count;
}

int GridField::flat(const std::vector<int>& idx) const {
  int f = 0;
  for (std::size_t k = 0; k < shape.size(); ++k) f = f * shape[k] + idx[k];
  return f;
}

Vector GridField::coord(const std::vector<int>& idx) const {
  Vector t(dim());
  for (int k = 0; k < dim(); ++k) t(k) = lower(k) + idx[k] * spacing(k);
  return t;
}

bool GridField::interior(const std::vector<int>& idx) const {
  for (std::size_t k = 0; k < shape.size(); ++k)
    if (idx[k] == 0 || idx[k] == shape[k] - 1) return false;
  return true;
}

Eigen::MatrixXd GridField::derivative(const std::vector<int>& idx, int axis) const {
  const double h = spacing(axis);
  std::vector<int> a = idx, b = idx, c = idx;
  if (idx[axis] == 0) {
    // one-sided, second order: (-3 f0 + 4 f1 - f2) / (2h)
    b[axis] = 1;
    c[axis] = 2;
    return (-3.0 * values[flat(a)] + 4.0 * values[flat(b)] - values[flat(c)]) / (2.0 * h);
  }
  if (idx[axis] == shape[axis] - 1) {
    b[axis] = idx[axis] - 1;
    c[axis] = idx[axis] - 2;
    return (3.0 * values[flat(a)] - 4.0 * values[flat(b)] + values[flat(c)]) / (2.0 * h);
  }
  a[axis] = idx[axis] + 1;
  b[axis] = idx[axis] - 1;
  return (values[flat(a)] - values[flat(b)]) / (2.0 * h);
}

GridField GridField::sample(const Vector& lower, const Vector& upper,
                            const std::vector<int>& shape, int rows, int cols,
                            const std::function<Eigen::MatrixXd(const Vector&)>& fn) {
  require(lower.size() == upper.size(), "GridField: lower/upper size mismatch");
  require(static_cast<int>(shape.size()) == lower.size(),
          "GridField: shape must list one count per axis");
  for (int s : shape) require(s >= 3, "GridField: need >= 3 nodes per axis");
  GridField g;
  g.lower = lower;
  g.upper = upper;
  g.shape = shape;
  g.rows = rows;
  g.cols = cols;
  g.values.resize(g.node_count());
  for_each_node(shape, [&](const std::vector<int>& idx, int f) {
    Eigen::MatrixXd v = fn(g.coord(idx));
    require(v.rows() == rows && v.cols() == cols, "GridField: sampled value has wrong shape");
    if (!v.allFinite()) throw NumericalError("GridField: non-finite sample");
    g.values[f] = std::move(v);
  });
  return g;
}

void for_each_node(const std::vector<int>& shape,
                   const std::function<void(const std::vector<int>&, int)>& visit) {
  std::vector<int> idx(shape.size(), 0);
  int f = 0;
  for (;;) {
    visit(idx, f++);
    int axis = static_cast<int>(shape.size()) - 1;
    while (axis >= 0 && ++idx[axis] == shape[axis]) idx[axis--] = 0;
    if (axis < 0) return;
  }
}

Eigen::MatrixXd SlopeField::coupling_at(const Vector& t) const {
  if (coupling) return coupling(t);
  if (!value) throw ConfigError("SlopeField: neither value nor coupling set");
  // Central difference about the zero section; exact when phi is linear in x.
  Eigen::MatrixXd d(nu * n, nu);
  const double step = 1e-6;
  for (int b = 0; b < nu; ++b) {
    Vector xp = Vector::Zero(nu), xm = Vector::Zero(nu);
    xp(b) += step;
    xm(b) -= step;
    const SlopeMatrix pp = value(t, xp), pm = value(t, xm);
    for (int a = 0; a < nu; ++a)
      for (int i = 0; i < n; ++i)
        d(flat_index(a, i, n), b) = (pp(a, i) - pm(a, i)) / (2.0 * step);
  }
  return d;
}

EulerReport euler_residual(const ProblemInstance& instance, int resolution) {
  require(resolution >= 8, "euler_residual: resolution must be >= 8");
  const Lagrangian& f = instance.lagrangian;
  const CandidateField& cand = instance.candidate;
  const Domain& domain = cand.domain;
  const int n = f.n;

  Vector lower(n), upper(n);
  if (domain.kind == Domain::Kind::box) {
    lower = domain.lower;
    upper = domain.upper;
  } else {
    lower << domain.center(0) - domain.radius, domain.center(1) - domain.radius;
    upper << domain.center(0) + domain.radius, domain.center(1) + domain.radius;
  }
  const std::vector<int> shape(n, resolution);

  GridField out;
  out.lower = lower;
  out.upper = upper;
  out.shape = shape;
  out.rows = f.nu;
  out.cols = 1;
  out.values.assign(out.node_count(), Eigen::MatrixXd::Zero(f.nu, 1));
  out.mask.assign(out.values.size(), 0);

  double h_max = 0.0;
  for (int k = 0; k < n; ++k) h_max = std::max(h_max, out.spacing(k));

  // Momenta along the candidate: P(t) = f_z(t, x(t), grad x(t)).
  auto momenta_at = [&](const Vector& t) -> Momenta {
    const Vector x = cand.value(t);
    const SlopeMatrix z = cand.slope_at(t);
    return calculus::grad_z(f, t, x, z);
  };

  EulerReport report;
  report.resolution = resolution;

  for_each_node(shape, [&](const std::vector<int>& idx, int flat_idx) {
    const Vector t = out.coord(idx);
    const bool usable = (domain.kind == Domain::Kind::box)
                            ? out.interior(idx)
                            : domain.contains(t, h_max * (1.0 + 1e-12));
    if (!usable) return;

    Vector divergence = Vector::Zero(f.nu);
    for (int i = 0; i < n; ++i) {
      const double h = out.spacing(i);
      Vector tp = t, tm = t;
      tp(i) += h;
      tm(i) -= h;
      const Momenta pp = momenta_at(tp), pm = momenta_at(tm);
      divergence += (pp.col(i) - pm.col(i)) / (2.0 * h);
    }
    const Vector x = cand.value(t);
    const SlopeMatrix z = cand.slope_at(t);
    const Vector residual = divergence - calculus::grad_x(f, t, x, z);
    if (!residual.allFinite()) {
      std::ostringstream oss;
      oss << "euler_residual: non-finite residual at t = [" << t.transpose() << "]";
      throw NumericalError(oss.str());
    }
    out.values[flat_idx] = residual;
    out.mask[flat_idx] = 1;
    report.max_abs = std::max(report.max_abs, residual.lpNorm<Eigen::Infinity>());
  });

  report.residual = std::move(out);
  return report;
}

ConjugateReport conjugate_identity_residual(const Lagrangian& lagrangian,
                                            const SlopeField& phi, const GridField& q_field,
                                            const GridField& dx_field, int resolution,
                                            const BaseSampler& base) {
  const int nu = phi.nu, n = phi.n;
  require(nu >= 1 && n >= 1, "conjugate_identity_residual: slope field arity unset");
  require(nu == lagrangian.nu && n == lagrangian.n,
          "conjugate_identity_residual: slope field / Lagrangian arity mismatch");
  require(q_field.shape == dx_field.shape, "conjugate_identity_residual: grid mismatch");
  require(q_field.dim() == n, "conjugate_identity_residual: grid dimension must equal n");
  for (int k = 0; k < q_field.dim(); ++k)
    require(q_field.shape[k] == resolution,
            "conjugate_identity_residual: fields must have `resolution` nodes per axis");
  require(q_field.rows == nu && q_field.cols == n,
          "conjugate_identity_residual: q_field nodes must be nu x n");
  require(dx_field.rows == nu && dx_field.cols == 1,
          "conjugate_identity_residual: dx_field nodes must be nu x 1");
  require((q_field.lower - dx_field.lower).norm() == 0.0 &&
              (q_field.upper - dx_field.upper).norm() == 0.0,
          "conjugate_identity_residual: grid mismatch");

  // Current j_i(t) = sum_a q_ai dx_a, one n-vector per node.
  GridField current;
  current.lower = q_field.lower;
  current.upper = q_field.upper;
  current.shape = q_field.shape;
  current.rows = n;
  current.cols = 1;
  current.values.resize(q_field.node_count());
  for_each_node(q_field.shape, [&](const std::vector<int>&, int f) {
    current.values[f] = q_field.values[f].transpose() * dx_field.values[f];
  });

  auto scalar_field = [&](int rows, int cols) {
    GridField g;
    g.lower = q_field.lower;
    g.upper = q_field.upper;
    g.shape = q_field.shape;
    g.rows = rows;
    g.cols = cols;
    g.values.assign(q_field.node_count(), Eigen::MatrixXd::Zero(rows, cols));
    return g;
  };

  ConjugateReport report;
  report.identity = scalar_field(1, 1);
  report.raw_identity = scalar_field(1, 1);
  report.r_q = scalar_field(nu, 1);
  report.r_v = scalar_field(nu, n);

  for_each_node(q_field.shape, [&](const std::vector<int>& idx, int f) {
    const Vector t = q_field.coord(idx);
    const Eigen::MatrixXd coupling = phi.coupling_at(t);  // (nu*n) x nu
    const Vector dx = dx_field.values[f];
    const Eigen::MatrixXd& q = q_field.values[f];

    // Feed residual of the variational system.
    Eigen::MatrixXd r_v(nu, n);
    {
      Eigen::MatrixXd grad_dx(nu, n);
      for (int i = 0; i < n; ++i) grad_dx.col(i) = dx_field.derivative(idx, i);
      for (int a = 0; a < nu; ++a)
        for (int i = 0; i < n; ++i) {
          double coupled = 0.0;
          for (int b = 0; b < nu; ++b) coupled += coupling(flat_index(a, i, n), b) * dx(b);
          r_v(a, i) = grad_dx(a, i) - coupled;
        }
    }

    // Feed residual of the adjoint system (homogeneous part).
    Vector r_q(nu);
    {
      Vector div_q = Vector::Zero(nu);
      for (int i = 0; i < n; ++i) div_q += q_field.derivative(idx, i).col(i);
      for (int a = 0; a < nu; ++a) {
        double coupled = 0.0;
        for (int b = 0; b < nu; ++b)
          for (int j = 0; j < n; ++j) coupled += q(b, j) * coupling(flat_index(b, j, n), a);
        r_q(a) = div_q(a) + coupled;
      }
    }

    double div_current = 0.0;
    for (int i = 0; i < n; ++i) div_current += current.derivative(idx, i)(i, 0);

    Vector f_x = Vector::Zero(nu);
    if (base && lagrangian.grad_x) {
      const auto [x_base, z_base] = base(t);
      f_x = lagrangian.grad_x(t, x_base, z_base);
    }

    const double raw = div_current - f_x.dot(dx);
    const double corrected =
        raw - (r_q - f_x).dot(dx) - q.cwiseProduct(r_v).sum();

    report.r_v.values[f] = r_v;
    report.r_q.values[f] = r_q;
    report.raw_identity.values[f](0, 0) = raw;
    report.identity.values[f](0, 0) = corrected;

    if (q_field.interior(idx)) {
      report.r_v_max = std::max(report.r_v_max, r_v.lpNorm<Eigen::Infinity>());
      report.r_q_max = std::max(report.r_q_max, r_q.lpNorm<Eigen::Infinity>());
      report.raw_identity_max = std::max(report.raw_identity_max, std::fabs(raw));
      report.identity_max = std::max(report.identity_max, std::fabs(corrected));
    }
  });

  return report;
}

}  // namespace varcheck::euler
