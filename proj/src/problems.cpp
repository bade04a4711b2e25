#include "varcheck/problems.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "varcheck/calculus.hpp"
#include "varcheck/expr.hpp"

namespace varcheck {

namespace {

constexpr double kPi = std::numbers::pi;

// Deterministic uniform double in [0, 1) from a raw 64-bit stream; avoids
// distribution objects so sequences are identical across standard libraries.
double uniform01(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

void require(bool cond, const std::string& message) {
  if (!cond) throw ConfigError(message);
}

}  // namespace

// ---------------------------------------------------------------------------
// Domain

Domain Domain::box(Vector lower, Vector upper, std::vector<int> resolution) {
  require(lower.size() >= 1, "box: dimension must be >= 1");
  require(lower.size() == upper.size(), "box: lower/upper size mismatch");
  require(static_cast<int>(resolution.size()) == lower.size(),
          "box: resolution must list one entry per axis");
  for (int i = 0; i < lower.size(); ++i)
    require(lower(i) < upper(i), "box: empty interior (lower >= upper)");
  for (int r : resolution) require(r >= 2, "box: resolution must be >= 2 per axis");
  Domain d;
  d.kind = Kind::box;
  d.lower = std::move(lower);
  d.upper = std::move(upper);
  d.resolution = std::move(resolution);
  return d;
}

Domain Domain::disc(Vector center, double radius, int resolution) {
  require(center.size() == 2, "disc: supported in R^2 only");
  require(radius > 0.0, "disc: radius must be positive");
  require(resolution >= 2, "disc: resolution must be >= 2");
  Domain d;
  d.kind = Kind::disc;
  d.center = std::move(center);
  d.radius = radius;
  d.resolution = {resolution, resolution};
  return d;
}

int Domain::dim() const { return kind == Kind::box ? static_cast<int>(lower.size()) : 2; }

Vector Domain::centroid() const {
  if (kind == Kind::box) return 0.5 * (lower + upper);
  return center;
}

bool Domain::contains(const Vector& t, double margin) const {
  if (t.size() != dim()) return false;
  if (kind == Kind::box) {
    for (int i = 0; i < t.size(); ++i)
      if (t(i) < lower(i) + margin || t(i) > upper(i) - margin) return false;
    return true;
  }
  return (t - center).norm() <= radius - margin;
}

std::vector<Vector> Domain::interior_grid(int per_axis) const {
  require(per_axis >= 1, "interior_grid: per_axis must be >= 1");
  std::vector<Vector> points;
  if (kind == Kind::box) {
    const int n = dim();
    std::vector<int> idx(n, 0);
    for (;;) {
      Vector t(n);
      for (int i = 0; i < n; ++i)
        t(i) = lower(i) + (idx[i] + 0.5) * (upper(i) - lower(i)) / per_axis;
      points.push_back(std::move(t));
      int axis = n - 1;
      while (axis >= 0 && ++idx[axis] == per_axis) idx[axis--] = 0;
      if (axis < 0) break;
    }
    return points;
  }
  for (int j = 0; j < per_axis; ++j) {
    const double r = radius * (j + 0.5) / per_axis;
    for (int k = 0; k < per_axis; ++k) {
      const double th = 2.0 * kPi * k / per_axis;
      Vector t(2);
      t << center(0) + r * std::cos(th), center(1) + r * std::sin(th);
      points.push_back(std::move(t));
    }
  }
  return points;
}

// ---------------------------------------------------------------------------
// Quadrature

void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights) {
  require(count >= 1, "gauss_legendre: count must be >= 1");
  nodes.assign(count, 0.0);
  weights.assign(count, 0.0);
  for (int i = 0; i < (count + 1) / 2; ++i) {
    // Chebyshev-based initial guess, then Newton on P_count.
    double x = std::cos(kPi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= count; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = count * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[count - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[count - 1 - i] = w;
  }
}

namespace {

struct Rule1d {
  std::vector<double> nodes, weights;  // on [0, 1]
};

Rule1d rule_unit(QuadratureSpec::Rule rule, int count) {
  Rule1d r;
  if (rule == QuadratureSpec::Rule::midpoint) {
    for (int j = 0; j < count; ++j) {
      r.nodes.push_back((j + 0.5) / count);
      r.weights.push_back(1.0 / count);
    }
    return r;
  }
  std::vector<double> xs, ws;
  gauss_legendre(count, xs, ws);
  for (int j = 0; j < count; ++j) {
    r.nodes.push_back(0.5 * (xs[j] + 1.0));
    r.weights.push_back(0.5 * ws[j]);
  }
  return r;
}

}  // namespace

std::vector<QuadratureNode> quadrature_nodes(const Domain& domain, const QuadratureSpec& spec) {
  require(spec.resolution >= 1, "quadrature: resolution must be >= 1");
  std::vector<QuadratureNode> out;
  const Rule1d unit = rule_unit(spec.rule, spec.resolution);

  if (domain.kind == Domain::Kind::box) {
    const int n = domain.dim();
    std::vector<int> idx(n, 0);
    for (;;) {
      QuadratureNode node;
      node.t = Vector(n);
      node.weight = 1.0;
      for (int i = 0; i < n; ++i) {
        const double len = domain.upper(i) - domain.lower(i);
        node.t(i) = domain.lower(i) + unit.nodes[idx[i]] * len;
        node.weight *= unit.weights[idx[i]] * len;
      }
      out.push_back(std::move(node));
      int axis = n - 1;
      while (axis >= 0 && ++idx[axis] == spec.resolution) idx[axis--] = 0;
      if (axis < 0) break;
    }
    return out;
  }

  // Polar tensor product: chosen radial rule (Jacobian r) x uniform angles.
  const int k_angle = std::max(4, spec.resolution);
  for (int j = 0; j < spec.resolution; ++j) {
    const double r = unit.nodes[j] * domain.radius;
    const double wr = unit.weights[j] * domain.radius;
    for (int k = 0; k < k_angle; ++k) {
      const double th = 2.0 * kPi * (k + 0.5) / k_angle;
      QuadratureNode node;
      node.t = Vector(2);
      node.t << domain.center(0) + r * std::cos(th), domain.center(1) + r * std::sin(th);
      node.weight = wr * r * (2.0 * kPi / k_angle);
      out.push_back(std::move(node));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Self checks

OracleCheck self_check(const Lagrangian& f, unsigned seed, int probes, double tol) {
  OracleCheck check;
  if (!f.grad_x && !f.grad_z && !f.hess_zz) {
    check.detail = "no analytic oracles attached";
    return check;
  }
  std::mt19937_64 rng(seed);
  const calculus::FdOptions fd{};
  for (int p = 0; p < probes; ++p) {
    Vector t(f.n), x(f.nu);
    SlopeMatrix z(f.nu, f.n);
    for (int i = 0; i < f.n; ++i) t(i) = uniform(rng, -2.0, 2.0);
    for (int a = 0; a < f.nu; ++a) x(a) = uniform(rng, -2.0, 2.0);
    for (int a = 0; a < f.nu; ++a)
      for (int i = 0; i < f.n; ++i) z(a, i) = uniform(rng, -2.0, 2.0);

    auto record = [&](double analytic, double fd_value, const char* what) {
      const double err = std::fabs(analytic - fd_value) / std::max(1.0, std::fabs(analytic));
      if (err > check.max_rel_error) {
        check.max_rel_error = err;
        check.detail = what;
      }
    };
    if (f.grad_z) {
      const SlopeMatrix a = f.grad_z(t, x, z);
      const SlopeMatrix b = calculus::grad_z(f, t, x, z, fd, /*force_fd=*/true);
      for (int i = 0; i < a.size(); ++i) record(a(i), b(i), "grad_z");
    }
    if (f.grad_x) {
      const Vector a = f.grad_x(t, x, z);
      const Vector b = calculus::grad_x(f, t, x, z, fd, /*force_fd=*/true);
      for (int i = 0; i < a.size(); ++i) record(a(i), b(i), "grad_x");
    }
    if (f.hess_zz) {
      const Eigen::MatrixXd a = calculus::hess_zz(f, t, x, z);
      const Eigen::MatrixXd b = calculus::hess_zz(f, t, x, z, fd, /*force_fd=*/true);
      for (int i = 0; i < a.size(); ++i) record(a(i), b(i), "hess_zz");
    }
  }
  check.ok = check.max_rel_error <= tol;
  return check;
}

SlopeMatrix CandidateField::slope_at(const Vector& t) const {
  if (slope) return slope(t);
  SlopeMatrix g(nu, t.size());
  for (int i = 0; i < t.size(); ++i) {
    const double step = 1e-6 * std::max(1.0, std::fabs(t(i)));
    Vector tp = t, tm = t;
    tp(i) += step;
    tm(i) -= step;
    g.col(i) = (value(tp) - value(tm)) / (2.0 * step);
  }
  return g;
}

OracleCheck self_check(const CandidateField& field, unsigned seed, int probes, double tol) {
  OracleCheck check;
  if (!field.slope) {
    check.detail = "no analytic slope attached";
    return check;
  }
  std::mt19937_64 rng(seed);
  const Domain& d = field.domain;
  for (int p = 0; p < probes; ++p) {
    Vector t(d.dim());
    if (d.kind == Domain::Kind::box) {
      for (int i = 0; i < t.size(); ++i)
        t(i) = uniform(rng, d.lower(i), d.upper(i));
    } else {
      const double r = d.radius * 0.95 * std::sqrt(uniform01(rng));
      const double th = uniform(rng, 0.0, 2.0 * kPi);
      t << d.center(0) + r * std::cos(th), d.center(1) + r * std::sin(th);
    }
    const SlopeMatrix a = field.slope(t);
    CandidateField fd_only{field.nu, field.domain, field.value, nullptr};
    const SlopeMatrix b = fd_only.slope_at(t);
    for (int i = 0; i < a.size(); ++i) {
      const double err = std::fabs(a(i) - b(i)) / std::max(1.0, std::fabs(a(i)));
      if (err > check.max_rel_error) {
        check.max_rel_error = err;
        check.detail = "slope";
      }
    }
  }
  check.ok = check.max_rel_error <= tol;
  return check;
}

// ---------------------------------------------------------------------------
// Catalog

namespace {

int resolution_param(const std::map<std::string, double>& params, int fallback) {
  auto it = params.find("resolution");
  if (it == params.end()) return fallback;
  const double v = it->second;
  require(v >= 2.0 && v == std::floor(v), "catalog: resolution must be an integer >= 2");
  return static_cast<int>(v);
}

void reject_unknown(const std::map<std::string, double>& params,
                    const std::vector<std::string>& allowed, const std::string& name) {
  for (const auto& [key, _] : params)
    require(std::find(allowed.begin(), allowed.end(), key) != allowed.end(),
            "catalog: problem '" + name + "' does not take parameter '" + key + "'");
}

CandidateField linear_candidate(const Eigen::Matrix2d& m, const Domain& domain) {
  CandidateField c;
  c.nu = 2;
  c.domain = domain;
  c.value = [m](const Vector& t) -> Vector { return m * t; };
  c.slope = [m](const Vector&) -> SlopeMatrix { return m; };
  return c;
}

ProblemInstance make_dirichlet(const std::map<std::string, double>& params) {
  reject_unknown(params, {"resolution"}, "dirichlet");
  const int res = resolution_param(params, 32);
  Lagrangian f;
  f.n = f.nu = 2;
  f.value = [](const Vector&, const Vector&, const SlopeMatrix& z) {
    return 0.5 * z.squaredNorm();
  };
  f.grad_x = [](const Vector&, const Vector&, const SlopeMatrix&) {
    return Vector::Zero(2);
  };
  f.grad_z = [](const Vector&, const Vector&, const SlopeMatrix& z) { return z; };
  f.hess_zz = [](const Vector&, const Vector&, const SlopeMatrix&) {
    return Eigen::MatrixXd::Identity(4, 4);
  };
  Vector lo(2), hi(2);
  lo << 0, 0;
  hi << 1, 1;
  ProblemInstance inst;
  inst.name = "dirichlet";
  inst.params = params;
  inst.lagrangian = f;
  inst.candidate = linear_candidate(Eigen::Matrix2d::Identity(),
                                    Domain::box(lo, hi, {res, res}));
  return inst;
}

ProblemInstance make_elasticity(const std::map<std::string, double>& params) {
  reject_unknown(params, {"a", "b", "c", "m11", "m12", "m21", "m22", "resolution"},
                 "elasticity");
  for (const char* key : {"a", "b", "c"})
    require(params.count(key) == 1,
            std::string("catalog: elasticity requires parameter '") + key + "'");
  const double a = params.at("a"), b = params.at("b"), c = params.at("c");
  const int res = resolution_param(params, 32);
  auto get = [&](const char* key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  Eigen::Matrix2d m;
  m << get("m11", 1.0), get("m12", 0.0), get("m21", 0.0), get("m22", 1.0);

  Lagrangian f;
  f.n = f.nu = 2;
  // z1 = z(0,0), z2 = z(0,1), z3 = z(1,0), z4 = z(1,1).
  f.value = [a, b, c](const Vector&, const Vector&, const SlopeMatrix& z) {
    const double z1 = z(0, 0), z2 = z(0, 1), z3 = z(1, 0), z4 = z(1, 1);
    return a * (z1 * z1 + z4 * z4) + b * (z2 * z2 + z3 * z3) + 2.0 * c * (z1 * z4 - z2 * z3);
  };
  f.grad_x = [](const Vector&, const Vector&, const SlopeMatrix&) {
    return Vector::Zero(2);
  };
  f.grad_z = [a, b, c](const Vector&, const Vector&, const SlopeMatrix& z) {
    SlopeMatrix g(2, 2);
    g(0, 0) = 2.0 * a * z(0, 0) + 2.0 * c * z(1, 1);
    g(0, 1) = 2.0 * b * z(0, 1) - 2.0 * c * z(1, 0);
    g(1, 0) = 2.0 * b * z(1, 0) - 2.0 * c * z(0, 1);
    g(1, 1) = 2.0 * a * z(1, 1) + 2.0 * c * z(0, 0);
    return g;
  };
  f.hess_zz = [a, b, c](const Vector&, const Vector&, const SlopeMatrix&) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(4, 4);
    h(0, 0) = h(3, 3) = 2.0 * a;
    h(1, 1) = h(2, 2) = 2.0 * b;
    h(0, 3) = h(3, 0) = 2.0 * c;
    h(1, 2) = h(2, 1) = -2.0 * c;
    return h;
  };
  Vector lo(2), hi(2);
  lo << 0, 0;
  hi << 1, 1;
  ProblemInstance inst;
  inst.name = "elasticity";
  inst.params = params;
  inst.lagrangian = f;
  inst.candidate = linear_candidate(m, Domain::box(lo, hi, {res, res}));
  return inst;
}

ProblemInstance make_cubic(const std::map<std::string, double>& params) {
  reject_unknown(params, {"resolution"}, "cubic");
  const int res = resolution_param(params, 32);
  Lagrangian f;
  f.n = f.nu = 2;
  f.value = [](const Vector&, const Vector&, const SlopeMatrix& z) {
    const double u = z(0, 0), v = z(1, 1);
    return u * u * u + v * v * v;
  };
  f.grad_x = [](const Vector&, const Vector&, const SlopeMatrix&) {
    return Vector::Zero(2);
  };
  f.grad_z = [](const Vector&, const Vector&, const SlopeMatrix& z) {
    SlopeMatrix g = SlopeMatrix::Zero(2, 2);
    g(0, 0) = 3.0 * z(0, 0) * z(0, 0);
    g(1, 1) = 3.0 * z(1, 1) * z(1, 1);
    return g;
  };
  f.hess_zz = [](const Vector&, const Vector&, const SlopeMatrix& z) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(4, 4);
    h(0, 0) = 6.0 * z(0, 0);
    h(3, 3) = 6.0 * z(1, 1);
    return h;
  };
  Vector center(2);
  center << 0, 0;
  ProblemInstance inst;
  inst.name = "cubic";
  inst.params = params;
  inst.lagrangian = f;
  inst.candidate = linear_candidate(Eigen::Matrix2d::Identity(),
                                    Domain::disc(center, 1.0, res));
  return inst;
}

}  // namespace

ProblemInstance catalog_get(const std::string& name,
                            const std::map<std::string, double>& params) {
  if (name == "dirichlet") return make_dirichlet(params);
  if (name == "elasticity") return make_elasticity(params);
  if (name == "cubic") return make_cubic(params);
  throw ConfigError("catalog: unknown problem '" + name + "'");
}

std::vector<std::string> catalog_names() { return {"cubic", "dirichlet", "elasticity"}; }

// ---------------------------------------------------------------------------
// Functional evaluation

double evaluate_functional(const ProblemInstance& instance, const CandidateField& field,
                           const QuadratureSpec& spec) {
  const Lagrangian& f = instance.lagrangian;
  require(field.nu == f.nu, "evaluate_functional: field/Lagrangian arity mismatch");
  require(instance.candidate.domain.dim() == f.n,
          "evaluate_functional: domain/Lagrangian arity mismatch");
  double total = 0.0;
  for (const QuadratureNode& node : quadrature_nodes(instance.candidate.domain, spec)) {
    const Vector x = field.value(node.t);
    const SlopeMatrix z = field.slope_at(node.t);
    const double v = f.value(node.t, x, z);
    if (!std::isfinite(v)) {
      std::ostringstream oss;
      oss << "evaluate_functional: non-finite integrand at t = [" << node.t.transpose() << "]";
      throw NumericalError(oss.str());
    }
    total += node.weight * v;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Problem definition files

namespace {

using nlohmann::json;

Domain domain_from_json(const json& j) {
  require(j.is_object() && j.contains("kind"), "problem file: domain needs a 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "box") {
    require(j.contains("lower") && j.contains("upper"), "problem file: box needs lower/upper");
    const auto lo_v = j.at("lower").get<std::vector<double>>();
    const auto hi_v = j.at("upper").get<std::vector<double>>();
    std::vector<int> res;
    if (j.contains("resolution")) {
      if (j.at("resolution").is_array())
        res = j.at("resolution").get<std::vector<int>>();
      else
        res.assign(lo_v.size(), j.at("resolution").get<int>());
    } else {
      res.assign(lo_v.size(), 32);
    }
    Vector lo = Eigen::Map<const Vector>(lo_v.data(), lo_v.size());
    Vector hi = Eigen::Map<const Vector>(hi_v.data(), hi_v.size());
    return Domain::box(lo, hi, res);
  }
  if (kind == "disc") {
    require(j.contains("center") && j.contains("radius"), "problem file: disc needs center/radius");
    const auto c_v = j.at("center").get<std::vector<double>>();
    require(c_v.size() == 2, "problem file: disc center must have 2 components");
    Vector c = Eigen::Map<const Vector>(c_v.data(), c_v.size());
    const int res = j.value("resolution", 32);
    return Domain::disc(c, j.at("radius").get<double>(), res);
  }
  throw ConfigError("problem file: unknown domain kind '" + kind + "'");
}

}  // namespace

ProblemInstance load_problem_text(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("problem file: invalid JSON: ") + e.what());
  }
  for (const char* key : {"n", "nu", "f", "candidate", "domain"})
    require(j.contains(key), std::string("problem file: missing field '") + key + "'");

  const int n = j.at("n").get<int>();
  const int nu = j.at("nu").get<int>();
  require(n >= 1 && nu >= 1, "problem file: arity must satisfy n >= 1, nu >= 1");

  std::map<std::string, double> params;
  if (j.contains("params"))
    for (const auto& [key, value] : j.at("params").items())
      params[key] = value.get<double>();

  const Domain domain = domain_from_json(j.at("domain"));
  require(domain.dim() == n, "problem file: domain dimension does not match n");

  const expr::Expr f_expr = expr::parse(j.at("f").get<std::string>(), n, nu, params);

  const auto cand_src = j.at("candidate").get<std::vector<std::string>>();
  require(static_cast<int>(cand_src.size()) == nu,
          "problem file: candidate must list nu component expressions");
  // Candidate components depend on t only; arity (n, 0) rejects x/z names.
  std::vector<expr::Expr> components;
  for (const std::string& src : cand_src) components.push_back(expr::parse(src, n, 0, params));

  Lagrangian f;
  f.n = n;
  f.nu = nu;
  f.value = [f_expr](const Vector& t, const Vector& x, const SlopeMatrix& z) {
    return f_expr.eval(t, x, z);
  };

  CandidateField candidate;
  candidate.nu = nu;
  candidate.domain = domain;
  candidate.value = [components, n](const Vector& t) -> Vector {
    const Vector no_x(0);
    const SlopeMatrix no_z(0, n);
    Vector out(components.size());
    for (std::size_t a = 0; a < components.size(); ++a)
      out(a) = components[a].eval(t, no_x, no_z);
    return out;
  };

  ProblemInstance inst;
  inst.name = j.value("name", std::string("file"));
  inst.params = params;
  inst.lagrangian = std::move(f);
  inst.candidate = std::move(candidate);
  return inst;
}

ProblemInstance load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("problem file: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_problem_text(buffer.str());
}

}  // namespace varcheck
