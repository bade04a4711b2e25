#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "varcheck/types.hpp"

namespace varcheck {

/// Integration/check region in R^n: an axis-aligned box, or a disc (n = 2).
/// Nonempty interior and per-axis resolution >= 2 are enforced on construction.
struct Domain {
  enum class Kind { box, disc };

  Kind kind = Kind::box;
  Vector lower, upper;          // box bounds
  Vector center;                // disc center
  double radius = 0.0;          // disc radius
  std::vector<int> resolution;  // default grid resolution per axis

  static Domain box(Vector lower, Vector upper, std::vector<int> resolution);
  static Domain disc(Vector center, double radius, int resolution);

  int dim() const;
  Vector centroid() const;

  /// Closed-domain membership; margin > 0 shrinks the domain by that distance.
  bool contains(const Vector& t, double margin = 0.0) const;

  /// Uniform grid of strictly interior points, per_axis points per axis
  /// (boxes: tensor grid; discs: polar grid).  Deterministic ordering.
  std::vector<Vector> interior_grid(int per_axis) const;
};

struct QuadratureSpec {
  enum class Rule { midpoint, gauss };
  Rule rule = Rule::gauss;
  int resolution = 32;  // points per axis (radial count for discs)
};

struct QuadratureNode {
  Vector t;
  double weight;
};

/// Tensor-product nodes for boxes; polar tensor-product (radial rule x
/// uniform angles) for discs.  Weights are strictly positive and sum to the
/// domain volume.
std::vector<QuadratureNode> quadrature_nodes(const Domain& domain,
                                             const QuadratureSpec& spec);

/// Gauss-Legendre nodes/weights on [-1, 1], computed by Newton iteration.
void gauss_legendre(int count, std::vector<double>& nodes,
                    std::vector<double>& weights);

/// Integrand f(t, x, z) with arity (n, nu) plus optional analytic first and
/// second derivative oracles.  Absent oracles are null; callers fall back to
/// central finite differences (see calculus.hpp).  When an oracle is present
/// it must agree with finite differences (self_check enforces this).
struct Lagrangian {
  int n = 0;
  int nu = 0;
  std::function<double(const Vector&, const Vector&, const SlopeMatrix&)> value;
  std::function<Vector(const Vector&, const Vector&, const SlopeMatrix&)> grad_x;
  std::function<SlopeMatrix(const Vector&, const Vector&, const SlopeMatrix&)> grad_z;
  // Flattened (nu*n) x (nu*n) second derivative in z, flat_index ordering.
  std::function<Eigen::MatrixXd(const Vector&, const Vector&, const SlopeMatrix&)> hess_zz;
};

struct OracleCheck {
  bool ok = true;
  double max_rel_error = 0.0;
  std::string detail;
};

/// Compares the analytic oracles of `lagrangian` against central finite
/// differences at `probes` random points (components drawn in [-2, 2]).
OracleCheck self_check(const Lagrangian& lagrangian, unsigned seed, int probes,
                       double tol = 1e-5);

/// Candidate field x_hat defined on `domain`; `slope` is the analytic
/// gradient oracle (may be null, slope_at falls back to central differences).
struct CandidateField {
  int nu = 0;
  Domain domain;
  std::function<Vector(const Vector&)> value;
  std::function<SlopeMatrix(const Vector&)> slope;

  SlopeMatrix slope_at(const Vector& t) const;
};

/// Compares the candidate's analytic slope against finite differences at
/// `probes` random interior points.
OracleCheck self_check(const CandidateField& field, unsigned seed, int probes,
                       double tol = 1e-6);

struct ProblemInstance {
  std::string name;
  std::map<std::string, double> params;
  Lagrangian lagrangian;
  CandidateField candidate;

  /// Boundary trace of the candidate (the fixed boundary condition).
  Vector boundary_value(const Vector& t) const { return candidate.value(t); }
};

/// Built-in problems: "dirichlet", "elasticity" (requires a, b, c; optional
/// m11, m12, m21, m22 candidate matrix), "cubic".  All accept an optional
/// "resolution" parameter (>= 2).  Unknown names or parameters are
/// ConfigErrors.  Pure: equal arguments yield pointwise-identical instances.
ProblemInstance catalog_get(const std::string& name,
                            const std::map<std::string, double>& params = {});

std::vector<std::string> catalog_names();

/// Integral of the instance's Lagrangian over its domain along `field`.
/// Throws NumericalError (with node coordinates) on a non-finite integrand.
double evaluate_functional(const ProblemInstance& instance,
                           const CandidateField& field,
                           const QuadratureSpec& spec);

/// Loads a problem definition from a JSON file; format documented in
/// docs/problem-file.md.
ProblemInstance load_problem(const std::string& path);
ProblemInstance load_problem_text(const std::string& json_text);

}  // namespace varcheck
