// Euler-Lagrange residuals on grids, and the conjugate-system conservation
// identity.
//
// For a candidate field x(t) the pointwise residual is
//
//   R_a(t) = sum_i d/dt_i [ f_{z_ai}(t, x(t), grad x(t)) ] - f_{x_a}(t, x(t), grad x(t)),
//
// computed by nested central differences; an extremal drives R to zero up to
// discretization error.  The conjugate identity pairs a solution dx of the
// variational system  d(dx)_a/dt_i = Phi_{ai,b} dx_b  with a solution q of the
// adjoint system  sum_i dq_ai/dt_i + sum_{bj} q_bj Phi_{bj,a} = f_{x_a}: the
// current  j_i = sum_a q_ai dx_a  is then divergence-free up to the source,
// and the divergence expands exactly into feed residuals, which is what the
// identity check verifies.
#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "varcheck/problems.hpp"
#include "varcheck/types.hpp"

namespace varcheck::euler {

// Values on a uniform tensor lattice (boundary nodes included).  Each node
// carries a rows x cols matrix; an optional mask marks nodes that hold
// meaningful values (used when the lattice overhangs a non-box domain).
struct GridField {
  Vector lower, upper;
  std::vector<int> shape;               // nodes per axis, >= 3 each
  int rows = 1, cols = 1;
  std::vector<Eigen::MatrixXd> values;  // row-major over the lattice
  std::vector<std::uint8_t> mask;       // empty means every node is valid

  int dim() const { return static_cast<int>(shape.size()); }
  double spacing(int axis) const {
    return (upper(axis) - lower(axis)) / (shape[axis] - 1);
  }
  int node_count() const;
  int flat(const std::vector<int>& idx) const;
  Vector coord(const std::vector<int>& idx) const;
  bool valid(int flat_idx) const { return mask.empty() || mask[flat_idx] != 0; }
  bool interior(const std::vector<int>& idx) const;

  // Second-order derivative along one axis: central in the interior,
  // 3-point one-sided at the lattice edges.
  Eigen::MatrixXd derivative(const std::vector<int>& idx, int axis) const;

  static GridField sample(const Vector& lower, const Vector& upper,
                          const std::vector<int>& shape, int rows, int cols,
                          const std::function<Eigen::MatrixXd(const Vector&)>& fn);
};

// Visit every lattice multi-index in row-major order.
void for_each_node(const std::vector<int>& shape,
                   const std::function<void(const std::vector<int>&, int)>& visit);

// Coupling data of the variational/adjoint pair.  `value` is the slope map
// phi(t, x) itself; `coupling` is its x-derivative along the base trajectory,
// as a (nu*n) x nu matrix in flat_index row ordering.  If only `value` is
// given, the coupling is differentiated numerically about x = 0 (exact for
// the linear-in-x maps the worked cases use).
struct SlopeField {
  int nu = 0, n = 0;
  std::function<SlopeMatrix(const Vector& t, const Vector& x)> value;
  std::function<Eigen::MatrixXd(const Vector& t)> coupling;

  Eigen::MatrixXd coupling_at(const Vector& t) const;
};

struct EulerReport {
  double max_abs = 0.0;     // max residual norm over evaluated nodes
  GridField residual;       // nu x 1 per node; mask marks evaluated nodes
  int resolution = 0;
};

// Pointwise Euler-Lagrange residual of the instance's candidate on a lattice
// with `resolution` nodes per axis (>= 8).  Box domains evaluate all interior
// nodes; disc domains evaluate lattice nodes whose difference stencil stays
// inside the disc.
EulerReport euler_residual(const ProblemInstance& instance, int resolution);

struct ConjugateReport {
  double identity_max = 0.0;      // corrected identity; discretization-level always
  double raw_identity_max = 0.0;  // div[q dx] - f_x . dx; small only for true solutions
  double r_q_max = 0.0;           // adjoint feed residual, max norm
  double r_v_max = 0.0;           // variational feed residual, max norm
  GridField identity;             // 1 x 1 per node (corrected residual)
  GridField raw_identity;         // 1 x 1 per node
  GridField r_q;                  // nu x 1 per node
  GridField r_v;                  // nu x n per node
};

// Optional base trajectory sampler for the f_x term of the raw identity:
// t -> (x(t), grad x(t)).  When absent, f_x is treated as zero (all worked
// cases are x-independent; the corrected identity never needs it because the
// f_x contributions cancel algebraically).
using BaseSampler = std::function<std::pair<Vector, SlopeMatrix>(const Vector&)>;

// Evaluate the conservation identity on the common lattice of
// q_field (nu x n per node) and dx_field (nu x 1 per node).  `resolution`
// must equal the per-axis node count of both fields.  Max norms are taken
// over interior nodes.
ConjugateReport conjugate_identity_residual(const Lagrangian& lagrangian,
                                            const SlopeField& phi, const GridField& q_field,
                                            const GridField& dx_field, int resolution,
                                            const BaseSampler& base = nullptr);

}  // namespace varcheck::euler
