// Pointwise rank-one maximum-principle verification.
//
// At each base point t of the candidate field, the Weierstrass excess
//
//   E(h) = f(t, x(t), zhat + h) - f(t, x(t), zhat) - <f_z(t, x(t), zhat), h>
//
// is minimized over rank-one perturbations h = r xi eta^T with unit xi, eta
// and 0 < r <= r_max.  Because the Pontryagin function H = -f + <q, z>
// (evaluated with the candidate's own momenta q) satisfies
// H(zhat + h) - H(zhat) = -E(h) exactly, a negative excess is the same thing
// as a maximum-principle violation, and the minimizing h is the witness.
#pragma once

#include <string>
#include <vector>

#include "varcheck/problems.hpp"
#include "varcheck/rank_one.hpp"
#include "varcheck/types.hpp"

namespace varcheck::mp {

enum class Verdict { SATISFIED, VIOLATED, INCONCLUSIVE };

std::string to_string(Verdict verdict);

struct MpOptions {
  double r_max = 32.0;  // amplitude bound of the search (not a claim about r > r_max)
  int r_steps = 16;     // amplitude ladder r_max * 2^{-k}, k = 0 .. r_steps-1
  int starts = 16;      // direction starts per amplitude (axis pairs first)
  double tol = 1e-7;    // verdict threshold on the excess
  unsigned seed = 2024;
  int cd_max_iters = 80;  // projected-gradient steps per start
};

struct PointRecord {
  Vector t;
  double min_excess = 0.0;
  rank_one::RankOneDirection witness;  // amplitude holds the minimizing r
  double lh_margin = 0.0;              // small-amplitude (Legendre-Hadamard) screen
  bool unbounded_suspected = false;    // excess still decreasing at r_max
  double h_bridge_residual = 0.0;      // |(H(zhat+h) - H(zhat)) + E(h)| at the witness
};

struct MpReport {
  Verdict verdict = Verdict::INCONCLUSIVE;
  std::string problem;
  std::vector<PointRecord> points;
  double global_min_excess = 0.0;
  int worst_index = -1;  // index into points of the global minimizer
  MpOptions options;
};

// Default sample set: the 5-per-axis interior grid of the domain.
std::vector<Vector> default_check_points(const Domain& domain);

// Run the check at the given base points (default_check_points if empty).
// Deterministic for fixed options; enlarging r_steps or starts only extends
// the search, so reported minima are nonincreasing under refinement.
MpReport check_rank_one_mp(const ProblemInstance& instance,
                           const std::vector<Vector>& points = {},
                           const MpOptions& opts = {});

// One row of an excess landscape over direction angles at fixed amplitude.
struct LandscapeRow {
  Vector xi, eta;
  double r = 0.0;
  double excess = 0.0;
  double h_bridge_residual = 0.0;
};

// Tabulate E(r xi eta^T) over the uniform angle lattice (resolution steps
// per circle, so resolution^2 rows).  Requires nu = n = 2.
std::vector<LandscapeRow> excess_landscape(const ProblemInstance& instance, const Vector& t,
                                           double r, int resolution);

}  // namespace varcheck::mp
