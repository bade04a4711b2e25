// Triangular needle variations for two-dimensional base domains.
//
// A needle is a compactly supported piecewise-linear perturbation of the
// candidate field, concentrated near a base point tau.  Its support is the
// triangle A B C with
//
//   A = tau + sqrt(sigma) eta_perp,   B = tau - sqrt(sigma) eta_perp,
//   O = tau + (sqrt7/3) sigma eta,    C = O + sigma^{1/4} eta,
//
// triangulated into the faces (A B O), (A C O), (B C O).  The perturbation
// vanishes on the boundary, peaks at delta x(O) = amplitude * sigma * xi, and
// on the main face has the sigma-independent rank-one slope
// amplitude * (3/sqrt7) * xi eta^T.  As sigma -> 0 the functional increment
// satisfies
//
//   Delta F = (sqrt7/3) sigma^{3/2} E(h*) + O(sigma^{7/4}),
//
// where E is the Weierstrass excess at tau and h* the main-face slope, so the
// sweep exposes the excess sign through finitely many field evaluations.
#pragma once

#include <string>
#include <vector>

#include "varcheck/problems.hpp"
#include "varcheck/types.hpp"

namespace varcheck::needle {

struct Triangle {
  Vector a, b, c;  // 2-vectors
  double area() const;  // positive
  // Barycentric coordinates of t, ordered (a, b, c).
  Vector barycentric(const Vector& t) const;
  bool contains(const Vector& t, double slack = 1e-12) const;
};

// One face of the needle: the apex O is always the triangle's vertex c.
struct Face {
  Triangle tri;
  Vector grad2;       // 2-covector g of the scalar profile (value = profile * xi)
  SlopeMatrix slope;  // xi * grad2^T, nu x 2
};

struct Needle {
  Vector tau, o, a_pt, b_pt, c_pt;  // 2-vectors
  Vector xi;                        // fiber direction, size nu
  Vector eta, eta_perp;             // unit 2-vectors
  double sigma = 0.0, amplitude = 0.0;
  std::vector<Face> faces;          // main (A B O), minor (A C O), minor (B C O)

  // Slant height |O1 E| = sigma * sqrt(amplitude^2 |xi|^2 + 7/9): distance
  // from the base point to the lifted apex.
  double slant_height() const;
  // Needle measure v = slant_height * sqrt(sigma).
  double slant_measure() const;
  double main_area() const;       // area of (A B O) = (sqrt7/3) sigma^{3/2}
  double minor_area_sum() const;  // sigma^{3/4}
  SlopeMatrix main_slope() const { return faces[0].slope; }

  // Perturbation value / slope at t; exactly zero outside the support.
  Vector delta(const Vector& t) const;
  SlopeMatrix slope(const Vector& t) const;
};

// Construct the needle at tau; throws ConfigError if the support does not fit
// inside the (convex) domain or the inputs are degenerate.
Needle build_needle(const Domain& domain, const Vector& tau, const Vector& xi,
                    const Vector& eta, double sigma, double amplitude);

struct TriangleQuadratureSpec {
  int refinement = 0;  // each face split into 4^refinement congruent parts
};

// Functional increment F[x + delta] - F[x], integrated with a degree-5
// seven-point rule per (sub)triangle.  Exact up to roundoff whenever the
// integrand is polynomial of degree <= 5 per face.
double delta_functional(const ProblemInstance& instance, const Needle& needle,
                        const TriangleQuadratureSpec& spec = {});

struct SweepRow {
  double sigma = 0.0;
  double delta_f = 0.0;
  double ratio = 0.0;  // |delta_f| / sigma^{3/2}
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double main_excess = 0.0;            // E(h*) at tau
  double exponent = 0.0;               // fitted p in |Delta F| ~ C sigma^p
  double coefficient = 0.0;            // fitted C
  double predicted_coefficient = 0.0;  // (4/3) |E(h*)|  (slant-measure normalization)
  double projected_coefficient = 0.0;  // (sqrt7/3) |E(h*)|  (main-face area)
  bool sign_match = false;             // sign(Delta F at smallest sigma) == sign(E(h*))
  std::string assessment;  // "decrease_confirmed" | "increase_confirmed" | "inconclusive"
};

// Build needles at a ladder of sigmas and fit the asymptotic law.
SweepResult asymptotic_sweep(const ProblemInstance& instance, const Vector& tau,
                             const Vector& xi, const Vector& eta, double amplitude,
                             const std::vector<double>& sigmas = {1e-2, 3e-3, 1e-3, 3e-4},
                             const TriangleQuadratureSpec& spec = {});

}  // namespace varcheck::needle
