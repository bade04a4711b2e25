#include "varcheck/needle.hpp"

#include <cmath>

#include "varcheck/calculus.hpp"

namespace varcheck::needle {

namespace {

const double kSqrt7 = std::sqrt(7.0);

void require(bool cond, const std::string& message) {
  if (!cond) throw ConfigError(message);
}

double cross2(const Vector& u, const Vector& v) { return u(0) * v(1) - u(1) * v(0); }

// Gradient of the affine function with values (0, 0, apex_scalar) on tri.
Vector affine_gradient(const Triangle& tri, double apex_scalar) {
  Eigen::Matrix2d m;
  m.row(0) = (tri.b - tri.a).transpose();
  m.row(1) = (tri.c - tri.a).transpose();
  Eigen::Vector2d rhs(0.0, apex_scalar);
  return m.partialPivLu().solve(rhs);
}

// Degree-5 seven-point rule on the reference triangle, weights summing to 1.
struct RulePoint {
  double l0, l1, l2, w;
};

const std::vector<RulePoint>& rule7() {
  static const std::vector<RulePoint> pts = [] {
    const double s15 = std::sqrt(15.0);
    const double a1 = (9.0 + 2.0 * s15) / 21.0, b1 = (6.0 - s15) / 21.0;
    const double w1 = (155.0 - s15) / 1200.0;
    const double a2 = (9.0 - 2.0 * s15) / 21.0, b2 = (6.0 + s15) / 21.0;
    const double w2 = (155.0 + s15) / 1200.0;
    std::vector<RulePoint> p;
    p.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 9.0 / 40.0});
    p.push_back({a1, b1, b1, w1});
    p.push_back({b1, a1, b1, w1});
    p.push_back({b1, b1, a1, w1});
    p.push_back({a2, b2, b2, w2});
    p.push_back({b2, a2, b2, w2});
    p.push_back({b2, b2, a2, w2});
    return p;
  }();
  return pts;
}

template <typename Visit>
void subdivided(const Triangle& tri, int levels, Visit&& visit) {
  if (levels == 0) {
    visit(tri);
    return;
  }
  const Vector ab = 0.5 * (tri.a + tri.b), bc = 0.5 * (tri.b + tri.c),
               ca = 0.5 * (tri.c + tri.a);
  subdivided({tri.a, ab, ca}, levels - 1, visit);
  subdivided({ab, tri.b, bc}, levels - 1, visit);
  subdivided({ca, bc, tri.c}, levels - 1, visit);
  subdivided({ab, bc, ca}, levels - 1, visit);
}

}  // namespace

double Triangle::area() const { return 0.5 * std::fabs(cross2(b - a, c - a)); }

Vector Triangle::barycentric(const Vector& t) const {
  const double d = cross2(b - a, c - a);
  const double l1 = cross2(t - a, c - a) / d;
  const double l2 = cross2(b - a, t - a) / d;
  Vector l(3);
  l << 1.0 - l1 - l2, l1, l2;
  return l;
}

bool Triangle::contains(const Vector& t, double slack) const {
  const Vector l = barycentric(t);
  return l(0) >= -slack && l(1) >= -slack && l(2) >= -slack;
}

double Needle::slant_height() const {
  const double rise = amplitude * xi.norm();
  return sigma * std::sqrt(rise * rise + 7.0 / 9.0);
}

double Needle::slant_measure() const { return slant_height() * std::sqrt(sigma); }

double Needle::main_area() const { return faces[0].tri.area(); }

double Needle::minor_area_sum() const { return faces[1].tri.area() + faces[2].tri.area(); }

Vector Needle::delta(const Vector& t) const {
  for (const Face& face : faces)
    if (face.tri.contains(t)) {
      const Vector l = face.tri.barycentric(t);
      return (amplitude * sigma * l(2)) * xi;  // apex is vertex c
    }
  return Vector::Zero(xi.size());
}

SlopeMatrix Needle::slope(const Vector& t) const {
  for (const Face& face : faces)
    if (face.tri.contains(t)) return face.slope;
  return SlopeMatrix::Zero(xi.size(), 2);
}

Needle build_needle(const Domain& domain, const Vector& tau, const Vector& xi,
                    const Vector& eta, double sigma, double amplitude) {
  require(domain.dim() == 2, "needle: base domain must be two-dimensional");
  require(tau.size() == 2 && eta.size() == 2, "needle: tau and eta must be 2-vectors");
  require(xi.size() >= 1, "needle: xi must be nonempty");
  require(sigma > 0.0, "needle: sigma must be positive");
  require(eta.norm() > 0.0, "needle: eta must be nonzero");

  Needle nd;
  nd.tau = tau;
  nd.xi = xi;
  nd.eta = eta / eta.norm();
  nd.eta_perp = Vector(2);
  nd.eta_perp << -nd.eta(1), nd.eta(0);
  nd.sigma = sigma;
  nd.amplitude = amplitude;

  const double root = std::sqrt(sigma);
  nd.a_pt = tau + root * nd.eta_perp;
  nd.b_pt = tau - root * nd.eta_perp;
  nd.o = tau + (kSqrt7 / 3.0) * sigma * nd.eta;
  nd.c_pt = nd.o + std::pow(sigma, 0.25) * nd.eta;

  for (const Vector* v : {&nd.a_pt, &nd.b_pt, &nd.c_pt, &nd.o})
    require(domain.contains(*v), "needle: support does not fit inside the domain");

  const double apex = amplitude * sigma;
  for (const auto& [p, q] : std::initializer_list<std::pair<const Vector*, const Vector*>>{
           {&nd.a_pt, &nd.b_pt}, {&nd.a_pt, &nd.c_pt}, {&nd.b_pt, &nd.c_pt}}) {
    Face face;
    face.tri = Triangle{*p, *q, nd.o};
    require(face.tri.area() > 0.0, "needle: degenerate face");
    face.grad2 = affine_gradient(face.tri, apex);
    face.slope = xi * face.grad2.transpose();
    nd.faces.push_back(std::move(face));
  }
  return nd;
}

double delta_functional(const ProblemInstance& instance, const Needle& needle,
                        const TriangleQuadratureSpec& spec) {
  const Lagrangian& f = instance.lagrangian;
  require(f.n == 2, "delta_functional: base dimension must be 2");
  require(needle.xi.size() == f.nu, "delta_functional: needle xi / Lagrangian arity mismatch");
  require(spec.refinement >= 0, "delta_functional: refinement must be >= 0");
  const CandidateField& cand = instance.candidate;

  double total = 0.0;
  for (const Face& face : needle.faces) {
    const double apex = needle.amplitude * needle.sigma;
    subdivided(face.tri, spec.refinement, [&](const Triangle& sub) {
      const double area = sub.area();
      for (const RulePoint& rp : rule7()) {
        const Vector t = rp.l0 * sub.a + rp.l1 * sub.b + rp.l2 * sub.c;
        // Evaluate the perturbation through this face's affine profile so
        // shared-edge points never depend on point-location order.
        const Vector l = face.tri.barycentric(t);
        const Vector dx = (apex * l(2)) * needle.xi;
        const Vector x = cand.value(t);
        const SlopeMatrix z = cand.slope_at(t);
        const double perturbed = f.value(t, x + dx, z + face.slope);
        const double baseline = f.value(t, x, z);
        if (!std::isfinite(perturbed) || !std::isfinite(baseline))
          throw NumericalError("delta_functional: non-finite integrand");
        total += rp.w * area * (perturbed - baseline);
      }
    });
  }
  return total;
}

SweepResult asymptotic_sweep(const ProblemInstance& instance, const Vector& tau,
                             const Vector& xi, const Vector& eta, double amplitude,
                             const std::vector<double>& sigmas,
                             const TriangleQuadratureSpec& spec) {
  require(sigmas.size() >= 4, "asymptotic_sweep: need at least four sigmas");
  for (std::size_t k = 1; k < sigmas.size(); ++k)
    require(sigmas[k] < sigmas[k - 1], "asymptotic_sweep: sigmas must be strictly decreasing");
  SweepResult result;

  // Excess of the main-face slope at the base point (sigma-independent).
  {
    const Needle probe = build_needle(instance.candidate.domain, tau, xi, eta,
                                      sigmas.front(), amplitude);
    const Vector x = instance.candidate.value(tau);
    const SlopeMatrix z = instance.candidate.slope_at(tau);
    result.main_excess =
        calculus::weierstrass_excess(instance.lagrangian, tau, x, z, probe.main_slope());
  }
  result.predicted_coefficient = (4.0 / 3.0) * std::fabs(result.main_excess);
  result.projected_coefficient = (kSqrt7 / 3.0) * std::fabs(result.main_excess);

  for (double sigma : sigmas) {
    const Needle nd = build_needle(instance.candidate.domain, tau, xi, eta, sigma, amplitude);
    SweepRow row;
    row.sigma = sigma;
    row.delta_f = delta_functional(instance, nd, spec);
    row.ratio = std::fabs(row.delta_f) / std::pow(sigma, 1.5);
    result.rows.push_back(row);
  }

  bool all_neg = true, all_pos = true;
  for (const SweepRow& row : result.rows) {
    all_neg = all_neg && row.delta_f < 0.0;
    all_pos = all_pos && row.delta_f > 0.0;
  }
  const bool definite = all_neg || all_pos;

  const SweepRow& smallest = result.rows.back();
  if (definite) {
    double mx = 0.0, my = 0.0;
    for (const SweepRow& row : result.rows) {
      mx += std::log(row.sigma);
      my += std::log(std::fabs(row.delta_f));
    }
    mx /= result.rows.size();
    my /= result.rows.size();
    double sxy = 0.0, sxx = 0.0;
    for (const SweepRow& row : result.rows) {
      const double dx = std::log(row.sigma) - mx;
      sxy += dx * (std::log(std::fabs(row.delta_f)) - my);
      sxx += dx * dx;
    }
    result.exponent = sxy / sxx;
    // Coefficient read off at the smallest sigma with the fitted exponent.
    result.coefficient =
        std::fabs(smallest.delta_f) / std::pow(smallest.sigma, result.exponent);
  }

  result.sign_match =
      result.main_excess != 0.0 && smallest.delta_f != 0.0 &&
      ((smallest.delta_f < 0.0) == (result.main_excess < 0.0));
  result.assessment = !definite ? "inconclusive"
                      : all_neg ? "decrease_confirmed"
                                : "increase_confirmed";
  return result;
}

}  // namespace varcheck::needle
