#include "varcheck/mp_check.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "varcheck/calculus.hpp"

namespace varcheck::mp {

namespace {

constexpr double kPi = std::numbers::pi;

double uniform01(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

Vector random_unit(std::mt19937_64& rng, int dim) {
  Vector v(dim);
  for (;;) {
    for (int i = 0; i < dim; ++i) v(i) = 2.0 * uniform01(rng) - 1.0;
    const double norm = v.norm();
    if (norm > 1e-3) return v / norm;
  }
}

// Frozen per-point context so the inner search reuses the base evaluations.
struct PointContext {
  const Lagrangian* f;
  Vector t, x;
  SlopeMatrix z_hat;
  Momenta q_hat;
  double f_hat;

  double excess(const SlopeMatrix& h) const {
    return f->value(t, x, z_hat + h) - f_hat - q_hat.cwiseProduct(h).sum();
  }
  SlopeMatrix excess_grad(const SlopeMatrix& h) const {
    return calculus::grad_z(*f, t, x, z_hat + h) - q_hat;
  }
};

PointContext make_context(const ProblemInstance& instance, const Vector& t) {
  PointContext ctx;
  ctx.f = &instance.lagrangian;
  ctx.t = t;
  ctx.x = instance.candidate.value(t);
  ctx.z_hat = instance.candidate.slope_at(t);
  ctx.q_hat = calculus::weyl_momenta(instance.lagrangian, t, ctx.x, ctx.z_hat);
  ctx.f_hat = instance.lagrangian.value(t, ctx.x, ctx.z_hat);
  return ctx;
}

struct DirectionResult {
  Vector xi, eta;
  double excess = 0.0;
};

// Minimize E(r xi eta^T) over the product of unit spheres at fixed r by
// projected gradient descent with backtracking.  The gradient splits as
// dE/dxi = r G eta, dE/deta = r G^T xi with G = f_z(zhat + h) - f_z(zhat).
DirectionResult descend(const PointContext& ctx, Vector xi, Vector eta, double r,
                        int max_iters) {
  xi.normalize();
  eta.normalize();
  double value = ctx.excess(r * xi * eta.transpose());
  for (int it = 0; it < max_iters; ++it) {
    const SlopeMatrix g = ctx.excess_grad(r * xi * eta.transpose());
    Vector d_xi = r * (g * eta);
    Vector d_eta = r * (g.transpose() * xi);
    d_xi -= d_xi.dot(xi) * xi;      // tangent projections
    d_eta -= d_eta.dot(eta) * eta;
    const double slope = d_xi.squaredNorm() + d_eta.squaredNorm();
    if (slope <= 1e-24 * std::max(1.0, value * value)) break;

    double step = 0.5;
    bool moved = false;
    for (int half = 0; half < 30; ++half) {
      Vector xi_try = (xi - step * d_xi).normalized();
      Vector eta_try = (eta - step * d_eta).normalized();
      const double v_try = ctx.excess(r * xi_try * eta_try.transpose());
      if (v_try < value - 1e-16 * std::fabs(value)) {
        xi = std::move(xi_try);
        eta = std::move(eta_try);
        value = v_try;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return {std::move(xi), std::move(eta), value};
}

// Golden-section refinement of r along a fixed direction, on
// [r/2, 2r] intersected with (0, r_max].  Endpoints are compared exactly so
// an amplitude that already sits at the search bound survives unperturbed.
void polish_amplitude(const PointContext& ctx, const Vector& xi, const Vector& eta,
                      double r_max, double& r, double& value) {
  const SlopeMatrix dir = xi * eta.transpose();
  auto phi = [&](double rr) { return ctx.excess(rr * dir); };
  double lo = 0.5 * r, hi = std::min(2.0 * r, r_max);
  if (!(lo < hi)) return;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = phi(c), fd = phi(d);
  for (int it = 0; it < 60 && (b - a) > 1e-14 * std::max(1.0, hi); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = phi(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = phi(d);
    }
  }
  // Pick the best of the interior estimate and the exact endpoints.
  struct Cand {
    double r, v;
  };
  const double mid = 0.5 * (a + b);
  Cand cands[] = {{lo, phi(lo)}, {hi, phi(hi)}, {mid, phi(mid)}};
  for (const Cand& cand : cands)
    if (cand.v < value) {
      value = cand.v;
      r = cand.r;
    }
}

std::vector<std::pair<Vector, Vector>> direction_starts(const PointContext& ctx,
                                                        const Vector& lh_xi,
                                                        const Vector& lh_eta,
                                                        const MpOptions& opts,
                                                        int point_index) {
  const int nu = ctx.z_hat.rows(), n = ctx.z_hat.cols();
  std::vector<std::pair<Vector, Vector>> fixed;
  if (lh_xi.size() == nu && lh_eta.size() == n) fixed.emplace_back(lh_xi, lh_eta);
  for (int a = 0; a < nu; ++a)
    for (int i = 0; i < n; ++i)
      for (int sign : {+1, -1}) {
        Vector xi = Vector::Zero(nu), eta = Vector::Zero(n);
        xi(a) = 1.0;
        eta(i) = sign;
        fixed.emplace_back(std::move(xi), std::move(eta));
      }

  std::vector<std::pair<Vector, Vector>> starts;
  for (int k = 0; k < opts.starts; ++k) {
    if (k < static_cast<int>(fixed.size())) {
      starts.push_back(fixed[k]);
    } else {
      // Keyed per (point, start): prefix-stable in both starts and r_steps.
      std::mt19937_64 rng(opts.seed ^ (0x9e3779b97f4a7c15ULL * (k + 1)) ^
                          (0xbf58476d1ce4e5b9ULL * (point_index + 1)));
      starts.emplace_back(random_unit(rng, nu), random_unit(rng, n));
    }
  }
  return starts;
}

}  // namespace

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::SATISFIED: return "SATISFIED";
    case Verdict::VIOLATED: return "VIOLATED";
    case Verdict::INCONCLUSIVE: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

std::vector<Vector> default_check_points(const Domain& domain) {
  return domain.interior_grid(5);
}

MpReport check_rank_one_mp(const ProblemInstance& instance, const std::vector<Vector>& points,
                           const MpOptions& opts) {
  if (opts.r_max <= 0.0) throw ConfigError("check_rank_one_mp: r_max must be positive");
  if (opts.r_steps < 1) throw ConfigError("check_rank_one_mp: r_steps must be >= 1");
  if (opts.starts < 1) throw ConfigError("check_rank_one_mp: starts must be >= 1");

  MpReport report;
  report.problem = instance.name;
  report.options = opts;
  const std::vector<Vector> sample =
      points.empty() ? default_check_points(instance.candidate.domain) : points;

  bool any_negative = false;
  bool all_clean = true;
  for (int p = 0; p < static_cast<int>(sample.size()); ++p) {
    const PointContext ctx = make_context(instance, sample[p]);
    const int nu = ctx.z_hat.rows(), n = ctx.z_hat.cols();

    // Small-amplitude screen: minimum of the quadratic excess coefficient.
    rank_one::LhOptions lh_opts;
    lh_opts.seed = opts.seed;
    const auto form = rank_one::BiquadraticForm::from_hessian(
        nu, n, calculus::hess_zz(instance.lagrangian, ctx.t, ctx.x, ctx.z_hat));
    const rank_one::LhResult lh = rank_one::lh_minimize(form, lh_opts);

    const auto starts = direction_starts(ctx, lh.xi, lh.eta, opts, p);

    PointRecord record;
    record.t = sample[p];
    record.lh_margin = lh.min_value;
    bool have = false;
    for (int k = 0; k < opts.r_steps; ++k) {
      const double r = opts.r_max * std::pow(2.0, -k);
      for (const auto& [xi0, eta0] : starts) {
        const DirectionResult res = descend(ctx, xi0, eta0, r, opts.cd_max_iters);
        if (!have || res.excess < record.min_excess) {
          record.min_excess = res.excess;
          record.witness.xi = res.xi;
          record.witness.eta = res.eta;
          record.witness.amplitude = r;
          have = true;
        }
      }
    }
    polish_amplitude(ctx, record.witness.xi, record.witness.eta, opts.r_max,
                     record.witness.amplitude, record.min_excess);

    // Independent recomputation at the witness (fresh momenta path).
    record.min_excess = calculus::weierstrass_excess(instance.lagrangian, ctx.t, ctx.x,
                                                     ctx.z_hat, record.witness.matrix());
    {
      const SlopeMatrix h = record.witness.matrix();
      const double h_hat =
          calculus::pontryagin_H(instance.lagrangian, ctx.q_hat, ctx.t, ctx.x, ctx.z_hat);
      const double h_pert = calculus::pontryagin_H(instance.lagrangian, ctx.q_hat, ctx.t,
                                                   ctx.x, ctx.z_hat + h);
      record.h_bridge_residual = std::fabs((h_pert - h_hat) + record.min_excess);
    }

    // Still descending at the amplitude bound?
    if (record.witness.amplitude >= opts.r_max * (1.0 - 1e-12)) {
      const SlopeMatrix dir = record.witness.xi * record.witness.eta.transpose();
      const double e0 = ctx.excess(opts.r_max * dir);
      const double e1 = ctx.excess(0.5 * opts.r_max * dir);
      const double e2 = ctx.excess(0.25 * opts.r_max * dir);
      record.unbounded_suspected = (e0 < e1) && (e1 < e2);
    }

    if (record.min_excess < -opts.tol) any_negative = true;
    if (record.min_excess < -opts.tol || record.lh_margin < -opts.tol) all_clean = false;

    if (report.worst_index < 0 || record.min_excess < report.global_min_excess) {
      report.global_min_excess = record.min_excess;
      report.worst_index = p;
    }
    report.points.push_back(std::move(record));
  }

  if (any_negative)
    report.verdict = Verdict::VIOLATED;
  else if (all_clean)
    report.verdict = Verdict::SATISFIED;
  else
    report.verdict = Verdict::INCONCLUSIVE;
  return report;
}

std::vector<LandscapeRow> excess_landscape(const ProblemInstance& instance, const Vector& t,
                                           double r, int resolution) {
  if (instance.lagrangian.nu != 2 || instance.lagrangian.n != 2)
    throw ConfigError("excess_landscape: supported for nu = n = 2 only");
  if (resolution < 1) throw ConfigError("excess_landscape: resolution must be >= 1");
  if (r <= 0.0) throw ConfigError("excess_landscape: amplitude must be positive");

  const PointContext ctx = make_context(instance, t);
  const double h_hat =
      calculus::pontryagin_H(instance.lagrangian, ctx.q_hat, ctx.t, ctx.x, ctx.z_hat);

  std::vector<LandscapeRow> rows;
  rows.reserve(static_cast<std::size_t>(resolution) * resolution);
  for (int i = 0; i < resolution; ++i) {
    const double a = 2.0 * kPi * i / resolution;
    Vector xi(2);
    xi << std::cos(a), std::sin(a);
    for (int j = 0; j < resolution; ++j) {
      const double b = 2.0 * kPi * j / resolution;
      Vector eta(2);
      eta << std::cos(b), std::sin(b);
      LandscapeRow row;
      row.xi = xi;
      row.eta = eta;
      row.r = r;
      const SlopeMatrix h = r * xi * eta.transpose();
      row.excess = ctx.excess(h);
      const double h_pert = calculus::pontryagin_H(instance.lagrangian, ctx.q_hat, ctx.t,
                                                   ctx.x, ctx.z_hat + h);
      row.h_bridge_residual = std::fabs((h_pert - h_hat) + row.excess);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace varcheck::mp
