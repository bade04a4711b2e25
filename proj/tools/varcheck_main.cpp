// varcheck: numerical verification of optimality conditions for
// multiple-integral variational problems.
//
// Exit codes: 0 = check passed / report completed; 1 = a violation was
// found (still a successful run, machine-readable verdict in the JSON);
// 2 = usage or configuration error; 3 = numerical failure.

#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include "varcheck/calculus.hpp"
#include "varcheck/expr.hpp"
#include "varcheck/mp_check.hpp"
#include "varcheck/needle.hpp"
#include "varcheck/euler.hpp"
#include "varcheck/problems.hpp"
#include "varcheck/rank_one.hpp"
#include "varcheck/report.hpp"

namespace {

using varcheck::ConfigError;
using varcheck::NumericalError;
using varcheck::SlopeMatrix;
using varcheck::Vector;
using varcheck::report::Csv;
using varcheck::report::JValue;

struct ProblemFlags {
  std::string name;
  std::string file;
  std::vector<std::string> params;  // key=value
  std::string f_expr;               // inline Lagrangian override
};

void add_problem_flags(CLI::App* cmd, ProblemFlags& flags) {
  auto* name = cmd->add_option("--problem", flags.name, "Catalog problem name");
  auto* file = cmd->add_option("--problem-file", flags.file,
                               "Path to a JSON problem definition");
  cmd->add_option("--param", flags.params, "Catalog parameter as key=value (repeatable)");
  cmd->add_option("--f-expr", flags.f_expr,
                  "Replace the Lagrangian with an inline expression "
                  "(keeps the problem's domain and candidate)");
  name->excludes(file);
  file->excludes(name);
}

std::map<std::string, double> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, double> params;
  for (const std::string& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("--param expects key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(item.substr(eq + 1), &used);
    } catch (const std::exception&) {
      throw ConfigError("--param " + key + ": value is not a number");
    }
    if (used != item.size() - eq - 1)
      throw ConfigError("--param " + key + ": value is not a number");
    if (params.count(key)) throw ConfigError("--param " + key + " given twice");
    params[key] = value;
  }
  return params;
}

varcheck::ProblemInstance resolve_problem(const ProblemFlags& flags) {
  varcheck::ProblemInstance instance;
  if (!flags.file.empty()) {
    if (!flags.params.empty())
      throw ConfigError("--param applies to catalog problems only");
    instance = varcheck::load_problem(flags.file);
  } else if (!flags.name.empty()) {
    instance = varcheck::catalog_get(flags.name, parse_params(flags.params));
  } else {
    throw ConfigError("one of --problem or --problem-file is required");
  }
  if (!flags.f_expr.empty()) {
    const int n = instance.lagrangian.n, nu = instance.lagrangian.nu;
    const auto parsed = varcheck::expr::parse(flags.f_expr, n, nu, instance.params);
    varcheck::Lagrangian f;
    f.n = n;
    f.nu = nu;
    f.value = [parsed](const Vector& t, const Vector& x, const SlopeMatrix& z) {
      return parsed.eval(t, x, z);
    };
    instance.lagrangian = std::move(f);  // derivatives fall back to differences
  }
  return instance;
}

Vector to_vector(const std::vector<double>& values) {
  Vector v(static_cast<int>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<int>(i)) = values[i];
  return v;
}

JValue params_json(const std::map<std::string, double>& params) {
  JValue obj = JValue::object();
  for (const auto& [key, value] : params) obj.set(key, value);
  return obj;
}

void emit(const JValue& json, const std::string& out_path) {
  const std::string text = json.dump();
  if (out_path.empty())
    std::cout << text;
  else
    varcheck::report::write_text_file(out_path, text);
}

// ---------------------------------------------------------------------------

int run_list_problems(const std::string& out_path) {
  JValue problems = JValue::array();
  {
    JValue p = JValue::object();
    p.set("name", "cubic");
    p.set("description",
          "f = z11^3 + z22^3 on the unit disc; identity candidate. The classic "
          "example of an extremal that satisfies the easy necessary conditions "
          "yet admits strong rank-one violations.");
    p.set("required_params", JValue::array());
    p.set("optional_params", JValue::array().push("resolution"));
    p.set("domain", "disc");
    problems.push(std::move(p));
  }
  {
    JValue p = JValue::object();
    p.set("name", "dirichlet");
    p.set("description", "f = 0.5*|z|^2 on the unit square; identity candidate. Convex "
                         "model case, every condition holds with margin.");
    p.set("required_params", JValue::array());
    p.set("optional_params", JValue::array().push("resolution"));
    p.set("domain", "box");
    problems.push(std::move(p));
  }
  {
    JValue p = JValue::object();
    p.set("name", "elasticity");
    p.set("description",
          "f = a(z11^2 + z22^2) + b(z12^2 + z21^2) + 2c det z on the unit square; "
          "linear candidate M t. Rank-one convex for suitable (a, b, c) while the "
          "full Hessian is indefinite.");
    p.set("required_params",
          JValue::array().push("a").push("b").push("c"));
    p.set("optional_params", JValue::array()
                                 .push("m11")
                                 .push("m12")
                                 .push("m21")
                                 .push("m22")
                                 .push("resolution"));
    p.set("domain", "box");
    problems.push(std::move(p));
  }
  JValue root = JValue::object();
  root.set("command", "list-problems");
  root.set("problems", std::move(problems));
  emit(root, out_path);
  return 0;
}

struct LhArgs {
  ProblemFlags problem;
  std::vector<double> point;
  int starts = 24;
  int max_iters = 200;
  double tol = 1e-12;
  unsigned seed = 2024;
  double classify_tol = 1e-8;
  int grid_resolution = 0;
  std::string out;
};

int run_check_lh(const LhArgs& args) {
  const auto instance = resolve_problem(args.problem);
  const Vector t = args.point.empty() ? instance.candidate.domain.centroid()
                                      : to_vector(args.point);
  if (t.size() != instance.lagrangian.n)
    throw ConfigError("--point must have n components");

  const Vector x = instance.candidate.value(t);
  const SlopeMatrix z = instance.candidate.slope_at(t);
  const auto hess = varcheck::calculus::hess_zz(instance.lagrangian, t, x, z);
  const auto form = varcheck::rank_one::BiquadraticForm::from_hessian(
      instance.lagrangian.nu, instance.lagrangian.n, hess);

  varcheck::rank_one::LhOptions opts;
  opts.starts = args.starts;
  opts.max_iters = args.max_iters;
  opts.tol = args.tol;
  opts.seed = args.seed;
  const auto result = varcheck::rank_one::lh_minimize(form, opts);
  const std::string classification =
      varcheck::rank_one::classify_margin(result.min_value, args.classify_tol);

  JValue root = JValue::object();
  root.set("command", "check-lh");
  root.set("problem", instance.name);
  root.set("params", params_json(instance.params));
  {
    JValue o = JValue::object();
    o.set("point", t);
    o.set("starts", args.starts);
    o.set("max_iters", args.max_iters);
    o.set("tol", args.tol);
    o.set("seed", static_cast<long long>(args.seed));
    o.set("classify_tol", args.classify_tol);
    o.set("grid_resolution", args.grid_resolution);
    root.set("options", std::move(o));
  }
  root.set("margin", result.min_value);
  {
    JValue m = JValue::object();
    m.set("xi", result.xi);
    m.set("eta", result.eta);
    m.set("iterations", result.iterations);
    m.set("converged", result.converged);
    root.set("minimizer", std::move(m));
  }
  {
    JValue eig = JValue::array();
    for (double v : form.eigenvalues()) eig.push(v);
    root.set("hessian_eigenvalues", std::move(eig));
  }
  root.set("classification", classification);
  root.set("van_hove_strict", classification == "strictly_positive");
  if (args.grid_resolution > 0) {
    const auto grid = varcheck::rank_one::grid_oracle(form, args.grid_resolution);
    root.set("grid_margin", grid.min_value);
  }
  emit(root, args.out);
  return classification == "indefinite" ? 1 : 0;
}

struct MpArgs {
  ProblemFlags problem;
  double r_max = 32.0;
  int r_steps = 16;
  int starts = 16;
  double tol = 1e-7;
  unsigned seed = 2024;
  int cd_max_iters = 80;
  int points_grid = 5;
  std::string out, csv;
};

int run_check_mp(const MpArgs& args) {
  const auto instance = resolve_problem(args.problem);
  varcheck::mp::MpOptions opts;
  opts.r_max = args.r_max;
  opts.r_steps = args.r_steps;
  opts.starts = args.starts;
  opts.tol = args.tol;
  opts.seed = args.seed;
  opts.cd_max_iters = args.cd_max_iters;
  if (args.points_grid < 1) throw ConfigError("--points-grid must be >= 1");

  const auto points = instance.candidate.domain.interior_grid(args.points_grid);
  const auto report = varcheck::mp::check_rank_one_mp(instance, points, opts);

  JValue root = JValue::object();
  root.set("command", "check-mp");
  root.set("problem", instance.name);
  root.set("params", params_json(instance.params));
  {
    JValue o = JValue::object();
    o.set("r_max", opts.r_max);
    o.set("r_steps", opts.r_steps);
    o.set("starts", opts.starts);
    o.set("tol", opts.tol);
    o.set("seed", static_cast<long long>(opts.seed));
    o.set("cd_max_iters", opts.cd_max_iters);
    o.set("points_grid", args.points_grid);
    root.set("options", std::move(o));
  }
  root.set("verdict", varcheck::mp::to_string(report.verdict));
  root.set("global_min_excess", report.global_min_excess);
  root.set("worst_index", report.worst_index);
  {
    JValue pts = JValue::array();
    for (const auto& rec : report.points) {
      JValue p = JValue::object();
      p.set("t", rec.t);
      p.set("min_excess", rec.min_excess);
      {
        JValue w = JValue::object();
        w.set("xi", rec.witness.xi);
        w.set("eta", rec.witness.eta);
        w.set("amplitude", rec.witness.amplitude);
        p.set("witness", std::move(w));
      }
      p.set("lh_margin", rec.lh_margin);
      p.set("unbounded_suspected", rec.unbounded_suspected);
      p.set("h_bridge_residual", rec.h_bridge_residual);
      pts.push(std::move(p));
    }
    root.set("points", std::move(pts));
  }
  emit(root, args.out);

  if (!args.csv.empty()) {
    std::vector<std::string> header;
    const int n = instance.lagrangian.n, nu = instance.lagrangian.nu;
    for (int i = 1; i <= n; ++i) header.push_back("t_" + std::to_string(i));
    header.push_back("min_excess");
    header.push_back("amplitude");
    for (int a = 1; a <= nu; ++a) header.push_back("xi_" + std::to_string(a));
    for (int i = 1; i <= n; ++i) header.push_back("eta_" + std::to_string(i));
    header.push_back("lh_margin");
    header.push_back("unbounded_suspected");
    Csv csv(header);
    for (const auto& rec : report.points) {
      std::vector<std::string> row;
      for (int i = 0; i < n; ++i) row.push_back(Csv::cell(rec.t(i)));
      row.push_back(Csv::cell(rec.min_excess));
      row.push_back(Csv::cell(rec.witness.amplitude));
      for (int a = 0; a < nu; ++a) row.push_back(Csv::cell(rec.witness.xi(a)));
      for (int i = 0; i < n; ++i) row.push_back(Csv::cell(rec.witness.eta(i)));
      row.push_back(Csv::cell(rec.lh_margin));
      row.push_back(rec.unbounded_suspected ? "1" : "0");
      csv.add_row(std::move(row));
    }
    varcheck::report::write_text_file(args.csv, csv.dump());
  }
  return report.verdict == varcheck::mp::Verdict::VIOLATED ? 1 : 0;
}

struct EulerArgs {
  ProblemFlags problem;
  int resolution = 32;
  std::string out, csv;
};

int run_euler(const EulerArgs& args) {
  const auto instance = resolve_problem(args.problem);
  const auto report = varcheck::euler::euler_residual(instance, args.resolution);

  int evaluated = 0;
  for (std::size_t i = 0; i < report.residual.values.size(); ++i)
    if (report.residual.valid(static_cast<int>(i))) ++evaluated;

  JValue root = JValue::object();
  root.set("command", "euler-residual");
  root.set("problem", instance.name);
  root.set("params", params_json(instance.params));
  {
    JValue o = JValue::object();
    o.set("resolution", args.resolution);
    root.set("options", std::move(o));
  }
  root.set("max_abs", report.max_abs);
  root.set("nodes_evaluated", evaluated);
  root.set("csv", args.csv.empty() ? JValue() : JValue(args.csv));
  emit(root, args.out);

  if (!args.csv.empty()) {
    const auto& field = report.residual;
    const int n = field.dim(), nu = field.rows;
    std::vector<std::string> header;
    for (int i = 1; i <= n; ++i) header.push_back("t_" + std::to_string(i));
    for (int a = 1; a <= nu; ++a) header.push_back("r_" + std::to_string(a));
    header.push_back("norm");
    Csv csv(header);
    varcheck::euler::for_each_node(field.shape, [&](const std::vector<int>& idx, int flat) {
      if (!field.valid(flat)) return;
      const Vector t = field.coord(idx);
      std::vector<std::string> row;
      for (int i = 0; i < n; ++i) row.push_back(Csv::cell(t(i)));
      for (int a = 0; a < nu; ++a) row.push_back(Csv::cell(field.values[flat](a, 0)));
      row.push_back(Csv::cell(field.values[flat].lpNorm<Eigen::Infinity>()));
      csv.add_row(std::move(row));
    });
    varcheck::report::write_text_file(args.csv, csv.dump());
  }
  return 0;
}

struct NeedleArgs {
  ProblemFlags problem;
  std::vector<double> tau, xi, eta;
  double amplitude = 1.0;
  std::vector<double> sigmas = {1e-2, 3e-3, 1e-3, 3e-4};
  int refinement = 0;
  std::string out, csv;
};

int run_needle(const NeedleArgs& args) {
  const auto instance = resolve_problem(args.problem);
  const Vector tau = args.tau.empty() ? instance.candidate.domain.centroid()
                                      : to_vector(args.tau);
  if (args.xi.empty() || args.eta.empty())
    throw ConfigError("needle-sweep requires --xi and --eta");
  const Vector xi = to_vector(args.xi);
  const Vector eta = to_vector(args.eta);

  varcheck::needle::TriangleQuadratureSpec spec;
  spec.refinement = args.refinement;
  const auto sweep = varcheck::needle::asymptotic_sweep(instance, tau, xi, eta,
                                                        args.amplitude, args.sigmas, spec);

  JValue root = JValue::object();
  root.set("command", "needle-sweep");
  root.set("problem", instance.name);
  root.set("params", params_json(instance.params));
  {
    JValue o = JValue::object();
    o.set("tau", tau);
    o.set("xi", xi);
    o.set("eta", eta);
    o.set("amplitude", args.amplitude);
    JValue s = JValue::array();
    for (double v : args.sigmas) s.push(v);
    o.set("sigmas", std::move(s));
    o.set("refinement", args.refinement);
    root.set("options", std::move(o));
  }
  {
    // The slope constant implied by the vertex geometry, plus its reciprocal
    // convention; both are emitted so downstream readers never have to guess.
    JValue g = JValue::object();
    g.set("main_slope_constant", 3.0 / std::sqrt(7.0));
    g.set("alternate_slope_constant", std::sqrt(7.0) / 3.0);
    root.set("geometry", std::move(g));
  }
  root.set("main_excess", sweep.main_excess);
  {
    JValue rows = JValue::array();
    for (const auto& row : sweep.rows) {
      JValue r = JValue::object();
      r.set("sigma", row.sigma);
      r.set("delta_f", row.delta_f);
      r.set("ratio", row.ratio);
      rows.push(std::move(r));
    }
    root.set("rows", std::move(rows));
  }
  root.set("exponent", sweep.exponent);
  root.set("coefficient", sweep.coefficient);
  root.set("predicted_coefficient", sweep.predicted_coefficient);
  root.set("projected_coefficient", sweep.projected_coefficient);
  root.set("sign_match", sweep.sign_match);
  root.set("assessment", sweep.assessment);
  emit(root, args.out);

  if (!args.csv.empty()) {
    Csv csv({"sigma", "delta_f", "ratio"});
    for (const auto& row : sweep.rows)
      csv.add_row({Csv::cell(row.sigma), Csv::cell(row.delta_f), Csv::cell(row.ratio)});
    varcheck::report::write_text_file(args.csv, csv.dump());
  }
  return sweep.assessment == "decrease_confirmed" ? 1 : 0;
}

struct LandscapeArgs {
  ProblemFlags problem;
  std::vector<double> point;
  double r = 1.0;
  int resolution = 16;
  std::string out, csv;
};

int run_landscape(const LandscapeArgs& args) {
  const auto instance = resolve_problem(args.problem);
  const Vector t = args.point.empty() ? instance.candidate.domain.centroid()
                                      : to_vector(args.point);
  const auto rows = varcheck::mp::excess_landscape(instance, t, args.r, args.resolution);

  double min_excess = rows.front().excess, max_excess = rows.front().excess;
  double max_bridge = 0.0;
  for (const auto& row : rows) {
    min_excess = std::min(min_excess, row.excess);
    max_excess = std::max(max_excess, row.excess);
    max_bridge = std::max(max_bridge, row.h_bridge_residual);
  }

  JValue root = JValue::object();
  root.set("command", "excess-landscape");
  root.set("problem", instance.name);
  root.set("params", params_json(instance.params));
  {
    JValue o = JValue::object();
    o.set("t", t);
    o.set("r", args.r);
    o.set("resolution", args.resolution);
    root.set("options", std::move(o));
  }
  root.set("row_count", static_cast<long long>(rows.size()));
  root.set("min_excess", min_excess);
  root.set("max_excess", max_excess);
  root.set("max_h_bridge_residual", max_bridge);
  {
    JValue arr = JValue::array();
    for (const auto& row : rows) {
      JValue r = JValue::object();
      r.set("xi", row.xi);
      r.set("eta", row.eta);
      r.set("r", row.r);
      r.set("excess", row.excess);
      r.set("h_bridge_residual", row.h_bridge_residual);
      arr.push(std::move(r));
    }
    root.set("rows", std::move(arr));
  }
  emit(root, args.out);

  if (!args.csv.empty()) {
    Csv csv({"xi_1", "xi_2", "eta_1", "eta_2", "r", "excess", "h_bridge_residual"});
    for (const auto& row : rows)
      csv.add_row({Csv::cell(row.xi(0)), Csv::cell(row.xi(1)), Csv::cell(row.eta(0)),
                   Csv::cell(row.eta(1)), Csv::cell(row.r), Csv::cell(row.excess),
                   Csv::cell(row.h_bridge_residual)});
    varcheck::report::write_text_file(args.csv, csv.dump());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of optimality conditions for "
               "multiple-integral variational problems"};
  app.require_subcommand(1);

  std::string list_out;
  auto* list_cmd = app.add_subcommand("list-problems", "List the built-in problem catalog");
  list_cmd->add_option("--out", list_out, "Write JSON here instead of stdout");

  LhArgs lh;
  auto* lh_cmd = app.add_subcommand(
      "check-lh", "Minimize the rank-one quadratic form (Legendre-Hadamard margin)");
  add_problem_flags(lh_cmd, lh.problem);
  lh_cmd->add_option("--point", lh.point, "Base point (default: domain centroid)")
      ->delimiter(',');
  lh_cmd->add_option("--starts", lh.starts, "Multistart count")->check(CLI::PositiveNumber);
  lh_cmd->add_option("--max-iters", lh.max_iters, "Iterations per start")
      ->check(CLI::PositiveNumber);
  lh_cmd->add_option("--tol", lh.tol, "Stall tolerance");
  lh_cmd->add_option("--seed", lh.seed, "Random seed");
  lh_cmd->add_option("--classify-tol", lh.classify_tol, "Classification threshold");
  lh_cmd->add_option("--grid", lh.grid_resolution,
                     "Also run the exhaustive grid search at this resolution");
  lh_cmd->add_option("--out", lh.out, "Write JSON here instead of stdout");

  MpArgs mp;
  auto* mp_cmd = app.add_subcommand(
      "check-mp", "Rank-one maximum-principle check via the Weierstrass excess");
  add_problem_flags(mp_cmd, mp.problem);
  mp_cmd->add_option("--r-max", mp.r_max, "Amplitude bound")->check(CLI::PositiveNumber);
  mp_cmd->add_option("--r-steps", mp.r_steps, "Amplitude ladder length")
      ->check(CLI::PositiveNumber);
  mp_cmd->add_option("--starts", mp.starts, "Direction starts per amplitude")
      ->check(CLI::PositiveNumber);
  mp_cmd->add_option("--tol", mp.tol, "Verdict tolerance");
  mp_cmd->add_option("--seed", mp.seed, "Random seed");
  mp_cmd->add_option("--cd-max-iters", mp.cd_max_iters, "Descent steps per start")
      ->check(CLI::PositiveNumber);
  mp_cmd->add_option("--points-grid", mp.points_grid, "Interior sample grid per axis");
  mp_cmd->add_option("--out", mp.out, "Write JSON here instead of stdout");
  mp_cmd->add_option("--csv", mp.csv, "Also write per-point rows as CSV");

  EulerArgs euler;
  auto* euler_cmd =
      app.add_subcommand("euler-residual", "Pointwise Euler-Lagrange residual of the candidate");
  add_problem_flags(euler_cmd, euler.problem);
  euler_cmd->add_option("--resolution", euler.resolution, "Lattice nodes per axis");
  euler_cmd->add_option("--out", euler.out, "Write JSON here instead of stdout");
  euler_cmd->add_option("--csv", euler.csv, "Also write the residual field as CSV");

  NeedleArgs needle;
  auto* needle_cmd = app.add_subcommand(
      "needle-sweep", "Needle-variation sweep of the functional increment");
  add_problem_flags(needle_cmd, needle.problem);
  needle_cmd->add_option("--tau", needle.tau, "Needle center (default: domain centroid)")
      ->delimiter(',');
  needle_cmd->add_option("--xi", needle.xi, "Fiber direction (nu components)")->delimiter(',');
  needle_cmd->add_option("--eta", needle.eta, "Base direction (2 components)")->delimiter(',');
  needle_cmd->add_option("--amplitude", needle.amplitude, "Apex amplitude A");
  needle_cmd->add_option("--sigmas", needle.sigmas, "Strictly decreasing scale ladder")
      ->delimiter(',');
  needle_cmd->add_option("--refinement", needle.refinement, "Quadrature subdivision level");
  needle_cmd->add_option("--out", needle.out, "Write JSON here instead of stdout");
  needle_cmd->add_option("--csv", needle.csv, "Also write sweep rows as CSV");

  LandscapeArgs landscape;
  auto* landscape_cmd = app.add_subcommand(
      "excess-landscape", "Tabulate the excess over rank-one direction angles");
  add_problem_flags(landscape_cmd, landscape.problem);
  landscape_cmd->add_option("--point", landscape.point, "Base point (default: centroid)")
      ->delimiter(',');
  landscape_cmd->add_option("--r", landscape.r, "Amplitude")->check(CLI::PositiveNumber);
  landscape_cmd->add_option("--resolution", landscape.resolution, "Angle steps per circle")
      ->check(CLI::PositiveNumber);
  landscape_cmd->add_option("--out", landscape.out, "Write JSON here instead of stdout");
  landscape_cmd->add_option("--csv", landscape.csv, "Also write rows as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the diagnostic
    return 2;
  }

  try {
    if (*list_cmd) return run_list_problems(list_out);
    if (*lh_cmd) return run_check_lh(lh);
    if (*mp_cmd) return run_check_mp(mp);
    if (*euler_cmd) return run_euler(euler);
    if (*needle_cmd) return run_needle(needle);
    if (*landscape_cmd) return run_landscape(landscape);
    std::cerr << "no subcommand selected\n";
    return 2;
  } catch (const varcheck::expr::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const varcheck::expr::EvalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
