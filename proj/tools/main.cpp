// Command-line front end: evaluate the three-parameter Mittag-Leffler
// function and the fractional operators on grids, solve Cauchy problems
// from JSON descriptions, and run the built-in verification suites.
//
// Exit codes: 0 ok, 1 verification failure, 2 input error,
// 3 convergence failure, 4 cross-check failure.

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "prabhakar/cauchy.hpp"
#include "prabhakar/io.hpp"
#include "prabhakar/operators.hpp"
#include "prabhakar/verify.hpp"

namespace {

using prabhakar::Array;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitInput = 2;
constexpr int kExitNoConverge = 3;
constexpr int kExitCrossCheck = 4;

struct CommonFlags {
  std::string output;   // empty -> stdout
  std::string report;   // empty -> no report file
  double rel_tol = 1e-14;
  int max_terms = 1000;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("-o,--output", flags.output, "Write CSV here (default: stdout)");
  cmd->add_option("--report", flags.report, "Write a JSON diagnostics report here");
  cmd->add_option("--rel-tol", flags.rel_tol, "Kernel-series relative tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-terms", flags.max_terms, "Kernel-series term cap")
      ->check(CLI::PositiveNumber);
}

void emit_csv(const CommonFlags& flags, const prabhakar::CsvTable& table) {
  const std::string text = prabhakar::to_csv(table);
  if (flags.output.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
  } else {
    prabhakar::write_file(flags.output, text);
  }
}

void emit_report(const CommonFlags& flags, const json& j) {
  if (flags.report.empty()) return;
  prabhakar::write_file(flags.report, j.dump(2) + "\n");
}

json report_quadrature(const prabhakar::QuadratureReport& rep) {
  return {{"min_segments", rep.min_segments},
          {"max_terms", rep.max_terms},
          {"converged", rep.converged},
          {"coarse", rep.coarse}};
}

// ------------------------------------------------------------------ ml

struct MlArgs {
  double rho = 1.0, alpha = 1.0, gamma = 1.0;
  std::string z;
  CommonFlags common;
};

int run_ml(const MlArgs& a) {
  const prabhakar::MLParams p(a.rho, a.alpha, a.gamma);
  const Array z = prabhakar::parse_grid(a.z);
  Array value(z.size()), terms(z.size()), converged(z.size());
  bool all_converged = true;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    prabhakar::SeriesControl ctl;
    ctl.rel_tol = a.common.rel_tol;
    ctl.max_terms = a.common.max_terms;
    value[i] = prabhakar::ml3(p, z[i], ctl);
    terms[i] = ctl.terms_used;
    converged[i] = ctl.converged ? 1.0 : 0.0;
    all_converged = all_converged && ctl.converged;
  }
  emit_csv(a.common, {"z,value,terms,converged", {z, value, terms, converged}});
  emit_report(a.common, {{"command", "ml"},
                         {"points", z.size()},
                         {"max_terms_used", int(terms.maxCoeff())},
                         {"converged", all_converged}});
  if (!all_converged) {
    std::cerr << "ml: series did not converge at every z\n";
    return kExitNoConverge;
  }
  return kExitOk;
}

// ------------------------------------------------------------------ op

struct OpArgs {
  std::string spec;
  std::string x;
  double power_delta = 0.0;
  bool has_power = false;
  std::string f_csv;
  std::string f_name;
  bool rl = false;
  double caputo_order = 0.0;
  bool has_caputo = false;
  int nodes = 400;
  CommonFlags common;
};

std::function<double(double)> builtin_function(const std::string& name,
                                               const prabhakar::PsiMap& psi) {
  const double sa = psi(psi.a());
  if (name == "one") return [](double) { return 1.0; };
  if (name == "dpsi") return [psi, sa](double t) { return psi(t) - sa; };
  if (name == "dpsi2") {
    return [psi, sa](double t) { const double d = psi(t) - sa; return d * d; };
  }
  if (name == "cos-psi") return [psi](double t) { return std::cos(psi(t)); };
  if (name == "sin-psi") return [psi](double t) { return std::sin(psi(t)); };
  if (name == "exp-psi") {
    return [psi, sa](double t) { return std::exp(psi(t) - sa); };
  }
  throw std::invalid_argument(
      "op: unknown builtin function '" + name +
      "' (choices: one, dpsi, dpsi2, cos-psi, sin-psi, exp-psi)");
}

int run_op(const OpArgs& a) {
  const prabhakar::OperatorSpec op = prabhakar::load_operator(a.spec);
  const Array x = prabhakar::parse_grid(a.x);
  const int selectors = int(a.has_power) + int(!a.f_csv.empty()) +
                        int(!a.f_name.empty());
  if (selectors != 1) {
    throw std::invalid_argument(
        "op: exactly one of --power, --f-csv, --f must be given");
  }
  if (a.rl && a.has_caputo) {
    throw std::invalid_argument("op: --rl and --caputo are mutually exclusive");
  }

  prabhakar::SeriesControl ctl;
  ctl.rel_tol = a.common.rel_tol;
  ctl.max_terms = a.common.max_terms;

  Array value(x.size());
  prabhakar::QuadratureReport rep;
  std::string path = "quadrature";

  if (a.has_power && !a.has_caputo) {
    // closed form on the power family
    path = "closed-form";
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      value[i] = a.rl
                     ? prabhakar::rl_power(op.psi, op.ml.alpha, a.power_delta,
                                           x[i], op.side)
                     : prabhakar::prabhakar_power(op, a.power_delta, x[i], ctl);
    }
  } else {
    std::function<double(double)> f;
    std::optional<prabhakar::SampledFunction> csv;
    if (a.has_power) {
      const double sa = op.psi(op.a());
      const double delta = a.power_delta;
      const prabhakar::PsiMap psi = op.psi;
      f = [psi, sa, delta](double t) {
        return std::pow(psi(t) - sa, delta - 1.0);
      };
    } else if (!a.f_csv.empty()) {
      csv.emplace(prabhakar::read_xy_csv(a.f_csv));
      f = [g = *csv](double t) { return g.value_at(t); };
    } else {
      f = builtin_function(a.f_name, op.psi);
    }

    if (a.has_caputo) {
      path = "caputo";
      prabhakar::CaputoOptions copt;
      copt.nodes = a.nodes;
      copt.series = ctl;
      value = prabhakar::caputo_apply(op.psi, a.caputo_order, f, x, copt);
    } else {
      const prabhakar::SampledFunction samples =
          csv ? *csv : prabhakar::sample_uniform_s(op.psi, f, a.nodes);
      value = a.rl ? prabhakar::rl_apply(op.psi, op.ml.alpha, samples, x, ctl,
                                         &rep)
                   : prabhakar::prabhakar_apply(op, samples, x, ctl, &rep);
      if (!rep.converged) {
        std::cerr << "op: kernel series hit the term cap at some point\n";
      }
      if (rep.coarse) {
        std::cerr << "op: fewer than 8 quadrature segments under some point;"
                     " increase --nodes\n";
      }
    }
  }

  emit_csv(a.common, {"x,value", {x, value}});
  json rj = {{"command", "op"}, {"path", path}};
  if (path == "quadrature") rj["quadrature"] = report_quadrature(rep);
  emit_report(a.common, rj);
  return kExitOk;
}

// --------------------------------------------------------------- solve

struct SolveArgs {
  std::string problem;
  std::string method = "both";
  std::string x;
  int points = 101;
  int nodes = 800;
  int jmax = 60;
  double cross_tol = 1e-3;
  CommonFlags common;
};

int run_solve(const SolveArgs& a) {
  const prabhakar::CauchyProblem p = prabhakar::load_problem(a.problem);
  if (a.method != "series" && a.method != "volterra" && a.method != "both") {
    throw std::invalid_argument(
        "solve: --method must be series, volterra, or both");
  }

  Array x;
  if (!a.x.empty()) {
    x = prabhakar::parse_grid(a.x);
    if (x.size() && (x[0] < p.op.a() - 1e-12 ||
                     x[x.size() - 1] > p.op.b() + 1e-12)) {
      throw std::invalid_argument("solve: --x grid leaves the interval");
    }
  } else {
    if (a.points < 2) throw std::invalid_argument("solve: --points must be >= 2");
    x = Array::LinSpaced(a.points, p.op.a(), p.op.b());
  }

  prabhakar::SolveOptions opt;
  opt.j_max = a.jmax;
  opt.series.rel_tol = a.common.rel_tol;
  opt.series.max_terms = a.common.max_terms;

  const bool want_series = a.method != "volterra";
  const bool want_volterra = a.method != "series";

  prabhakar::SeriesSolution sol;
  bool series_converged = true;
  if (want_series) {
    const bool closed_form =
        !std::holds_alternative<prabhakar::GenericForcing>(p.forcing);
    sol = closed_form ? prabhakar::solve_particular(p, x, opt)
                      : prabhakar::solve_series(p, x, opt);
    series_converged = sol.converged;
  }

  prabhakar::QuadratureReport vrep;
  Array uv;
  bool volterra_converged = true;
  if (want_volterra) {
    const prabhakar::SampledFunction u =
        prabhakar::volterra_solve(p, a.nodes, opt.series, &vrep);
    uv.resize(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) uv[i] = u.value_at(x[i]);
    volterra_converged = vrep.converged;
  }

  prabhakar::CsvTable table;
  double cross_rel = 0.0;
  if (a.method == "series") {
    table = {"x,u_series", {x, sol.u}};
  } else if (a.method == "volterra") {
    table = {"x,u_volterra", {x, uv}};
  } else {
    const Array diff = (sol.u - uv).abs();
    const double scale = std::max(sol.u.abs().maxCoeff(), 1e-300);
    cross_rel = diff.maxCoeff() / scale;
    table = {"x,u_series,u_volterra,abs_diff", {x, sol.u, uv, diff}};
  }
  emit_csv(a.common, table);

  json rj = {{"command", "solve"}, {"method", a.method}};
  if (want_series) {
    rj["series"] = {{"outer_terms", sol.outer_terms},
                    {"converged", sol.converged},
                    {"last_term", sol.last_term}};
  }
  if (want_volterra) {
    rj["volterra"] = {{"nodes", a.nodes},
                      {"quadrature", report_quadrature(vrep)}};
  }
  if (a.method == "both") {
    rj["cross"] = {{"max_rel_diff", cross_rel}, {"tolerance", a.cross_tol}};
  }
  emit_report(a.common, rj);

  if (!series_converged || !volterra_converged) {
    std::cerr << "solve: " << (!series_converged ? "series" : "volterra")
              << " path did not converge\n";
    return kExitNoConverge;
  }
  if (a.method == "both" && cross_rel > a.cross_tol) {
    std::cerr << "solve: series and volterra answers differ by " << cross_rel
              << " relative (tolerance " << a.cross_tol << ")\n";
    return kExitCrossCheck;
  }
  return kExitOk;
}

// -------------------------------------------------------------- verify

struct VerifyArgs {
  std::string suite = "all";
  std::uint64_t seed = 0;
  CommonFlags common;
};

int run_verify_cmd(const VerifyArgs& a) {
  const std::vector<prabhakar::PropertyResult> results =
      prabhakar::run_verify(a.suite, a.seed);

  size_t width = 0;
  for (const auto& r : results) width = std::max(width, r.name.size());
  int failures = 0;
  std::string text;
  for (const auto& r : results) {
    if (!r.pass) ++failures;
    char line[256];
    std::snprintf(line, sizeof line, "%s  %-*s  measured %-12.4g tol %g",
                  r.pass ? "pass" : "FAIL", int(width), r.name.c_str(),
                  r.measured, r.tolerance);
    text += line;
    if (!r.detail.empty()) text += "  (" + r.detail + ")";
    text += "\n";
  }
  char tail[128];
  std::snprintf(tail, sizeof tail,
                "%zu/%zu properties passed (suite '%s', seed %llu)\n",
                results.size() - failures, results.size(), a.suite.c_str(),
                static_cast<unsigned long long>(a.seed));
  text += tail;
  if (a.common.output.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
  } else {
    prabhakar::write_file(a.common.output, text);
  }

  json props = json::array();
  for (const auto& r : results) {
    props.push_back({{"name", r.name},
                     {"pass", r.pass},
                     {"measured", r.measured},
                     {"tolerance", r.tolerance},
                     {"detail", r.detail}});
  }
  emit_report(a.common, {{"command", "verify"},
                         {"suite", a.suite},
                         {"seed", a.seed},
                         {"failures", failures},
                         {"properties", props}});
  return failures ? kExitVerifyFail : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional integral operators with Mittag-Leffler kernels"};
  app.require_subcommand(1);

  MlArgs ml;
  CLI::App* cml = app.add_subcommand(
      "ml", "Evaluate E^gamma_{rho,alpha}(z) on a grid");
  cml->add_option("--rho", ml.rho, "First kernel parameter (> 0)")->required();
  cml->add_option("--alpha", ml.alpha, "Second kernel parameter (> 0)")
      ->required();
  cml->add_option("--gamma", ml.gamma, "Third kernel parameter")->required();
  cml->add_option("--z", ml.z, "Argument grid: start:stop:step or one number")
      ->required();
  add_common(cml, ml.common);

  OpArgs opa;
  CLI::App* cop = app.add_subcommand(
      "op", "Apply a fractional operator to a function on a grid");
  cop->add_option("--spec", opa.spec, "Operator JSON file")->required();
  cop->add_option("--x", opa.x, "Evaluation grid: start:stop:step or one number")
      ->required();
  CLI::Option* opow = cop->add_option(
      "--power", opa.power_delta,
      "Act on (psi(t)-psi(a))^(delta-1); closed form unless --caputo");
  cop->add_option("--f-csv", opa.f_csv, "Act on a sampled function (x,f CSV)");
  cop->add_option("--f", opa.f_name,
                  "Act on a builtin function: one, dpsi, dpsi2, cos-psi, "
                  "sin-psi, exp-psi");
  cop->add_flag("--rl", opa.rl,
                "Plain fractional integral of order alpha (kernel series "
                "dropped)");
  CLI::Option* ocap = cop->add_option(
      "--caputo", opa.caputo_order,
      "Apply the Caputo-type derivative of this order instead");
  cop->add_option("--nodes", opa.nodes, "Sampling grid size (default 400)")
      ->check(CLI::PositiveNumber);
  add_common(cop, opa.common);

  SolveArgs so;
  CLI::App* csolve = app.add_subcommand(
      "solve", "Solve a Cauchy problem from a JSON description");
  csolve->add_option("--problem", so.problem, "Problem JSON file")->required();
  csolve->add_option("--method", so.method, "series | volterra | both");
  csolve->add_option("--x", so.x, "Output grid: start:stop:step or one number");
  csolve->add_option("--points", so.points,
                     "Output points, uniform over [a,b] (default 101)");
  csolve->add_option("--nodes", so.nodes,
                     "Volterra solver grid size (default 800)")
      ->check(CLI::PositiveNumber);
  csolve->add_option("--jmax", so.jmax, "Outer series term cap (default 60)")
      ->check(CLI::PositiveNumber);
  csolve->add_option("--cross-tol", so.cross_tol,
                     "Allowed series/volterra relative difference "
                     "(default 1e-3)")
      ->check(CLI::PositiveNumber);
  add_common(csolve, so.common);

  VerifyArgs ve;
  CLI::App* cver = app.add_subcommand(
      "verify", "Run the numerical property suites");
  cver->add_option("--suite", ve.suite,
                   "Suite name or 'all' (see --list-suites)");
  cver->add_option("--seed", ve.seed, "Random seed (default 0)");
  bool list_suites = false;
  cver->add_flag("--list-suites", list_suites, "Print suite names and exit");
  add_common(cver, ve.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (cml->parsed()) return run_ml(ml);
    if (cop->parsed()) {
      opa.has_power = opow->count() > 0;
      opa.has_caputo = ocap->count() > 0;
      return run_op(opa);
    }
    if (csolve->parsed()) return run_solve(so);
    if (cver->parsed()) {
      if (list_suites) {
        for (const std::string& s : prabhakar::verify_suites()) {
          std::cout << s << "\n";
        }
        return kExitOk;
      }
      return run_verify_cmd(ve);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}
