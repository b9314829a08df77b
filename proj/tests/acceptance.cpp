// Acceptance gate: eight timed criteria, one PASS/FAIL line each, nonzero
// exit if any line fails.  Tolerances are fixed here on purpose; to tighten
// or investigate, run the finer-grained `prabhakar verify` suites instead.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "prabhakar/cauchy.hpp"
#include "prabhakar/operators.hpp"
#include "prabhakar/special.hpp"

namespace {

using namespace prabhakar;

struct Result {
  bool pass = false;
  std::string text;
};

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof buf, pattern, args);
  va_end(args);
  return buf;
}

// same generator as the verify suites: fixed mapping so reports are stable
struct Rng {
  std::mt19937_64 g;
  explicit Rng(std::uint64_t seed) : g(seed) {}
  double uniform(double lo, double hi) {
    const double u = double(g() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
};

double rel(double err, double scale) {
  return err / std::max(std::abs(scale), 1e-300);
}

// ---------------------------------------------------------------- 1

Result criterion1() {
  const MLParams unit(1.0, 1.0, 1.0);
  double worst_exp = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double z = -5.0 + 10.0 * i / 100.0;
    worst_exp = std::max(
        worst_exp, std::abs(ml3(unit, z) - std::exp(z)) / std::exp(std::abs(z)));
  }

  const double gamma_of[] = {2.991568987687590628312517,  // Gamma(0.3)
                             1.0,                         // Gamma(1)
                             1.329340388179137020473626}; // Gamma(2.5)
  const double alphas[] = {0.3, 1.0, 2.5};
  double worst_const = 0.0;
  for (int j = 0; j < 3; ++j) {
    for (double z : {-2.0, -0.5, 0.0, 1.3, 4.0}) {
      const double v = ml3(MLParams(1.0, alphas[j], 0.0), z);
      worst_const = std::max(worst_const, std::abs(v - 1.0 / gamma_of[j]));
    }
  }

  Result r;
  r.pass = worst_exp <= 1e-12 && worst_const <= 1e-14;
  r.text = fmt("exp rel %.2e (tol 1e-12), gamma=0 abs %.2e (tol 1e-14)",
               worst_exp, worst_const);
  return r;
}

// ---------------------------------------------------------------- 2 and 8

struct Combo {
  double rho, alpha, gamma, omega;
  bool log_psi;
};

std::vector<Combo> the_combos() {
  // each gamma/alpha pair once with (rho=1, omega=0.3, psi=identity) and
  // once with (rho=0.8, omega=-0.3, psi=log)
  std::vector<Combo> combos;
  for (double gamma : {0.0, 1.0, 2.0}) {
    for (double alpha : {0.5, 1.2}) {
      combos.push_back({1.0, alpha, gamma, 0.3, false});
      combos.push_back({0.8, alpha, gamma, -0.3, true});
    }
  }
  return combos;
}

PsiMap combo_psi(const Combo& c) {
  return c.log_psi ? PsiMap::log({1.0, std::exp(1.0)})
                   : PsiMap::identity({0.0, 1.0});
}

double power_error(const OperatorSpec& op, double beta, int nodes,
                   int points) {
  const PsiMap& psi = op.psi;
  const double sa = psi(psi.a());
  const double D = psi(psi.b()) - sa;
  auto f = [&psi, sa, beta](double t) {
    return std::pow(psi(t) - sa, beta - 1.0);
  };
  const SampledFunction fs = sample_uniform_s(psi, f, nodes);
  double worst = 0.0;
  for (int i = 1; i <= points; ++i) {
    const double x = psi.inverse(sa + D * i / points);
    const double got = prabhakar_apply(op, fs, x);
    const double want = prabhakar_power(op, beta, x);
    worst = std::max(worst, rel(std::abs(got - want), want));
  }
  return worst;
}

Result criterion2() {
  double worst = 0.0;
  for (const Combo& c : the_combos()) {
    const OperatorSpec op(MLParams(c.rho, c.alpha, c.gamma, c.omega),
                          combo_psi(c));
    for (double beta : {1.0, 2.0}) {
      worst = std::max(worst, power_error(op, beta, 400, 20));
    }
  }
  Result r;
  r.pass = worst <= 1e-6;
  r.text = fmt("worst rel %.2e (tol 1e-06)", worst);
  return r;
}

Result criterion8() {
  double worst_factor = std::numeric_limits<double>::infinity();
  double worst_order = std::numeric_limits<double>::infinity();
  for (const Combo& c : the_combos()) {
    const double beta = c.alpha == 0.5 ? 1.5 : 3.0;
    const OperatorSpec op(MLParams(c.rho, c.alpha, c.gamma, c.omega),
                          combo_psi(c));
    std::vector<double> errs;
    for (int n : {200, 400, 800}) {
      errs.push_back(power_error(op, beta, n, 10));
    }
    worst_factor = std::min(worst_factor, errs[0] / errs[1]);
    worst_factor = std::min(worst_factor, errs[1] / errs[2]);
    worst_order =
        std::min(worst_order, std::log2(errs[0] / errs[2]) / 2.0);
  }
  Result r;
  r.pass = worst_factor >= 2.0;
  r.text = fmt("smallest factor per doubling %.2f (need >= 2), "
               "observed order >= %.2f",
               worst_factor, worst_order);
  return r;
}

// ---------------------------------------------------------------- 3 and 4

struct ComposeSet {
  double rho, alpha, gamma, nu, sigma, omega;
  bool log_psi;
};

double compose_error(const ComposeSet& s, bool outer_first, int grid_n) {
  const PsiMap psi = s.log_psi ? PsiMap::log({1.0, std::exp(1.0)})
                               : PsiMap::identity({0.0, 1.0});
  const OperatorSpec op1(MLParams(s.rho, s.alpha, s.gamma, s.omega), psi);
  const OperatorSpec op2(MLParams(s.rho, s.nu, s.sigma, s.omega), psi);
  const OperatorSpec fused(
      MLParams(s.rho, s.alpha + s.nu, s.gamma + s.sigma, s.omega), psi);
  auto f = [&psi](double t) { return std::cos(psi(t)); };
  const SampledFunction fs = sample_uniform_s(psi, f, grid_n);

  const OperatorSpec& inner = outer_first ? op2 : op1;
  const OperatorSpec& outer = outer_first ? op1 : op2;
  const SampledFunction gs(fs.nodes, prabhakar_apply(inner, fs, fs.nodes));

  const double sa = psi(psi.a());
  const double D = psi(psi.b()) - sa;
  Array x(20);
  for (int i = 0; i < 20; ++i) {
    x[i] = psi.inverse(sa + D * (0.05 + 0.95 * i / 19.0));
  }
  const Array composed = prabhakar_apply(outer, gs, x);
  const Array direct = prabhakar_apply(fused, fs, x);
  return (composed - direct).abs().maxCoeff() / direct.abs().maxCoeff();
}

Result criterion3() {
  const std::vector<ComposeSet> sets = {
      {1.0, 1.0, 1.0, 1.0, 1.0, 0.3, false},
      {0.8, 1.2, 2.0, 0.8, -1.0, -0.3, false},
      {1.2, 0.8, 0.5, 1.2, 1.5, 0.2, true},
      {1.0, 1.5, -1.0, 1.1, 2.0, 0.4, false},
  };
  double worst = 0.0;
  for (const ComposeSet& s : sets) {
    worst = std::max(worst, compose_error(s, false, 1600));
    worst = std::max(worst, compose_error(s, true, 1600));
  }
  Result r;
  r.pass = worst <= 1e-5;
  r.text = fmt("worst rel %.2e over 4 sets, both orders (tol 1e-05)", worst);
  return r;
}

Result criterion4() {
  // sigma = 0 makes the second factor the plain fractional integral
  const std::vector<ComposeSet> sets = {
      {1.0, 1.0, 1.0, 0.7, 0.0, 0.3, false},
      {0.8, 0.8, 2.0, 1.2, 0.0, -0.3, false},
      {1.2, 1.2, -1.0, 0.8, 0.0, 0.2, true},
      {1.0, 1.5, 0.5, 1.0, 0.0, 0.4, false},
  };
  double worst = 0.0;
  for (const ComposeSet& s : sets) {
    worst = std::max(worst, compose_error(s, false, 1600));
    worst = std::max(worst, compose_error(s, true, 1600));
  }
  Result r;
  r.pass = worst <= 1e-5;
  r.text = fmt("worst rel %.2e both orders vs fused (tol 1e-05)", worst);
  return r;
}

// ---------------------------------------------------------------- 5

Result criterion5() {
  struct Config {
    double rho, alpha, gamma, omega;
    bool log_psi;
  };
  const std::vector<Config> configs = {
      {1.0, 0.5, 1.0, 0.3, false},
      {0.8, 1.2, 2.0, 0.3, false},
      {1.0, 0.8, 0.5, 0.0, true},
      {1.2, 1.5, 1.5, 0.2, false},
  };
  Rng rng(0);
  int polys = 0;
  double excess_nu0 = -std::numeric_limits<double>::infinity();
  double excess_flat = excess_nu0, excess_corrected = excess_nu0;
  for (const Config& c : configs) {
    const PsiMap psi = c.log_psi ? PsiMap::log({1.0, std::exp(1.0)})
                                 : PsiMap::identity({0.0, 1.0});
    const OperatorSpec op(MLParams(c.rho, c.alpha, c.gamma, c.omega), psi);
    const double M = bound_constant(op);
    const double M_nu = weighted_bound_constant(op, 0.3);
    const double sa = psi(psi.a());
    for (int trial = 0; trial < 50; ++trial) {
      double coef[6];
      for (double& v : coef) v = rng.uniform(-1.0, 1.0);
      auto f = [&psi, sa, &coef](double x) {
        const double t = psi(x) - sa;
        double acc = 0.0;
        for (int k = 5; k >= 0; --k) acc = acc * t + coef[k];
        return acc;
      };
      const SampledFunction fs = sample_uniform_s(psi, f, 240);
      const SampledFunction efs(fs.nodes, prabhakar_apply(op, fs, fs.nodes));
      ++polys;
      const double lhs0 = weighted_norm(efs, psi, 0.0);
      const double rhs0 = M * weighted_norm(fs, psi, 0.0);
      excess_nu0 = std::max(excess_nu0, (lhs0 - rhs0) / rhs0);
      const double lhs3 = weighted_norm(efs, psi, 0.3);
      const double nf3 = weighted_norm(fs, psi, 0.3);
      excess_flat = std::max(excess_flat, (lhs3 - M * nf3) / (M * nf3));
      excess_corrected =
          std::max(excess_corrected, (lhs3 - M_nu * nf3) / (M_nu * nf3));
    }
  }
  // The stated check uses the same flat constant M at both nu values.  The
  // nu = 0.3 half is violated by construction, not by numerics: M misses a
  // Gamma(1-nu)Gamma(m+1)/Gamma(m+1-nu) weight factor per series term, and
  // the factor-corrected constant does bound every draw (third number).
  Result r;
  r.pass = excess_nu0 <= 1e-8 && excess_flat <= 1e-8;
  r.text = fmt("excess over M|f|: nu=0 %.2e, nu=0.3 %.2e (tol 1e-08, %d "
               "polynomials); nu=0.3 vs weight-corrected constant %.2e",
               excess_nu0, excess_flat, polys, excess_corrected);
  return r;
}

// ---------------------------------------------------------------- 6

Result criterion6() {
  const PsiMap id01 = PsiMap::identity({0.0, 1.0});
  const PsiMap log1e = PsiMap::log({1.0, std::exp(1.0)});
  const MLForcing ml_f{1.0, 1.2, 1.0};

  std::vector<CauchyProblem> probs;
  probs.emplace_back(0.7, 0.4,
                     OperatorSpec(MLParams(1.0, 0.5, 1.0, 0.3), id01),
                     std::vector<double>{1.0}, Forcing(ml_f));
  probs.emplace_back(0.7, 0.4,
                     OperatorSpec(MLParams(1.0, 0.5, 1.0, 0.3), log1e),
                     std::vector<double>{1.0}, Forcing(ml_f));
  probs.emplace_back(0.7, -0.4,
                     OperatorSpec(MLParams(1.0, 0.5, 1.0, 0.3), id01),
                     std::vector<double>{1.0}, Forcing(ml_f));
  probs.emplace_back(1.5, 0.4,
                     OperatorSpec(MLParams(1.0, 0.5, 1.0, 0.3), id01),
                     std::vector<double>{1.0, 2.0}, Forcing(ml_f));

  double worst_cross = 0.0, worst_m8 = 0.0;
  bool all_monotone = true, all_converged = true;
  for (const CauchyProblem& p : probs) {
    const Array x = Array::LinSpaced(21, p.op.a(), p.op.b());
    const SeriesSolution sol = solve_particular(p, x);
    all_converged = all_converged && sol.converged;
    const double scale = sol.u.abs().maxCoeff();

    QuadratureReport vrep;
    const SampledFunction uv = volterra_solve(p, 800, SeriesControl{}, &vrep);
    all_converged = all_converged && vrep.converged;
    double cross = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      cross = std::max(cross, std::abs(sol.u[i] - uv.value_at(x[i])));
    }
    worst_cross = std::max(worst_cross, cross / scale);

    double prev = std::numeric_limits<double>::infinity();
    double gap = prev;
    for (int m = 1; m <= 8; ++m) {
      gap = (picard_iterate(p, m, x) - sol.u).abs().maxCoeff();
      if (gap > prev * (1.0 + 1e-9) + 1e-13 * scale) all_monotone = false;
      prev = gap;
    }
    worst_m8 = std::max(worst_m8, gap / scale);
  }
  Result r;
  r.pass = all_converged && worst_cross <= 1e-4 && all_monotone &&
           worst_m8 <= 1e-6;
  r.text = fmt("series vs volterra rel %.2e (tol 1e-04), picard %s, "
               "m=8 gap %.2e (tol 1e-06)",
               worst_cross, all_monotone ? "monotone" : "NOT monotone",
               worst_m8);
  return r;
}

// ---------------------------------------------------------------- 7

Result criterion7() {
  double worst = 0.0;
  for (int which_psi = 0; which_psi < 2; ++which_psi) {
    const PsiMap psi = which_psi ? PsiMap::log({1.0, std::exp(1.0)})
                                 : PsiMap::identity({0.0, 1.0});
    const double sa = psi(psi.a());
    const double D = psi(psi.b()) - sa;
    const MLParams ml(1.0, 0.5, 1.0, 0.3);
    const OperatorSpec op(ml, psi);
    const InverseSpec inv(ml, psi, 0.95);
    for (int which_f = 0; which_f < 2; ++which_f) {
      auto f = [&psi, sa, which_f](double t) {
        return which_f ? psi(t) - sa : 1.0;
      };
      const SampledFunction fs = sample_uniform_s(psi, f, 800);
      auto ef = [&op, &fs](double x) { return prabhakar_apply(op, fs, x); };
      Array x(10);
      for (int i = 0; i < 10; ++i) {
        x[i] = psi.inverse(sa + D * (0.3 + 0.65 * i / 9.0));
      }
      InverseOptions opt;
      opt.nodes = 800;
      opt.caputo.nodes = 800;
      const Array got = inverse_apply(inv, ef, x, opt);
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double want = f(x[i]);
        worst = std::max(worst, std::abs(got[i] - want) /
                                    std::max(1.0, std::abs(want)));
      }
    }
  }
  Result r;
  r.pass = worst <= 1e-3;
  r.text = fmt("worst rel %.2e recovering f = 1 and f = psi - psi(a) "
               "(tol 1e-03)",
               worst);
  return r;
}

}  // namespace

int main() {
  struct Entry {
    int num;
    const char* title;
    double budget_s;  // 0 = untimed criterion
    Result (*fn)();
  };
  const Entry entries[] = {
      {1, "ML function: exponential case and gamma=0 constants", 1.0,
       criterion1},
      {2, "power-function quadrature vs closed form, 12 combos", 10.0,
       criterion2},
      {3, "semigroup: composed vs fused, both orders", 20.0, criterion3},
      {4, "composition with the plain fractional integral", 10.0, criterion4},
      {5, "weighted-norm bound on 200 random polynomials", 10.0, criterion5},
      {6, "Cauchy series vs Volterra cross-check + Picard", 60.0, criterion6},
      {7, "inverse operator recovers f = 1 and f = psi - psi(a)", 30.0,
       criterion7},
      {8, "quadrature error factor >= 2 per node doubling", 0.0, criterion8},
  };

  int failures = 0;
  for (const Entry& e : entries) {
    const auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
      r = e.fn();
    } catch (const std::exception& ex) {
      r.pass = false;
      r.text = std::string("exception: ") + ex.what();
    }
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    const bool in_budget = e.budget_s <= 0.0 || dt < e.budget_s;
    const bool pass = r.pass && in_budget;
    if (!pass) ++failures;
    if (e.budget_s > 0.0) {
      std::printf("%s criterion %d: %s [%s; %.2f s, budget %.0f s]\n",
                  pass ? "PASS" : "FAIL", e.num, e.title, r.text.c_str(), dt,
                  e.budget_s);
    } else {
      std::printf("%s criterion %d: %s [%s; %.2f s]\n",
                  pass ? "PASS" : "FAIL", e.num, e.title, r.text.c_str(), dt);
    }
    std::fflush(stdout);
  }
  if (failures) {
    std::printf("%d of 8 criteria FAILED\n", failures);
    return 1;
  }
  std::printf("all 8 criteria passed\n");
  return 0;
}
