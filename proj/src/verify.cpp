#include "prabhakar/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace prabhakar {

namespace {

// mt19937_64 has a standard-mandated sequence; the uniform mapping below is
// fixed here so reports do not depend on the standard library's
// distribution implementation.
struct Rng {
  std::mt19937_64 g;
  explicit Rng(std::uint64_t seed) : g(seed) {}
  double uniform(double lo, double hi) {
    const double u = double(g() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  int pick(int n) { return int(g() % std::uint64_t(n)); }
};

PropertyResult check(std::string name, double measured, double tol,
                     std::string detail = "") {
  PropertyResult r;
  r.name = std::move(name);
  r.measured = measured;
  r.tolerance = tol;
  r.pass = measured <= tol;
  r.detail = std::move(detail);
  return r;
}

PropertyResult check_flag(std::string name, bool ok, std::string detail = "") {
  PropertyResult r;
  r.name = std::move(name);
  r.pass = ok;
  r.measured = ok ? 0.0 : 1.0;
  r.tolerance = 0.0;
  r.detail = std::move(detail);
  return r;
}

double rel_against(double err, double scale) {
  return err / std::max(std::abs(scale), 1e-300);
}

// ---------------------------------------------------------------- special

std::vector<PropertyResult> suite_special(Rng& rng) {
  std::vector<PropertyResult> out;

  {  // log Gamma(x+1) = log Gamma(x) + log x
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
      const double x = std::exp(rng.uniform(std::log(1e-3), std::log(50.0)));
      const double lhs = log_gamma(x + 1.0);
      const double rhs = log_gamma(x) + std::log(x);
      worst = std::max(worst,
                       std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
    out.push_back(check("special.log_gamma.recurrence", worst, 1e-12));
  }
  {  // against the C library, log-spaced over the rated range
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
      const double x = std::exp(rng.uniform(std::log(1e-3), std::log(1e4)));
      const double mine = log_gamma(x);
      const double ref = std::lgamma(x);
      worst = std::max(worst,
                       std::abs(mine - ref) / std::max(1.0, std::abs(ref)));
    }
    out.push_back(check("special.log_gamma.libm_agreement", worst, 1e-13));
  }
  {  // (g)_{k+1} = (g)_k (g+k); nonpositive integer g hits exact zero
    double worst = 0.0;
    bool zeros_ok = true;
    for (int i = 0; i < 200; ++i) {
      const double g = rng.uniform(-6.0, 6.0);
      const int k = rng.pick(12);
      const double lhs = pochhammer(g, k + 1);
      const double rhs = pochhammer(g, k) * (g + k);
      worst = std::max(worst, std::abs(lhs - rhs) /
                                  std::max(1.0, std::abs(rhs)));
    }
    for (int m = 0; m < 5; ++m) {
      if (pochhammer(-double(m), m + 1) != 0.0) zeros_ok = false;
      if (pochhammer(-double(m), m) == 0.0) zeros_ok = false;
    }
    out.push_back(check("special.pochhammer.recurrence", worst, 1e-13));
    out.push_back(check_flag("special.pochhammer.integer_zeros", zeros_ok));
  }
  {  // B symmetry and B(x,1) = 1/x
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double x = std::exp(rng.uniform(std::log(0.05), std::log(20.0)));
      const double y = std::exp(rng.uniform(std::log(0.05), std::log(20.0)));
      worst = std::max(worst, rel_against(std::abs(beta_fn(x, y) -
                                                   beta_fn(y, x)),
                                          beta_fn(x, y)));
      worst = std::max(worst, rel_against(std::abs(beta_fn(x, 1.0) - 1.0 / x),
                                          1.0 / x));
    }
    out.push_back(check("special.beta.identities", worst, 1e-12));
  }
  {  // E^1_{1,1}(z) = e^z
    double worst = 0.0;
    const MLParams p(1.0, 1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
      const double z = rng.uniform(-5.0, 5.0);
      worst = std::max(worst,
                       std::abs(ml3(p, z) - std::exp(z)) / std::exp(std::abs(z)));
    }
    out.push_back(check("special.ml3.exponential", worst, 1e-12));
  }
  {  // E^1_{1,2}(z) = (e^z - 1)/z
    double worst = 0.0;
    const MLParams p(1.0, 2.0, 1.0);
    for (int i = 0; i < 100; ++i) {
      const double z = rng.uniform(-4.0, 4.0);
      if (std::abs(z) < 1e-3) continue;
      const double ref = std::expm1(z) / z;
      worst = std::max(worst, rel_against(std::abs(ml3(p, z) - ref), ref));
    }
    out.push_back(check("special.ml3.em1_over_z", worst, 1e-12));
  }
  {  // ratio test: successive term magnitudes eventually fall below 1/2,
     // computed from the term formula itself so the bound is independent of
     // the summation loop
    bool ok = true;
    std::ostringstream msg;
    for (int i = 0; i < 40 && ok; ++i) {
      const double rho = rng.uniform(0.3, 2.0);
      const double alpha = rng.uniform(0.1, 3.0);
      const double gamma = rng.uniform(-3.0, 3.0);
      const double z = rng.uniform(-10.0, 10.0);
      if (z == 0.0) continue;
      bool found = false;
      for (int k = 0; k < 200000; ++k) {
        // |t_{k+1}/t_k| = |gamma+k| |z| / ((k+1)) * G(rk+a)/G(rk+r+a)
        const double num = std::abs(gamma + k) * std::abs(z);
        const double lg = log_gamma(rho * k + alpha) -
                          log_gamma(rho * k + rho + alpha);
        const double ratio = num / (k + 1.0) * std::exp(lg);
        if (ratio < 0.5) {
          found = true;
          break;
        }
      }
      if (!found) {
        ok = false;
        msg << "no decay for rho=" << rho << " alpha=" << alpha
            << " gamma=" << gamma << " z=" << z;
      }
    }
    out.push_back(check_flag("special.ml3.term_ratio_decay", ok, msg.str()));
  }
  {  // gamma = 0 collapses to 1/Gamma(alpha) in exactly one term
    bool ok = true;
    for (double alpha : {0.3, 1.0, 2.5}) {
      SeriesControl ctl;
      const double v = ml3(MLParams(1.0, alpha, 0.0), 3.7, ctl);
      if (std::abs(v - std::exp(-log_gamma(alpha))) >
          1e-14 * std::abs(v)) ok = false;
      if (!ctl.converged || ctl.terms_used != 1) ok = false;
    }
    out.push_back(check_flag("special.ml3.gamma0_single_term", ok));
  }
  return out;
}

// -------------------------------------------------------------------- psi

PsiMap random_builtin_psi(Rng& rng, int kind_pick) {
  switch (kind_pick) {
    case 0: return PsiMap::identity({rng.uniform(-2.0, 0.0),
                                     rng.uniform(0.5, 2.0)});
    case 1: return PsiMap::affine(rng.uniform(-1.0, 1.0),
                                  rng.uniform(0.5, 3.0),
                                  {rng.uniform(-2.0, 0.0),
                                   rng.uniform(0.5, 2.0)});
    case 2: return PsiMap::log({rng.uniform(0.5, 1.0),
                                rng.uniform(2.0, 4.0)});
    case 3: return PsiMap::power(rng.uniform(0.5, 3.0),
                                 {0.0, rng.uniform(0.5, 2.0)});
    default: return PsiMap::exp({rng.uniform(-1.0, 0.0),
                                 rng.uniform(0.5, 1.5)});
  }
}

std::vector<PropertyResult> suite_psi(Rng& rng) {
  std::vector<PropertyResult> out;

  {  // strictly increasing outputs on sorted grids, every kind
    bool ok = true;
    for (int trial = 0; trial < 25 && ok; ++trial) {
      const PsiMap psi = random_builtin_psi(rng, trial % 5);
      const double a = psi.a(), b = psi.b();
      std::vector<double> xs;
      for (int i = 0; i < 64; ++i) xs.push_back(rng.uniform(a, b));
      xs.push_back(a);
      xs.push_back(b);
      std::sort(xs.begin(), xs.end());
      xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
      double prev = -std::numeric_limits<double>::infinity();
      for (double x : xs) {
        const double s = psi_eval(psi, x);
        if (!(s > prev)) ok = false;
        prev = s;
      }
    }
    out.push_back(check_flag("psi.eval.monotone_on_sorted_grids", ok));
  }
  {  // built-in maps validate cleanly
    bool ok = true;
    for (int trial = 0; trial < 15; ++trial) {
      const PsiMap psi = random_builtin_psi(rng, trial % 5);
      if (!validate_psi(psi).pass) ok = false;
    }
    out.push_back(check_flag("psi.validate.builtin_pass", ok));
  }
  {  // a map with an interior derivative zero is rejected
    const PsiMap bad = PsiMap::user([](double x) { return x * x * x; },
                                    [](double x) { return 3.0 * x * x; },
                                    {-1.0, 1.0});
    const PsiValidation v = validate_psi(bad);
    out.push_back(check_flag("psi.validate.degenerate_fail", !v.pass,
                             v.message));
  }
  {  // a healthy user map passes and inverts
    const PsiMap user = PsiMap::user(
        [](double x) { return x + 0.2 * std::sin(x); },
        [](double x) { return 1.0 + 0.2 * std::cos(x); }, {0.0, 3.0});
    bool ok = validate_psi(user).pass;
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const double x = rng.uniform(0.0, 3.0);
      worst = std::max(worst, std::abs(user.inverse(user(x)) - x));
    }
    out.push_back(check_flag("psi.user.validate_pass", ok));
    out.push_back(check("psi.user.inverse_roundtrip", worst, 1e-9));
  }
  {  // closed-form inverses round-trip
    double worst = 0.0;
    for (int trial = 0; trial < 25; ++trial) {
      const PsiMap psi = random_builtin_psi(rng, trial % 5);
      const double width = psi.b() - psi.a();
      for (int i = 0; i < 20; ++i) {
        const double x = rng.uniform(psi.a(), psi.b());
        worst = std::max(worst,
                         std::abs(psi.inverse(psi(x)) - x) / width);
      }
    }
    out.push_back(check("psi.builtin.inverse_roundtrip", worst, 1e-12));
  }
  return out;
}

// -------------------------------------------------------- reduction

// polynomial in dpsi with the given coefficients
std::function<double(double)> poly_in_psi(const PsiMap& psi,
                                          std::vector<double> coef) {
  const double sa = psi(psi.a());
  return [psi, sa, coef](double x) {
    const double t = psi(x) - sa;
    double acc = 0.0;
    for (size_t k = coef.size(); k-- > 0;) acc = acc * t + coef[k];
    return acc;
  };
}

std::vector<double> random_coefs(Rng& rng, int deg) {
  std::vector<double> c(deg + 1);
  for (double& v : c) v = rng.uniform(-1.0, 1.0);
  return c;
}

std::vector<PropertyResult> suite_reduction(Rng& rng) {
  std::vector<PropertyResult> out;

  {  // gamma = 0 is the plain fractional integral, bit for bit
    bool identical = true;
    for (int trial = 0; trial < 6; ++trial) {
      const PsiMap psi = random_builtin_psi(rng, trial % 5);
      const double alpha = rng.uniform(0.2, 2.0);
      const Side side = trial % 2 ? Side::right : Side::left;
      const OperatorSpec op(MLParams(rng.uniform(0.5, 1.5), alpha, 0.0,
                                     rng.uniform(-0.3, 0.3)),
                            psi, side);
      const SampledFunction f = sample_uniform_s(
          psi, poly_in_psi(psi, random_coefs(rng, 4)), 120);
      Array x(7);
      for (int i = 0; i < 7; ++i) x[i] = rng.uniform(psi.a(), psi.b());
      const Array via_e = prabhakar_apply(op, f, x);
      Array via_rl;
      if (side == Side::left) {
        via_rl = rl_apply(psi, alpha, f, x);
      } else {
        const OperatorSpec rl_op(MLParams(1.0, alpha, 0.0, 0.0), psi,
                                 Side::right);
        via_rl = prabhakar_apply(rl_op, f, x);
      }
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (via_e[i] != via_rl[i]) identical = false;
      }
    }
    out.push_back(check_flag("reduction.gamma0_is_rl_bitwise", identical));
  }
  {  // alpha = 0, gamma = 0 is the identity operator
    const PsiMap psi = PsiMap::identity({0.0, 1.0});
    const OperatorSpec op(MLParams(1.0, 0.0, 0.0, 0.4), psi);
    auto f = [](double x) { return std::cos(3.0 * x) + x; };
    const SampledFunction fs = sample_uniform_s(psi, f, 50);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double x = rng.uniform(0.0, 1.0);
      worst = std::max(worst,
                       std::abs(prabhakar_apply(op, fs, x) - f(x)));
    }
    out.push_back(check("reduction.alpha0_identity", worst, 0.0));
  }
  {  // closed forms agree when gamma = 0
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const PsiMap psi = random_builtin_psi(rng, trial % 5);
      const double alpha = rng.uniform(0.2, 2.0);
      const double beta = rng.uniform(0.5, 3.0);
      const OperatorSpec op(MLParams(1.0, alpha, 0.0, 0.2), psi);
      const double x = rng.uniform(psi.a(), psi.b());
      const double lhs = prabhakar_power(op, beta, x);
      const double rhs = rl_power(psi, alpha, beta, x);
      worst = std::max(worst, rel_against(std::abs(lhs - rhs), rhs));
    }
    out.push_back(check("reduction.gamma0_power_closed_form", worst, 1e-13));
  }
  {  // evaluation at the base point is exactly zero
    bool ok = true;
    for (int trial = 0; trial < 5; ++trial) {
      const PsiMap psi = random_builtin_psi(rng, trial % 5);
      const OperatorSpec op(
          MLParams(1.0, rng.uniform(0.3, 1.5), 1.0, 0.2), psi);
      const SampledFunction f = sample_uniform_s(
          psi, poly_in_psi(psi, random_coefs(rng, 3)), 60);
      if (prabhakar_apply(op, f, psi.a()) != 0.0) ok = false;
    }
    out.push_back(check_flag("reduction.base_point_exact_zero", ok));
  }
  return out;
}

// -------------------------------------------------------- linearity

std::vector<PropertyResult> suite_linearity(Rng& rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const PsiMap psi = random_builtin_psi(rng, trial % 5);
    const double D = psi(psi.b()) - psi(psi.a());
    const double rho = rng.uniform(0.5, 1.5);
    const double omega = rng.uniform(-0.5, 0.5) / std::pow(D, rho);
    const OperatorSpec op(
        MLParams(rho, rng.uniform(0.3, 1.8), rng.uniform(-2.0, 2.0), omega),
        psi);
    const int n = 200;
    const SampledFunction f =
        sample_uniform_s(psi, poly_in_psi(psi, random_coefs(rng, 4)), n);
    const SampledFunction g =
        sample_uniform_s(psi, poly_in_psi(psi, random_coefs(rng, 4)), n);
    const double lam = rng.uniform(-2.0, 2.0);
    const double mu = rng.uniform(-2.0, 2.0);
    const SampledFunction combo(f.nodes, lam * f.values + mu * g.values);

    Array x(9);
    for (int i = 0; i < 9; ++i) x[i] = rng.uniform(psi.a(), psi.b());
    const Array left = prabhakar_apply(op, combo, x);
    const Array right = lam * prabhakar_apply(op, f, x).eval() +
                        mu * prabhakar_apply(op, g, x).eval();
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double scale = std::max(1.0, std::abs(right[i]));
      worst = std::max(worst, std::abs(left[i] - right[i]) / scale);
    }
  }
  return {check("linearity.operator", worst, 1e-10)};
}

// ------------------------------------------------------------- power law

std::vector<PropertyResult> suite_power(Rng&) {
  std::vector<PropertyResult> out;

  // the 12 parameter combinations of the accuracy check: each gamma/alpha
  // pair once with (rho=1, omega=0.3, psi=identity) and once with
  // (rho=0.8, omega=-0.3, psi=log)
  struct Combo {
    double rho, alpha, gamma, omega;
    bool log_psi;
  };
  std::vector<Combo> combos;
  for (double gamma : {0.0, 1.0, 2.0}) {
    for (double alpha : {0.5, 1.2}) {
      combos.push_back({1.0, alpha, gamma, 0.3, false});
      combos.push_back({0.8, alpha, gamma, -0.3, true});
    }
  }

  {  // beta in {1,2}: the reconstruction is exact in s, quadrature matches
     // the closed form to roundoff
    double worst = 0.0;
    for (const Combo& c : combos) {
      const PsiMap psi = c.log_psi
                             ? PsiMap::log({1.0, std::exp(1.0)})
                             : PsiMap::identity({0.0, 1.0});
      const OperatorSpec op(MLParams(c.rho, c.alpha, c.gamma, c.omega), psi);
      for (double beta : {1.0, 2.0}) {
        const double sa = psi(psi.a());
        auto f = [&psi, sa, beta](double t) {
          return std::pow(psi(t) - sa, beta - 1.0);
        };
        const SampledFunction fs = sample_uniform_s(psi, f, 400);
        for (int i = 1; i <= 20; ++i) {
          const double x =
              psi.inverse(sa + (psi(psi.b()) - sa) * i / 20.0);
          const double got = prabhakar_apply(op, fs, x);
          const double want = prabhakar_power(op, beta, x);
          worst = std::max(worst, rel_against(std::abs(got - want), want));
        }
      }
    }
    out.push_back(check("power.smooth_beta_accuracy", worst, 1e-6));
  }
  {  // nonsmooth powers: error drops by >= 2 per node doubling
    double worst_factor = std::numeric_limits<double>::infinity();
    for (const Combo& c : combos) {
      const double beta = c.alpha == 0.5 ? 1.5 : 3.0;
      const PsiMap psi = c.log_psi
                             ? PsiMap::log({1.0, std::exp(1.0)})
                             : PsiMap::identity({0.0, 1.0});
      const OperatorSpec op(MLParams(c.rho, c.alpha, c.gamma, c.omega), psi);
      const double sa = psi(psi.a());
      auto f = [&psi, sa, beta](double t) {
        return std::pow(psi(t) - sa, beta - 1.0);
      };
      std::vector<double> errs;
      for (int n : {200, 400, 800}) {
        const SampledFunction fs = sample_uniform_s(psi, f, n);
        double err = 0.0;
        for (int i = 1; i <= 10; ++i) {
          const double x =
              psi.inverse(sa + (psi(psi.b()) - sa) * i / 10.0);
          const double got = prabhakar_apply(op, fs, x);
          const double want = prabhakar_power(op, beta, x);
          err = std::max(err, rel_against(std::abs(got - want), want));
        }
        errs.push_back(err);
      }
      worst_factor = std::min(worst_factor, errs[0] / errs[1]);
      worst_factor = std::min(worst_factor, errs[1] / errs[2]);
    }
    std::ostringstream detail;
    detail << "smallest error-reduction factor per doubling: " << worst_factor;
    out.push_back(check_flag("power.nonsmooth_refinement_order",
                             worst_factor >= 2.0, detail.str()));
  }
  return out;
}

// ------------------------------------------------- semigroup / composition

struct ComposeSet {
  double rho, alpha, gamma, nu, sigma, omega;
  bool log_psi;
};

double compose_vs_fused(const ComposeSet& s, bool fused_third_is_sum,
                        bool outer_first, int grid_n) {
  const PsiMap psi = s.log_psi ? PsiMap::log({1.0, std::exp(1.0)})
                               : PsiMap::identity({0.0, 1.0});
  const OperatorSpec op1(MLParams(s.rho, s.alpha, s.gamma, s.omega), psi);
  const OperatorSpec op2(MLParams(s.rho, s.nu, s.sigma, s.omega), psi);
  const OperatorSpec fused(
      MLParams(s.rho, s.alpha + s.nu,
               fused_third_is_sum ? s.gamma + s.sigma : s.gamma, s.omega),
      psi);
  auto f = [&psi](double t) { return std::cos(psi(t)); };
  const SampledFunction fs = sample_uniform_s(psi, f, grid_n);

  const OperatorSpec& inner = outer_first ? op2 : op1;
  const OperatorSpec& outer = outer_first ? op1 : op2;
  const Array inner_vals = prabhakar_apply(inner, fs, fs.nodes);
  const SampledFunction gs(fs.nodes, inner_vals);

  const double sa = psi(psi.a());
  const double D = psi(psi.b()) - sa;
  Array x(20);
  for (int i = 0; i < 20; ++i) {
    x[i] = psi.inverse(sa + D * (0.05 + 0.95 * i / 19.0));
  }
  const Array composed = prabhakar_apply(outer, gs, x);
  const Array direct = prabhakar_apply(fused, fs, x);
  const double scale = direct.abs().maxCoeff();
  return (composed - direct).abs().maxCoeff() / scale;
}

std::vector<PropertyResult> suite_semigroup(Rng&) {
  const std::vector<ComposeSet> sets = {
      {1.0, 1.0, 1.0, 1.0, 1.0, 0.3, false},
      {0.8, 1.2, 2.0, 0.8, -1.0, -0.3, false},
      {1.2, 0.8, 0.5, 1.2, 1.5, 0.2, true},
      {1.0, 1.5, -1.0, 1.1, 2.0, 0.4, false},
  };
  double worst = 0.0;
  for (const ComposeSet& s : sets) {
    worst = std::max(worst, compose_vs_fused(s, true, false, 1600));
    worst = std::max(worst, compose_vs_fused(s, true, true, 1600));
  }
  return {check("semigroup.fused_equals_composed", worst, 1e-5)};
}

std::vector<PropertyResult> suite_composition(Rng&) {
  // RL composition: I^beta E^alpha = E^{alpha+beta} = E^alpha I^beta,
  // i.e. the nu-slot operator has a zero third parameter.
  const std::vector<ComposeSet> sets = {
      {1.0, 1.0, 1.0, 0.7, 0.0, 0.3, false},
      {0.8, 0.8, 2.0, 1.2, 0.0, -0.3, false},
      {1.2, 1.2, -1.0, 0.8, 0.0, 0.2, true},
      {1.0, 1.5, 0.5, 1.0, 0.0, 0.4, false},
  };
  double worst = 0.0;
  for (const ComposeSet& s : sets) {
    worst = std::max(worst, compose_vs_fused(s, true, false, 1600));
    worst = std::max(worst, compose_vs_fused(s, true, true, 1600));
  }
  return {check("composition.rl_both_orders", worst, 1e-5)};
}

// ---------------------------------------------------------- boundedness

std::vector<PropertyResult> suite_boundedness(Rng& rng) {
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
  // worst (|Ef|_nu - C |f|_nu) / (C |f|_nu) for three constants C: the flat
  // constant at nu = 0 and nu = 0.3, and the weight-corrected constant at
  // nu = 0.3
  double excess_nu0 = -std::numeric_limits<double>::infinity();
  double excess_flat = excess_nu0, excess_corrected = excess_nu0;
  for (const Config& c : configs) {
    const PsiMap psi = c.log_psi ? PsiMap::log({1.0, std::exp(1.0)})
                                 : PsiMap::identity({0.0, 1.0});
    const OperatorSpec op(MLParams(c.rho, c.alpha, c.gamma, c.omega), psi);
    const double M = bound_constant(op);
    const double M_nu = weighted_bound_constant(op, 0.3);
    for (int trial = 0; trial < 50; ++trial) {
      const SampledFunction f = sample_uniform_s(
          psi, poly_in_psi(psi, random_coefs(rng, 5)), 240);
      const Array ef = prabhakar_apply(op, f, f.nodes);
      const SampledFunction efs(f.nodes, ef);
      const double lhs0 = weighted_norm(efs, psi, 0.0);
      const double rhs0 = M * weighted_norm(f, psi, 0.0);
      excess_nu0 = std::max(excess_nu0, (lhs0 - rhs0) / rhs0);
      const double lhs3 = weighted_norm(efs, psi, 0.3);
      const double nf3 = weighted_norm(f, psi, 0.3);
      excess_flat = std::max(excess_flat, (lhs3 - M * nf3) / (M * nf3));
      excess_corrected =
          std::max(excess_corrected, (lhs3 - M_nu * nf3) / (M_nu * nf3));
    }
  }
  return {
      check("boundedness.norm_bound_nu0", excess_nu0, 1e-8,
            "largest (|Ef| - M|f|)/M|f| over draws"),
      // this check states the nu = 0.3 inequality with the same flat
      // constant M; the violation is real, M misses the per-term weight
      // factor Gamma(1-nu)Gamma(m+1)/Gamma(m+1-nu) (see the corrected
      // check below and weighted_bound_constant)
      check("boundedness.norm_bound_nu03_flat_constant", excess_flat, 1e-8,
            "known violation: the flat constant is too small for nu > 0"),
      check("boundedness.norm_bound_nu03_corrected", excess_corrected, 1e-8,
            "against weighted_bound_constant(op, 0.3)"),
  };
}

// --------------------------------------------------------------- cauchy

CauchyProblem acceptance_problem(const PsiMap& psi) {
  return CauchyProblem(
      0.7, 0.4, OperatorSpec(MLParams(1.0, 0.5, 1.0, 0.3), psi), {1.0},
      MLForcing{1.0, 1.2, 1.0});
}

std::vector<PropertyResult> suite_cauchy(Rng& rng) {
  std::vector<PropertyResult> out;
  const PsiMap psi01 = PsiMap::identity({0.0, 1.0});

  {  // lambda = 0: every Picard iterate equals u0 + I^beta f
    auto f = [](double x) { return std::cos(2.0 * x); };
    const CauchyProblem p(0.7, 0.0,
                          OperatorSpec(MLParams(1.0, 0.5, 1.0, 0.3), psi01),
                          {1.0}, GenericForcing{f});
    Array x(6);
    for (int i = 0; i < 6; ++i) x[i] = rng.uniform(0.0, 1.0);
    const Array u1 = picard_iterate(p, 1, x);
    const Array u4 = picard_iterate(p, 4, x);
    out.push_back(check("cauchy.picard.lambda0_fixed_point",
                        (u1 - u4).abs().maxCoeff(), 1e-12));
  }
  {  // lambda = 0 Volterra path returns u0 + I^beta f; the opaque callable
     // exercises the sampled-source branch
    const CauchyProblem p(0.7, 0.0,
                          OperatorSpec(MLParams(1.0, 0.5, 1.0, 0.3), psi01),
                          {1.0},
                          GenericForcing{[](double x) {
                            return std::cos(2.0 * x);
                          }});
    const SampledFunction u = volterra_solve(p, 400);
    const VolterraForm form = to_volterra(p, 400);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < u.nodes.size(); ++i) {
      worst = std::max(worst, std::abs(u.values[i] - form.source(u.nodes[i])));
    }
    out.push_back(check("cauchy.volterra.lambda0_source", worst, 1e-12));
  }
  {  // gamma = 0 homogeneous: u = sum_j lambda^j dpsi^{j(alpha+beta)} /
     // Gamma(j(alpha+beta)+1) against the closed form assembled termwise
    const CauchyProblem p(0.7, 0.4,
                          OperatorSpec(MLParams(1.0, 0.5, 0.0, 0.0), psi01),
                          {1.0}, ZeroForcing{});
    Array x(5);
    x << 0.2, 0.4, 0.6, 0.8, 1.0;
    SolveOptions opt;
    opt.rel_tol = 1e-15;
    const SeriesSolution sol = solve_particular(p, x, opt);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      double ref = 0.0;
      for (int j = 0; j < 80; ++j) {
        const double e = 1.2 * j;
        ref += std::pow(0.4, j) * std::pow(x[i], e) /
               std::exp(log_gamma(e + 1.0));
      }
      worst = std::max(worst, rel_against(std::abs(sol.u[i] - ref), ref));
    }
    out.push_back(check("cauchy.series.gamma0_closed_form", worst, 1e-12));
  }
  {  // quadrature series path on the ML forcing handed over as an opaque
     // callable agrees with the closed form
    const CauchyProblem p = acceptance_problem(psi01);
    const CauchyProblem generic(
        p.beta, p.lambda, p.op, p.b, GenericForcing{[](double x) {
          return std::pow(x, 0.2) * ml3(MLParams(1.0, 1.2, 1.0, 0.3), 0.3 * x);
        }});
    Array x(5);
    x << 0.2, 0.4, 0.6, 0.8, 1.0;
    SolveOptions opt;
    opt.grid_nodes = 4096;
    const SeriesSolution a = solve_particular(p, x, opt);
    const SeriesSolution b = solve_series(generic, x, opt);
    const double scale = a.u.abs().maxCoeff();
    out.push_back(check("cauchy.series.closed_vs_quadrature",
                        (a.u - b.u).abs().maxCoeff() / scale, 1e-4));
  }
  {  // Picard residual decreasing, and close to the series answer by m=8
    const CauchyProblem p = acceptance_problem(psi01);
    Array x(21);
    for (int i = 0; i < 21; ++i) x[i] = i / 20.0;
    const SeriesSolution sol = solve_particular(p, x);
    const double scale = sol.u.abs().maxCoeff();
    double prev = std::numeric_limits<double>::infinity();
    bool monotone = true;
    double final_gap = 0.0;
    for (int m = 1; m <= 8; ++m) {
      const double gap =
          (picard_iterate(p, m, x) - sol.u).abs().maxCoeff();
      if (m <= 6 && gap > prev * (1.0 + 1e-12)) monotone = false;
      prev = gap;
      final_gap = gap;
    }
    out.push_back(check_flag("cauchy.picard.monotone_decrease", monotone));
    out.push_back(check("cauchy.picard.m8_gap", final_gap / scale, 1e-6));
  }
  {  // series vs independent Volterra solver, quick instance
    const CauchyProblem p = acceptance_problem(psi01);
    const SampledFunction u = volterra_solve(p, 400);
    Array x(9);
    for (int i = 0; i < 9; ++i) x[i] = (i + 1) / 9.0;
    const SeriesSolution sol = solve_particular(p, x);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      worst = std::max(worst, std::abs(sol.u[i] - u.value_at(x[i])) /
                                  std::abs(sol.u[i]));
    }
    out.push_back(check("cauchy.cross.series_vs_volterra_400", worst, 1e-3));
  }
  {  // the Volterra residual of the series solution is small; u'' ~
     // dpsi^{beta-2} near the base point, so resampling needs a fine grid
    const CauchyProblem p = acceptance_problem(psi01);
    const Array xg = Array::LinSpaced(1601, 0.0, 1.0);
    const SeriesSolution sol = solve_particular(p, xg);
    const SampledFunction us(xg, sol.u);
    Array x(7);
    for (int i = 0; i < 7; ++i) x[i] = (i + 1) / 7.0;
    SolveOptions opt;
    opt.grid_nodes = 1600;
    const Array r = volterra_residual(p, us, x, opt);
    const double scale = sol.u.abs().maxCoeff();
    out.push_back(check("cauchy.residual.series_solution",
                        r.abs().maxCoeff() / scale, 1e-4));
  }
  return out;
}

// -------------------------------------------------------------- inverse

std::vector<PropertyResult> suite_inverse(Rng&) {
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
  return {check("inverse.left_inverse_identity", worst, 1e-3)};
}

}  // namespace

std::vector<std::string> verify_suites() {
  return {"special", "psi", "reduction", "linearity", "power",
          "semigroup", "composition", "boundedness", "cauchy", "inverse"};
}

std::vector<PropertyResult> run_verify(const std::string& suite,
                                       std::uint64_t seed) {
  Rng rng(seed);
  if (suite == "special") return suite_special(rng);
  if (suite == "psi") return suite_psi(rng);
  if (suite == "reduction") return suite_reduction(rng);
  if (suite == "linearity") return suite_linearity(rng);
  if (suite == "power") return suite_power(rng);
  if (suite == "semigroup") return suite_semigroup(rng);
  if (suite == "composition") return suite_composition(rng);
  if (suite == "boundedness") return suite_boundedness(rng);
  if (suite == "cauchy") return suite_cauchy(rng);
  if (suite == "inverse") return suite_inverse(rng);
  if (suite == "all") {
    std::vector<PropertyResult> all;
    for (const std::string& name : verify_suites()) {
      // each suite gets a fresh stream so adding checks to one suite
      // cannot silently change another suite's data
      std::vector<PropertyResult> part = run_verify(name, seed);
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  throw std::invalid_argument("unknown verify suite '" + suite + "'");
}

}  // namespace prabhakar
