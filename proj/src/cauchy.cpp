#include "prabhakar/cauchy.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "abel.hpp"

namespace prabhakar {

namespace {

// c * dpsi^{A-1} E^{g}_{rho,A}[omega dpsi^rho] with c supplied by the
// caller.  Summed through the log-space ladder, so the power and the
// Mittag-Leffler factor never materialize separately and wide intervals
// cannot overflow intermediates.
double power_ml_term(double rho, double A, double g, double omega,
                     double dpsi, const SeriesControl& ctl) {
  if (dpsi == 0.0) {
    if (A > 1.0) return 0.0;
    if (A == 1.0) return 1.0;  // dpsi^0 E^g_{rho,1}(0) = 1/Gamma(1)
    return std::numeric_limits<double>::infinity();
  }
  detail::CoeffLadder ladder(MLParams(rho, A, g, omega), std::log(dpsi));
  double sum = ladder.value();
  double prev_mag = std::abs(sum);
  for (int k = 1; k < ctl.max_terms; ++k) {
    ladder.advance();
    if (ladder.terminated()) break;
    const double term = ladder.value();
    sum += term;
    const double mag = std::abs(term);
    if (mag <= ctl.rel_tol * std::max(std::abs(sum), 1e-300) &&
        mag <= prev_mag) {
      break;
    }
    prev_mag = mag;
  }
  return sum / dpsi;
}

bool forcing_is_zero(const Forcing& f) {
  return std::holds_alternative<ZeroForcing>(f);
}

// Forcing evaluated at a point (finite wherever the parameters allow).
double forcing_value(const CauchyProblem& p, double x) {
  const double dpsi = p.op.psi(x) - p.op.psi(p.op.psi.a());
  if (std::holds_alternative<ZeroForcing>(p.forcing)) return 0.0;
  if (const auto* pf = std::get_if<PowerForcing>(&p.forcing)) {
    return pf->c * std::pow(dpsi, pf->delta - 1.0);
  }
  if (const auto* mf = std::get_if<MLForcing>(&p.forcing)) {
    return mf->xi * power_ml_term(p.op.ml.rho, mf->mu, mf->sigma,
                                  p.op.ml.omega, dpsi, SeriesControl{});
  }
  return std::get<GenericForcing>(p.forcing).f(x);
}

// One summand of a successive approximation / series solution:
// coef * dpsi^{A-1} E^{g}_{rho,A}[omega dpsi^rho].
struct Term {
  double coef;
  double A;
  double g;
};

std::vector<Term> initial_terms(const CauchyProblem& p) {
  std::vector<Term> t;
  for (int i = 0; i < p.n(); ++i) {
    if (p.b[i] != 0.0) t.push_back({p.b[i], double(i) + 1.0, 0.0});
  }
  return t;
}

// I^beta applied to the forcing, as terms of the same family.
std::vector<Term> forced_terms(const CauchyProblem& p) {
  std::vector<Term> t;
  if (const auto* pf = std::get_if<PowerForcing>(&p.forcing)) {
    t.push_back({pf->c * std::exp(log_gamma(pf->delta)),
                 pf->delta + p.beta, 0.0});
  } else if (const auto* mf = std::get_if<MLForcing>(&p.forcing)) {
    t.push_back({mf->xi, mf->mu + p.beta, mf->sigma});
  }
  return t;
}

double eval_terms(const std::vector<Term>& terms, const CauchyProblem& p,
                  double dpsi, const SeriesControl& ctl) {
  double acc = 0.0;
  for (const Term& t : terms) {
    acc += t.coef *
           power_ml_term(p.op.ml.rho, t.A, t.g, p.op.ml.omega, dpsi, ctl);
  }
  return acc;
}

}  // namespace

CauchyProblem::CauchyProblem(double beta_, double lambda_, OperatorSpec op_,
                             std::vector<double> b_, Forcing forcing_)
    : beta(beta_), lambda(lambda_), op(std::move(op_)), b(std::move(b_)),
      forcing(std::move(forcing_)) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("CauchyProblem: requires finite beta > 0");
  }
  if (beta == std::floor(beta)) {
    throw std::invalid_argument(
        "CauchyProblem: integer beta reduces to an ordinary problem, "
        "not supported");
  }
  if (!std::isfinite(lambda)) {
    throw std::invalid_argument("CauchyProblem: lambda must be finite");
  }
  if (op.side != Side::left) {
    throw std::invalid_argument("CauchyProblem: requires a left-sided operator");
  }
  const int n = int(std::floor(beta)) + 1;
  if (int(b.size()) != n) {
    throw std::invalid_argument(
        "CauchyProblem: b must have exactly floor(beta)+1 entries");
  }
  for (double bi : b) {
    if (!std::isfinite(bi)) {
      throw std::invalid_argument("CauchyProblem: b entries must be finite");
    }
  }
  if (const auto* pf = std::get_if<PowerForcing>(&forcing)) {
    if (!(pf->delta > 0.0) || !std::isfinite(pf->c)) {
      throw std::invalid_argument(
          "CauchyProblem: power forcing requires delta > 0 and finite c");
    }
  } else if (const auto* mf = std::get_if<MLForcing>(&forcing)) {
    if (!(mf->mu > 0.0) || !std::isfinite(mf->xi) ||
        !std::isfinite(mf->sigma)) {
      throw std::invalid_argument(
          "CauchyProblem: ML forcing requires mu > 0 and finite xi, sigma");
    }
  } else if (const auto* gf = std::get_if<GenericForcing>(&forcing)) {
    if (!gf->f) {
      throw std::invalid_argument(
          "CauchyProblem: generic forcing requires a callable");
    }
  }
}

double CauchyProblem::u0(double x) const {
  const double dpsi = op.psi(x) - op.psi(op.psi.a());
  double acc = 0.0;
  double pw = 1.0;
  double fact = 1.0;
  for (int i = 0; i < n(); ++i) {
    if (i > 0) {
      pw *= dpsi;
      fact *= i;
    }
    acc += b[i] * pw / fact;
  }
  return acc;
}

VolterraForm to_volterra(const CauchyProblem& p, int grid_nodes) {
  VolterraForm v{MLParams(p.op.ml.rho, p.op.ml.alpha + p.beta, p.op.ml.gamma,
                          p.op.ml.omega),
                 p.op.psi, p.lambda, nullptr};
  const PsiMap psi = p.op.psi;
  const CauchyProblem prob = p;
  if (forcing_is_zero(p.forcing)) {
    v.source = [prob](double x) { return prob.u0(x); };
  } else if (std::holds_alternative<GenericForcing>(p.forcing)) {
    auto fs = std::make_shared<SampledFunction>(sample_uniform_s(
        psi, [prob](double x) { return forcing_value(prob, x); }, grid_nodes));
    const double beta = p.beta;
    v.source = [prob, fs, psi, beta](double x) {
      return prob.u0(x) + rl_apply(psi, beta, *fs, x);
    };
  } else {
    // I^beta f is exact in the term algebra for the power and ML families.
    // Reconstructing f on the grid instead would cost O(h^{min(2,e)}) with
    // e the leading forcing exponent, since the psi-derivative of f blows
    // up at the base point for e < 2, and that would dominate the solver
    // error (and for e < 1 the reconstruction cannot represent f at all).
    const std::vector<Term> ft = forced_terms(p);
    v.source = [prob, ft](double x) {
      const double dpsi = prob.op.psi(x) - prob.op.psi(prob.op.psi.a());
      return prob.u0(x) + eval_terms(ft, prob, dpsi, SeriesControl{});
    };
  }
  return v;
}

Array picard_iterate(const CauchyProblem& p, int m, const Array& x,
                     const SolveOptions& options) {
  if (m < 0) throw std::invalid_argument("picard_iterate: m must be >= 0");
  const double AB = p.op.ml.alpha + p.beta;
  const double sa = p.op.psi(p.op.psi.a());

  if (!std::holds_alternative<GenericForcing>(p.forcing)) {
    // Symbolic path: each fused step maps a term {c, A, g} to
    // {lambda c, A+alpha+beta, g+gamma}; the iterate is the union of the
    // freshly added initial and forcing terms with the mapped previous list.
    const std::vector<Term> base = initial_terms(p);
    const std::vector<Term> forced = forced_terms(p);
    std::vector<Term> terms = base;
    for (int it = 1; it <= m; ++it) {
      std::vector<Term> next = base;
      for (Term t : terms) {
        t.coef *= p.lambda;
        t.A += AB;
        t.g += p.op.ml.gamma;
        next.push_back(t);
      }
      next.insert(next.end(), forced.begin(), forced.end());
      terms.swap(next);
    }
    Array out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double dpsi = p.op.psi(x[i]) - sa;
      out[i] = eval_terms(terms, p, dpsi, options.series);
    }
    return out;
  }

  // Grid path for a generic forcing.
  const OperatorSpec fused(MLParams(p.op.ml.rho, AB, p.op.ml.gamma,
                                    p.op.ml.omega),
                           p.op.psi);
  const auto& f = std::get<GenericForcing>(p.forcing).f;
  const SampledFunction fs =
      sample_uniform_s(p.op.psi, f, options.grid_nodes);
  Array grid_x = fs.nodes;
  Array u0g(grid_x.size()), ibf(grid_x.size());
  for (Eigen::Index i = 0; i < grid_x.size(); ++i) u0g[i] = p.u0(grid_x[i]);
  ibf = rl_apply(p.op.psi, p.beta, fs, grid_x, options.series);
  Array cur = u0g;
  for (int it = 1; it <= m; ++it) {
    SampledFunction us(grid_x, cur);
    cur = u0g + ibf + p.lambda *
          prabhakar_apply(fused, us, grid_x, options.series);
  }
  SampledFunction um(grid_x, cur);
  Array out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = um.value_at(x[i]);
  return out;
}

namespace {

// Shared outer loop of the two series solvers.  hom_term(j, dpsi) and
// forc_term(j) produce the j-th outer increments (forc_term returns a whole
// array over x); stop when the sup increment is below rel_tol relative to
// the partial sums and no longer growing.
SeriesSolution sum_outer(const CauchyProblem& p, const Array& x,
                         const SolveOptions& options,
                         const std::function<double(int, double)>& hom_term,
                         const std::function<Array(int)>& forc_term) {
  const double sa = p.op.psi(p.op.psi.a());
  Array dpsi(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) dpsi[i] = p.op.psi(x[i]) - sa;

  SeriesSolution sol;
  sol.x = x;
  sol.u = Array::Zero(x.size());
  sol.converged = false;
  double prev_inc = std::numeric_limits<double>::infinity();
  for (int j = 0; j <= options.j_max; ++j) {
    Array inc = forc_term(j);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      inc[i] += hom_term(j, dpsi[i]);
    }
    sol.u += inc;
    sol.outer_terms = j + 1;
    const double mag = inc.abs().maxCoeff();
    sol.last_term = mag;
    const double scale = std::max(sol.u.abs().maxCoeff(), 1e-300);
    if (j > 0 && mag <= options.rel_tol * scale && mag <= prev_inc) {
      sol.converged = true;
      break;
    }
    prev_inc = mag;
  }
  return sol;
}

}  // namespace

SeriesSolution solve_series(const CauchyProblem& p, const Array& x,
                            const SolveOptions& options) {
  const double AB = p.op.ml.alpha + p.beta;
  const double rho = p.op.ml.rho;
  const double gamma = p.op.ml.gamma;
  const double omega = p.op.ml.omega;

  // lambda^j walked incrementally by both increment producers.
  auto lam_pow = std::make_shared<std::pair<int, double>>(0, 1.0);
  auto lam_at = [lam = p.lambda, lam_pow](int j) {
    if (j == 0) *lam_pow = {0, 1.0};
    while (lam_pow->first < j) {
      lam_pow->second *= lam;
      ++lam_pow->first;
    }
    return lam_pow->second;
  };

  auto hom = [&p, AB, rho, gamma, omega, lam_at, &options](int j,
                                                           double dpsi) {
    const double lj = lam_at(j);
    if (lj == 0.0 && j > 0) return 0.0;
    double acc = 0.0;
    for (int i = 0; i < p.n(); ++i) {
      if (p.b[i] == 0.0) continue;
      acc += p.b[i] * power_ml_term(rho, j * AB + i + 1.0, j * gamma, omega,
                                    dpsi, options.series);
    }
    return lj * acc;
  };

  std::function<Array(int)> forc;
  if (forcing_is_zero(p.forcing)) {
    forc = [&x](int) { return Array::Zero(x.size()).eval(); };
  } else if (std::holds_alternative<GenericForcing>(p.forcing)) {
    auto fs = std::make_shared<SampledFunction>(sample_uniform_s(
        p.op.psi, [&p](double xx) { return forcing_value(p, xx); },
        options.grid_nodes));
    forc = [&, fs](int j) {
      const double lj = lam_at(j);
      if (lj == 0.0 && j > 0) return Array::Zero(x.size()).eval();
      const OperatorSpec oj(MLParams(rho, j * AB + p.beta, j * gamma, omega),
                            p.op.psi);
      return (lj * prabhakar_apply(oj, *fs, x, options.series)).eval();
    };
  } else {
    // power/ML forcings map through the j-th fused integral exactly in the
    // term algebra; quadrature is only needed for an opaque callable
    const std::vector<Term> ft = forced_terms(p);
    const double sa = p.op.psi(p.op.psi.a());
    forc = [&, ft, sa](int j) {
      const double lj = lam_at(j);
      Array out = Array::Zero(x.size());
      if (lj == 0.0 && j > 0) return out;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double dpsi = p.op.psi(x[i]) - sa;
        for (const Term& t : ft) {
          out[i] += lj * t.coef *
                    power_ml_term(rho, j * AB + t.A, j * gamma + t.g, omega,
                                  dpsi, options.series);
        }
      }
      return out;
    };
  }

  return sum_outer(p, x, options, hom, forc);
}

SeriesSolution solve_particular(const CauchyProblem& p, const Array& x,
                                const SolveOptions& options) {
  if (std::holds_alternative<GenericForcing>(p.forcing)) {
    throw std::invalid_argument(
        "solve_particular: requires a zero, power, or ML forcing");
  }
  const double AB = p.op.ml.alpha + p.beta;
  const double rho = p.op.ml.rho;
  const double gamma = p.op.ml.gamma;
  const double omega = p.op.ml.omega;
  const std::vector<Term> ft = forced_terms(p);
  const double sa = p.op.psi(p.op.psi.a());

  auto lam_pow = std::make_shared<std::pair<int, double>>(0, 1.0);
  auto lam_at = [lam = p.lambda, lam_pow](int j) {
    if (j == 0) *lam_pow = {0, 1.0};
    while (lam_pow->first < j) {
      lam_pow->second *= lam;
      ++lam_pow->first;
    }
    return lam_pow->second;
  };

  auto hom = [&p, AB, rho, gamma, omega, lam_at, &options](int j,
                                                           double dpsi) {
    const double lj = lam_at(j);
    if (lj == 0.0 && j > 0) return 0.0;
    double acc = 0.0;
    for (int i = 0; i < p.n(); ++i) {
      if (p.b[i] == 0.0) continue;
      acc += p.b[i] * power_ml_term(rho, j * AB + i + 1.0, j * gamma, omega,
                                    dpsi, options.series);
    }
    return lj * acc;
  };
  auto forc = [&, ft, sa](int j) {
    const double lj = lam_at(j);
    Array out = Array::Zero(x.size());
    if (lj == 0.0 && j > 0) return out;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double dpsi = p.op.psi(x[i]) - sa;
      for (const Term& t : ft) {
        out[i] += lj * t.coef *
                  power_ml_term(rho, j * AB + t.A, j * gamma + t.g, omega,
                                dpsi, options.series);
      }
    }
    return out;
  };

  return sum_outer(p, x, options, hom, forc);
}

SampledFunction volterra_solve(const CauchyProblem& p, int nodes,
                               SeriesControl ctl, QuadratureReport* rep) {
  if (nodes < 3) {
    throw std::invalid_argument("volterra_solve: needs at least 3 nodes");
  }
  const PsiMap& psi = p.op.psi;
  const double sa = psi(psi.a());
  const double D = psi(psi.b()) - sa;
  const double logD = std::log(D);
  const MLParams kernel(p.op.ml.rho, p.op.ml.alpha + p.beta, p.op.ml.gamma,
                        p.op.ml.omega);
  const VolterraForm form = to_volterra(p, nodes);

  Array shat(nodes), xg(nodes), source(nodes);
  for (int j = 0; j < nodes; ++j) {
    shat[j] = double(j) / (nodes - 1);
    xg[j] = j == 0 ? psi.a()
            : j == nodes - 1 ? psi.b()
                             : psi.inverse(sa + shat[j] * D);
    source[j] = form.source(xg[j]);
  }

  Array u(nodes), v(nodes);
  u[0] = v[0] = source[0];
  detail::MomentSum msA, msB;
  Array btwo(2), bval(2);
  bval << 0.0, 1.0;
  QuadratureReport agg;
  agg.min_segments = nodes - 1;
  for (int i = 1; i < nodes; ++i) {
    v[i] = u[i - 1];  // unknown slot pinned so the straddle slope drops out
    const double S = shat[i];
    msA.reset(shat.head(i + 1), v.head(i + 1), S, kernel.rho, kernel.alpha);
    btwo << shat[i - 1], shat[i];
    msB.reset(btwo, bval, S, kernel.rho, kernel.alpha);

    detail::CoeffLadder ladder(kernel, logD);
    double A = 0.0, B = 0.0;
    double prevA = std::numeric_limits<double>::infinity();
    double prevB = prevA;
    bool converged = false;
    int used = 0;
    for (int k = 0; k < ctl.max_terms; ++k) {
      if (k > 0) {
        ladder.advance();
        if (ladder.terminated()) {
          converged = true;
          break;
        }
      }
      const double c = ladder.value();
      const double tA = c * msA.next();
      const double tB = c * msB.next();
      A += tA;
      B += tB;
      used = k + 1;
      const double mA = std::abs(tA), mB = std::abs(tB);
      if (k > 0 &&
          mA <= ctl.rel_tol * std::max(std::abs(A), 1e-300) && mA <= prevA &&
          mB <= ctl.rel_tol * std::max(std::abs(B), 1e-300) && mB <= prevB) {
        converged = true;
        break;
      }
      prevA = mA;
      prevB = mB;
    }
    agg.max_terms = std::max(agg.max_terms, used);
    agg.converged = agg.converged && converged;

    const double denom = 1.0 - p.lambda * B;
    if (std::abs(denom) < 1e-12) {
      throw std::runtime_error(
          "volterra_solve: near-singular step, |1 - lambda B| < 1e-12");
    }
    u[i] = (source[i] + p.lambda * (A - u[i - 1] * B)) / denom;
    v[i] = u[i];
  }
  if (rep) *rep = agg;
  return SampledFunction(std::move(xg), std::move(u));
}

Array volterra_residual(const CauchyProblem& p, const SampledFunction& u,
                        const Array& x, const SolveOptions& options) {
  const VolterraForm form = to_volterra(p, options.grid_nodes);
  const OperatorSpec kop(form.kernel, form.psi);
  const Array ku = prabhakar_apply(kop, u, x, options.series);
  Array r(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    r[i] = u.value_at(x[i]) - form.source(x[i]) - p.lambda * ku[i];
  }
  return r;
}

}  // namespace prabhakar
