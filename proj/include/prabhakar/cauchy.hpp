#pragma once

// Cauchy problems for the Caputo-type derivative with the E-operator on the
// right-hand side,
//
//   d^{beta}_psi u(x) = lambda (E u)(x) + f(x),   u^[i]_psi(a) = b_i,
//
// i = 0..n-1, n = floor(beta)+1.  Provided are: the equivalent Volterra
// second-kind form, successive approximations (kept symbolically as
// power-times-Mittag-Leffler terms, which the fused integrate-then-apply
// step maps to terms of the same family), the closed-form series solution,
// and an independent product-integration Volterra solver used for
// cross-validation.

#include <functional>
#include <variant>
#include <vector>

#include "prabhakar/operators.hpp"

namespace prabhakar {

struct ZeroForcing {};

// c (psi(x)-psi(a))^{delta-1}, delta > 0
struct PowerForcing {
  double c;
  double delta;
};

// xi (psi(x)-psi(a))^{mu-1} E^{sigma}_{rho,mu}[omega (psi(x)-psi(a))^rho],
// mu > 0, sharing rho and omega with the operator
struct MLForcing {
  double xi;
  double mu;
  double sigma;
};

struct GenericForcing {
  std::function<double(double)> f;
};

using Forcing = std::variant<ZeroForcing, PowerForcing, MLForcing,
                             GenericForcing>;

struct CauchyProblem {
  double beta;              // noninteger, > 0
  double lambda;
  OperatorSpec op;          // E-operator on the right-hand side (left-sided)
  std::vector<double> b;    // initial psi-derivatives, exactly n entries
  Forcing forcing;

  CauchyProblem(double beta_, double lambda_, OperatorSpec op_,
                std::vector<double> b_, Forcing forcing_);

  int n() const { return int(b.size()); }

  // Initial-data polynomial sum_i b_i (psi(x)-psi(a))^i / i!
  double u0(double x) const;
};

struct SolveOptions {
  int j_max = 60;           // cap on the outer series index
  double rel_tol = 1e-12;   // outer truncation target, relative
  int grid_nodes = 400;     // quadrature grid when the forcing needs one
  SeriesControl series;     // inner kernel-series control
};

// The equivalent second-kind Volterra equation
//   u = source + lambda K u,  K the E-operator of order alpha+beta.
struct VolterraForm {
  MLParams kernel;
  PsiMap psi;
  double lambda;
  std::function<double(double)> source;  // u0 + I^beta f
};
VolterraForm to_volterra(const CauchyProblem& p, int grid_nodes = 400);

// m-th successive approximation u^(m) evaluated at x.  Closed-form forcings
// evolve symbolically (exact in the term algebra); a generic forcing falls
// back to grid iteration with options.grid_nodes nodes.
Array picard_iterate(const CauchyProblem& p, int m, const Array& x,
                     const SolveOptions& options = {});

struct SeriesSolution {
  Array x;
  Array u;
  int outer_terms = 0;      // outer j-terms summed
  bool converged = true;
  double last_term = 0.0;   // sup over x of the final outer increment
};

// Series solution for any forcing.  Zero/power/ML forcings evolve exactly
// in the term algebra (agreeing with solve_particular); a generic forcing
// is sampled once and integrated by quadrature per outer term.
SeriesSolution solve_series(const CauchyProblem& p, const Array& x,
                            const SolveOptions& options = {});

// Fully closed-form solution for zero/power/ML forcings: both the
// homogeneous and forcing parts reduce to power-times-Mittag-Leffler terms.
SeriesSolution solve_particular(const CauchyProblem& p, const Array& x,
                                const SolveOptions& options = {});

// Product-integration forward substitution on a grid of `nodes` points
// uniform in s = psi(x).  Independent of the series solution path: the
// kernel is quadratured, never expanded in closed form.  The source
// u0 + I^beta f is exact for zero/power/ML forcings and quadratured for a
// generic one.  Throws on a near-singular step |1 - lambda B_i| < 1e-12.
SampledFunction volterra_solve(const CauchyProblem& p, int nodes = 800,
                               SeriesControl ctl = {},
                               QuadratureReport* rep = nullptr);

// Residual of a candidate solution in the Volterra form,
//   r(x) = u(x) - source(x) - lambda (K u)(x),
// evaluated with the public operator quadrature.
Array volterra_residual(const CauchyProblem& p, const SampledFunction& u,
                        const Array& x, const SolveOptions& options = {});

}  // namespace prabhakar
