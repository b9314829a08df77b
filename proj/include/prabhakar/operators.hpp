#pragma once

// Fractional integral operators with respect to an increasing map psi.
//
// The central object is the integral operator with kernel
//
//   psi'(t) (psi(x)-psi(t))^{alpha-1} E^{gamma}_{rho,alpha}[omega (psi(x)-psi(t))^rho]
//
// acting from the base point a.  It is evaluated as a series of weakly
// singular integrals: the kernel's Mittag-Leffler factor is expanded
// termwise and each term is a Riemann-Liouville integral of order
// rho k + alpha, computed by product integration of the piecewise-linear
// reconstruction of f in the variable s = psi(t) with exact moments.
// gamma = 0 truncates the expansion after its first term, so the plain
// fractional integral is the identical code path.

#include <Eigen/Dense>

#include <functional>

#include "prabhakar/psi.hpp"
#include "prabhakar/special.hpp"

namespace prabhakar {

using Array = Eigen::ArrayXd;

enum class Side { left, right };

// The operator: kernel parameters + reference map + side.
// Construction validates the parameter combination: alpha > 0, or
// alpha == 0 together with gamma == 0 (the identity operator), and the
// series envelope |omega| (psi(b)-psi(a))^rho <= series_envelope.
struct OperatorSpec {
  MLParams ml;
  PsiMap psi;
  Side side = Side::left;

  OperatorSpec(MLParams ml_, PsiMap psi_, Side side_ = Side::left);

  double a() const { return psi.a(); }
  double b() const { return psi.b(); }
};

// A function known at strictly increasing nodes in x.  Quadrature uses the
// nodes and values only; the optional callable serves the identity special
// case (alpha == 0) and evaluation-between-nodes conveniences.
struct SampledFunction {
  Array nodes;
  Array values;
  std::function<double(double)> callable;

  SampledFunction(Array nodes_, Array values_,
                  std::function<double(double)> callable_ = nullptr);

  // callable if present, otherwise linear interpolation between nodes.
  double value_at(double x) const;
};

// Samples f at n nodes uniformly spaced in s = psi(x) over psi's interval
// (node images under psi^{-1}), endpoints included.  n >= 2.
SampledFunction sample_uniform_s(const PsiMap& psi,
                                 const std::function<double(double)>& f,
                                 int n = 400);

// Aggregated quadrature diagnostics for a batch of evaluation points.
struct QuadratureReport {
  int min_segments = -1;   // fewest reconstruction segments under any point
  int max_terms = 0;       // largest kernel-series length used
  bool converged = true;   // kernel series converged at every point
  bool coarse = false;     // some point was covered by fewer than 8 segments
};

// E-operator applied to sampled data, evaluated at each x in [a, last
// node] (any order).  x == a gives exactly 0.  ctl supplies the
// kernel-series truncation control; per-point diagnostics are aggregated
// into rep.
Array prabhakar_apply(const OperatorSpec& op, const SampledFunction& f,
                      const Array& x, SeriesControl ctl = {},
                      QuadratureReport* rep = nullptr);
double prabhakar_apply(const OperatorSpec& op, const SampledFunction& f,
                       double x, SeriesControl ctl = {},
                       QuadratureReport* rep = nullptr);

// Plain fractional integral of order alpha > 0 with respect to psi: the
// gamma = 0 (single-term) instance of prabhakar_apply, same code path.
Array rl_apply(const PsiMap& psi, double alpha, const SampledFunction& f,
               const Array& x, SeriesControl ctl = {},
               QuadratureReport* rep = nullptr);
double rl_apply(const PsiMap& psi, double alpha, const SampledFunction& f,
                double x, SeriesControl ctl = {},
                QuadratureReport* rep = nullptr);

// Closed forms on the power family (psi(t)-psi(a))^{beta-1}, beta > 0:
//   I^alpha:  Gamma(beta)/Gamma(alpha+beta) (psi(x)-psi(a))^{alpha+beta-1}
//   E-op:     Gamma(beta) (psi(x)-psi(a))^{alpha+beta-1}
//                * E^gamma_{rho,alpha+beta}[omega (psi(x)-psi(a))^rho]
// For side == right the roles of the endpoints swap.
double rl_power(const PsiMap& psi, double alpha, double beta, double x,
                Side side = Side::left);
double prabhakar_power(const OperatorSpec& op, double beta, double x,
                       SeriesControl ctl = {});

// Caputo-type derivative of noninteger order beta > 0 with respect to psi:
// the fractional integral of order n - beta (n = floor(beta) + 1) of the
// n-th psi-derivative f_psi^[n] = ((1/psi') d/dx)^n f.
struct CaputoOptions {
  int nodes = 400;            // grid for the order n - beta integral
  double step_scale = 1e-4;   // FD step = step_scale * (psi(b) - psi(a))
  // exact f_psi^[n], bypassing finite differences, if available
  std::function<double(double)> psi_derivative_n;
  SeriesControl series;
};
Array caputo_apply(const PsiMap& psi, double beta,
                   const std::function<double(double)>& f, const Array& x,
                   const CaputoOptions& opt = {});

// Operator norm bound on the weighted sup-norm space:
//   M = |(psi(b)-psi(a))^alpha E^gamma_{rho,alpha+1}[omega (psi(b)-psi(a))^rho]|
double bound_constant(const OperatorSpec& op);

// Sharper bound for the nu-weighted norm, nu in [0, 1):
//   M_nu = Gamma(1-nu) sum_k |(gamma)_k omega^k| D^{rho k+alpha}
//          / (k! Gamma(rho k+alpha+1-nu)),   D = psi(b)-psi(a).
// Derived by bounding |f(t)| <= ||f||_nu (psi(t)-psi(a))^{-nu} and
// integrating the weight exactly (a beta integral per series term).  M_nu
// is what the nu-weighted inequality actually requires: bound_constant is
// the nu = 0 case (when the kernel series has one sign) and is too small
// for nu > 0 by the factor Gamma(1-nu) Gamma(m+1)/Gamma(m+1-nu) per term.
double weighted_bound_constant(const OperatorSpec& op, double nu,
                               SeriesControl ctl = {});

// Weighted sup-norm max |(psi(x)-psi(a))^nu f(x)| over the sample nodes,
// nu in [0, 1).
double weighted_norm(const SampledFunction& f, const PsiMap& psi, double nu);

// Left inverse of the E-operator of order mu: a Caputo derivative of
// noninteger order alpha_d > mu composed with the E-operator of order
// alpha_d - mu and negated third parameter,
//   D = caputo^{alpha_d} o E^{-gamma}_{rho, alpha_d - mu, omega}.
struct InverseSpec {
  MLParams ml;      // rho, mu (in the alpha slot), gamma, omega being inverted
  PsiMap psi;
  double alpha_d;   // differentiation order: noninteger, > ml.alpha

  InverseSpec(MLParams ml_, PsiMap psi_, double alpha_d_);
};
struct InverseOptions {
  int nodes = 400;  // grid for the inner E-operator quadrature
  CaputoOptions caputo;
};
Array inverse_apply(const InverseSpec& spec,
                    const std::function<double(double)>& f, const Array& x,
                    const InverseOptions& opt = {});

}  // namespace prabhakar
