#pragma once

// Scalar special functions underpinning the operator kernels: log-gamma,
// the Pochhammer symbol, the beta function, and the three-parameter
// Mittag-Leffler function
//
//   E^g_{r,a}(z) = sum_{k>=0} (g)_k z^k / (Gamma(r k + a) k!)
//
// evaluated by direct series summation with log-space magnitude tracking.

namespace prabhakar {

// Parameter block (rho, alpha, gamma, omega) shared by the kernel
//   (psi(x)-psi(t))^{alpha-1} E^{gamma}_{rho,alpha}[omega (psi(x)-psi(t))^rho].
// rho must be positive and alpha nonnegative; gamma and omega are free.
// alpha == 0 is only meaningful combined with gamma == 0 (identity operator)
// and is rejected by the bare series evaluator.
struct MLParams {
  double rho;
  double alpha;
  double gamma;
  double omega = 0.0;

  MLParams(double rho_, double alpha_, double gamma_, double omega_ = 0.0);
};

// Truncation control and per-call diagnostics for series summation.
// Terms are added until the next term is below rel_tol in magnitude relative
// to the running sum and the terms are decreasing, or max_terms is reached.
// Non-convergence is reported through `converged`, never thrown.
struct SeriesControl {
  double rel_tol = 1e-14;
  int max_terms = 1000;

  int terms_used = 0;
  bool converged = false;
};

// Largest |omega| (psi(b)-psi(a))^rho the series evaluation is rated for.
// Operator entry points reject arguments outside this envelope.
inline constexpr double series_envelope = 50.0;

// Natural log of Gamma(x) for x > 0.
// Relative accuracy ~1e-14 or better on [1e-3, 1e4].
double log_gamma(double x);

// Rising factorial (g)_k = g (g+1) ... (g+k-1), with (g)_0 = 1.
// Computed as a plain product so that nonpositive integer g yields exact
// zeros from some k on (this is what truncates the series for gamma <= 0).
double pochhammer(double g, int k);

// B(x, y) = Gamma(x) Gamma(y) / Gamma(x + y) for x, y > 0, via log_gamma.
double beta_fn(double x, double y);

// E^{p.gamma}_{p.rho, p.alpha}(z).  p.omega is not consulted; z is the full
// argument.  Requires p.alpha > 0.  Diagnostics land in ctl.
double ml3(const MLParams& p, double z, SeriesControl& ctl);

// Same with default control, diagnostics discarded.
double ml3(const MLParams& p, double z);

}  // namespace prabhakar
