#pragma once

// Product-integration engine shared by the operator evaluators and the
// Volterra solver.  All abscissae are scaled to shat = (psi(x)-psi(a))/D
// with D = psi(b)-psi(a), so segment powers stay in [0,1]; the factor
// D^{rho k + alpha} rides inside the log-space coefficient ladder.  This is
// what keeps wide intervals (psi = exp) overflow-free.

#include <Eigen/Dense>

#include <cmath>

#include "prabhakar/special.hpp"

namespace prabhakar::detail {

// Walks c_k = (g)_k omega^k D^{rho k+alpha} / (k! Gamma(rho k+alpha)) in
// sign + log-magnitude form.  A Pochhammer zero (or omega == 0) terminates
// the ladder: every later coefficient is exactly zero, which is why the
// gamma = 0 operator is bit-identical to the plain fractional integral.
class CoeffLadder {
 public:
  CoeffLadder(const MLParams& p, double logD)
      : rho_(p.rho), gamma_(p.gamma), omega_(p.omega), logD_(logD),
        log_mag_(p.alpha * logD - log_gamma(p.alpha)), alpha_(p.alpha) {}

  int k() const { return k_; }
  bool terminated() const { return terminated_; }
  double value() const {
    return terminated_ ? 0.0 : sign_ * std::exp(log_mag_);
  }

  void advance() {
    const double factor = gamma_ + k_;
    const double a_k = rho_ * k_ + alpha_;
    ++k_;
    if (factor == 0.0 || omega_ == 0.0) {
      terminated_ = true;
      return;
    }
    log_mag_ += std::log(std::abs(factor)) + std::log(std::abs(omega_)) +
                rho_ * logD_ - std::log(double(k_)) + log_gamma(a_k) -
                log_gamma(a_k + rho_);
    if (factor < 0.0) sign_ = -sign_;
    if (omega_ < 0.0) sign_ = -sign_;
  }

 private:
  double rho_, gamma_, omega_, logD_;
  double log_mag_;
  double alpha_;
  double sign_ = 1.0;
  int k_ = 0;
  bool terminated_ = false;
};

// Per-evaluation-point moment sums of the piecewise-linear reconstruction
// against (Shat - s)^{A-1} for the exponent sequence A_k = rho k + alpha:
//
//   T_k = sum_j [ f_j M0_jk + slope_j M1_jk ],
//   M0  = (u0^A - u1^A)/A,
//   M1  = u0 M0 - (u0^{A+1} - u1^{A+1})/(A+1),
//   u0  = Shat - s_j,  u1 = max(Shat - s_{j+1}, 0).
//
// A segment straddling Shat is integrated up to Shat with its full-segment
// slope, i.e. the reconstruction is evaluated where the data exist and the
// integral stops exactly at the evaluation point.  Successive exponents
// reuse u^{A_{k+1}} = u^{A_k} u^rho, so each point costs O(segments) pow
// calls total plus O(segments) multiplies per series term.
class MomentSum {
 public:
  // shat: scaled node positions (ascending); f: values there; Shat: scaled
  // evaluation point.  Only segments starting strictly below Shat matter.
  void reset(const Eigen::Ref<const Eigen::ArrayXd>& shat,
             const Eigen::Ref<const Eigen::ArrayXd>& f, double Shat,
             double rho, double alpha) {
    using Eigen::ArrayXd;
    int m = 0;
    while (m + 1 < shat.size() && shat[m] < Shat) ++m;
    m_ = m;
    if (m_ == 0) return;
    u0_ = Shat - shat.head(m_);
    u1_ = (Shat - shat.segment(1, m_)).max(0.0);
    p0_ = u0_.pow(alpha);
    p1_ = u1_.pow(alpha);
    w0_ = u0_.pow(rho);
    w1_ = u1_.pow(rho);
    fv_ = f.head(m_);
    slope_ = (f.segment(1, m_) - f.head(m_)) /
             (shat.segment(1, m_) - shat.head(m_));
    A_ = alpha;
    rho_ = rho;
  }

  int segments() const { return m_; }

  // T_k for the current exponent, then steps the powers to the next one.
  double next() {
    if (m_ == 0) return 0.0;
    const Eigen::ArrayXd m0 = (p0_ - p1_) / A_;
    const Eigen::ArrayXd m1 = u0_ * m0 - (p0_ * u0_ - p1_ * u1_) / (A_ + 1.0);
    const double t = (fv_ * m0 + slope_ * m1).sum();
    p0_ *= w0_;
    p1_ *= w1_;
    A_ += rho_;
    return t;
  }

 private:
  Eigen::ArrayXd u0_, u1_, w0_, w1_, p0_, p1_, fv_, slope_;
  double A_ = 1.0, rho_ = 1.0;
  int m_ = 0;
};

struct PointResult {
  double value = 0.0;
  int terms = 0;
  bool converged = true;
  int segments = 0;
};

// One evaluation of the kernel series sum_k c_k T_k at scaled point Shat.
// Stopping mirrors the scalar Mittag-Leffler evaluator: stop once a term is
// below rel_tol relative to the running sum and not growing; report
// non-convergence (never throw) if max_terms is exhausted first.
inline PointResult eval_kernel_series(const MLParams& ml,
                                      const Eigen::ArrayXd& shat,
                                      const Eigen::ArrayXd& f, double Shat,
                                      double logD, const SeriesControl& ctl,
                                      MomentSum& ws) {
  PointResult out;
  ws.reset(shat, f, Shat, ml.rho, ml.alpha);
  out.segments = ws.segments();
  if (out.segments == 0) return out;  // evaluation at the base point: 0

  CoeffLadder ladder(ml, logD);
  double sum = ladder.value() * ws.next();
  out.terms = 1;
  double prev_mag = std::abs(sum);
  out.converged = false;
  for (int k = 1; k < ctl.max_terms; ++k) {
    ladder.advance();
    if (ladder.terminated()) {
      out.converged = true;
      break;
    }
    const double term = ladder.value() * ws.next();
    sum += term;
    out.terms = k + 1;
    const double mag = std::abs(term);
    if (mag <= ctl.rel_tol * std::max(std::abs(sum), 1e-300) &&
        mag <= prev_mag) {
      out.converged = true;
      break;
    }
    prev_mag = mag;
  }
  out.value = sum;
  return out;
}

}  // namespace prabhakar::detail
