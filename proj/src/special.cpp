#include "prabhakar/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace prabhakar {

MLParams::MLParams(double rho_, double alpha_, double gamma_, double omega_)
    : rho(rho_), alpha(alpha_), gamma(gamma_), omega(omega_) {
  if (!std::isfinite(rho) || !std::isfinite(alpha) || !std::isfinite(gamma) ||
      !std::isfinite(omega)) {
    throw std::invalid_argument("MLParams: parameters must be finite");
  }
  if (rho <= 0.0) {
    throw std::invalid_argument("MLParams: rho must be positive");
  }
  if (alpha < 0.0) {
    throw std::invalid_argument("MLParams: alpha must be nonnegative");
  }
}

namespace {

void check_control(const SeriesControl& ctl) {
  if (!(ctl.rel_tol > 0.0) || !(ctl.rel_tol < 1.0)) {
    throw std::invalid_argument("SeriesControl: rel_tol must lie in (0,1)");
  }
  if (ctl.max_terms < 1) {
    throw std::invalid_argument("SeriesControl: max_terms must be >= 1");
  }
}

// Lanczos approximation, g = 7 with 9 coefficients.
constexpr double lanczos_g = 7.0;
constexpr double lanczos_c[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

double log_gamma_lanczos(double x) {
  // (ln Gamma)(x) = ln(sqrt(2 pi)) + (x - 1/2) ln t - t + ln A_g(x),
  // t = x + g - 1/2
  double acc = lanczos_c[0];
  for (int i = 1; i < 9; ++i) acc += lanczos_c[i] / (x - 1.0 + i);
  const double t = x + lanczos_g - 0.5;
  return 0.91893853320467274178 + (x - 0.5) * std::log(t) - t + std::log(acc);
}

}  // namespace

double log_gamma(double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw std::domain_error("log_gamma: requires finite x > 0");
  }
  // Shift small arguments up with Gamma(x) = Gamma(x+k) / (x (x+1) ... ),
  // keeping the Lanczos argument >= 1.5 where the rational sum is flattest.
  if (x < 1.5) {
    double shift = 0.0;
    double y = x;
    while (y < 1.5) {
      shift += std::log(y);
      y += 1.0;
    }
    return log_gamma_lanczos(y) - shift;
  }
  return log_gamma_lanczos(x);
}

double pochhammer(double g, int k) {
  if (k < 0) {
    throw std::invalid_argument("pochhammer: k must be nonnegative");
  }
  double p = 1.0;
  for (int i = 0; i < k; ++i) p *= g + i;
  return p;
}

double beta_fn(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0)) {
    throw std::domain_error("beta_fn: requires x > 0 and y > 0");
  }
  return std::exp(log_gamma(x) + log_gamma(y) - log_gamma(x + y));
}

double ml3(const MLParams& p, double z, SeriesControl& ctl) {
  check_control(ctl);
  if (p.alpha <= 0.0) {
    throw std::domain_error("ml3: requires alpha > 0");
  }
  if (!std::isfinite(z)) {
    throw std::domain_error("ml3: argument must be finite");
  }

  ctl.terms_used = 1;
  ctl.converged = true;
  const double first = std::exp(-log_gamma(p.alpha));
  if (z == 0.0) return first;

  // Term k is  (g)_k z^k / (k! Gamma(rho k + alpha)).  The numerator
  // (g)_k z^k / k! is carried as sign plus log magnitude, updated
  // incrementally; Gamma in the denominator is applied per term.
  double sum = first;
  double log_num = 0.0;  // log |(g)_k z^k / k!|
  double sign = 1.0;
  double prev_mag = std::abs(first);
  const double log_abs_z = std::log(std::abs(z));
  ctl.converged = false;
  for (int k = 1; k < ctl.max_terms; ++k) {
    const double factor = p.gamma + (k - 1);  // (g)_{k} = (g)_{k-1} * factor
    if (factor == 0.0) {
      // Pochhammer hit an exact zero: the series terminates here.
      ctl.terms_used = k;
      ctl.converged = true;
      return sum;
    }
    log_num += std::log(std::abs(factor)) + log_abs_z - std::log(double(k));
    if (factor < 0.0) sign = -sign;
    if (z < 0.0) sign = -sign;
    const double term =
        sign * std::exp(log_num - log_gamma(p.rho * k + p.alpha));
    sum += term;
    ctl.terms_used = k + 1;
    const double mag = std::abs(term);
    if (mag <= ctl.rel_tol * std::max(std::abs(sum), 1e-300) &&
        mag <= prev_mag) {
      ctl.converged = true;
      break;
    }
    prev_mag = mag;
  }
  return sum;
}

double ml3(const MLParams& p, double z) {
  SeriesControl ctl;
  return ml3(p, z, ctl);
}

}  // namespace prabhakar
