#include "prabhakar/psi.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace prabhakar {

namespace {

void check_interval(Interval dom) {
  if (!std::isfinite(dom.lo) || !std::isfinite(dom.hi) || !(dom.lo < dom.hi)) {
    throw std::invalid_argument("PsiMap: interval must be finite with lo < hi");
  }
}

}  // namespace

PsiMap PsiMap::identity(Interval dom) {
  check_interval(dom);
  PsiMap m;
  m.kind_ = Kind::identity;
  m.dom_ = dom;
  return m;
}

PsiMap PsiMap::affine(double c0, double c1, Interval dom) {
  check_interval(dom);
  if (!std::isfinite(c0) || !std::isfinite(c1) || !(c1 > 0.0)) {
    throw std::invalid_argument("PsiMap::affine: requires finite c0 and c1 > 0");
  }
  PsiMap m;
  m.kind_ = Kind::affine;
  m.dom_ = dom;
  m.c0_ = c0;
  m.c1_ = c1;
  return m;
}

PsiMap PsiMap::log(Interval dom) {
  check_interval(dom);
  if (!(dom.lo > 0.0)) {
    throw std::invalid_argument("PsiMap::log: requires interval with lo > 0");
  }
  PsiMap m;
  m.kind_ = Kind::log;
  m.dom_ = dom;
  return m;
}

PsiMap PsiMap::power(double sigma, Interval dom) {
  check_interval(dom);
  if (!std::isfinite(sigma) || !(sigma > 0.0)) {
    throw std::invalid_argument("PsiMap::power: requires sigma > 0");
  }
  if (dom.lo < 0.0) {
    throw std::invalid_argument("PsiMap::power: requires interval with lo >= 0");
  }
  PsiMap m;
  m.kind_ = Kind::power;
  m.dom_ = dom;
  m.c1_ = sigma;
  return m;
}

PsiMap PsiMap::exp(Interval dom) {
  check_interval(dom);
  PsiMap m;
  m.kind_ = Kind::exp;
  m.dom_ = dom;
  return m;
}

PsiMap PsiMap::user(std::function<double(double)> value,
                    std::function<double(double)> deriv, Interval dom) {
  check_interval(dom);
  if (!value || !deriv) {
    throw std::invalid_argument("PsiMap::user: value and deriv are required");
  }
  PsiMap m;
  m.kind_ = Kind::user;
  m.dom_ = dom;
  m.value_ = std::move(value);
  m.deriv_ = std::move(deriv);
  return m;
}

void PsiMap::check_domain(double x) const {
  const double slack = 1e-9 * (dom_.hi - dom_.lo);
  if (!(x >= dom_.lo - slack) || !(x <= dom_.hi + slack)) {
    throw std::domain_error("PsiMap: argument outside the working interval");
  }
}

double PsiMap::operator()(double x) const {
  check_domain(x);
  x = std::min(std::max(x, dom_.lo), dom_.hi);
  switch (kind_) {
    case Kind::identity: return x;
    case Kind::affine: return c0_ + c1_ * x;
    case Kind::log: return std::log(x);
    case Kind::power: return std::pow(x, c1_);
    case Kind::exp: return std::exp(x);
    case Kind::user: return value_(x);
  }
  return x;
}

double PsiMap::prime(double x) const {
  check_domain(x);
  x = std::min(std::max(x, dom_.lo), dom_.hi);
  switch (kind_) {
    case Kind::identity: return 1.0;
    case Kind::affine: return c1_;
    case Kind::log: return 1.0 / x;
    case Kind::power: return c1_ * std::pow(x, c1_ - 1.0);
    case Kind::exp: return std::exp(x);
    case Kind::user: {
      const double d = deriv_(x);
      if (!(d > 0.0)) {
        throw std::domain_error("PsiMap: user derivative is not positive");
      }
      return d;
    }
  }
  return 1.0;
}

double PsiMap::inverse(double s) const {
  double x;
  switch (kind_) {
    case Kind::identity: x = s; break;
    case Kind::affine: x = (s - c0_) / c1_; break;
    case Kind::log: x = std::exp(s); break;
    case Kind::power: x = std::pow(s, 1.0 / c1_); break;
    case Kind::exp: x = std::log(s); break;
    case Kind::user: {
      // psi is strictly increasing, so plain bisection on [a, b].
      double lo = dom_.lo, hi = dom_.hi;
      if (s <= value_(lo)) return lo;
      if (s >= value_(hi)) return hi;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * (dom_.hi - dom_.lo);
           ++it) {
        const double mid = 0.5 * (lo + hi);
        (value_(mid) < s ? lo : hi) = mid;
      }
      x = 0.5 * (lo + hi);
      break;
    }
  }
  return std::min(std::max(x, dom_.lo), dom_.hi);
}

PsiValidation PsiMap::validate(int samples) const {
  if (samples < 3) {
    throw std::invalid_argument("PsiMap::validate: needs at least 3 samples");
  }
  PsiValidation out;
  const double mid = 0.5 * (dom_.lo + dom_.hi);
  const double half = 0.5 * (dom_.hi - dom_.lo);
  double min_p = std::numeric_limits<double>::infinity();
  double max_p = 0.0;
  double min_at = dom_.lo;
  // Chebyshev abscissae: interior only, clustered toward the endpoints where
  // monotonicity is most often lost.  The endpoints themselves are excluded
  // so that maps with an isolated boundary zero of psi' (x^sigma at 0) pass
  // while maps degenerate in the interior do not.
  for (int j = 0; j < samples; ++j) {
    const double x =
        mid + half * std::cos(M_PI * (2.0 * j + 1.0) / (2.0 * samples));
    double p;
    try {
      p = prime(x);
    } catch (const std::domain_error&) {
      p = -1.0;  // user map reported nonpositive derivative
    }
    if (p < min_p) {
      min_p = p;
      min_at = x;
    }
    if (p > max_p) max_p = p;
  }
  out.min_prime = min_p;
  out.min_prime_at = min_at;
  if (!(min_p > 0.0)) {
    out.pass = false;
    out.message = "psi' is nonpositive at a sample point";
  } else if (min_p <= 1e-12 * max_p) {
    out.pass = false;
    out.message = "psi' is negligibly small relative to its maximum";
  } else {
    out.pass = true;
    out.message = "psi' positive at all sample points";
  }
  return out;
}

}  // namespace prabhakar
