#pragma once

// Increasing reference maps psi.  Operators act in the transformed variable
// s = psi(x), so each map carries its working interval [a, b], an evaluator,
// the derivative psi', and the inverse (closed form for the built-in kinds,
// bisection for user-supplied maps).

#include <functional>
#include <memory>
#include <string>

namespace prabhakar {

struct Interval {
  double lo;
  double hi;
};

// Outcome of sampling psi' for positivity across the working interval.
struct PsiValidation {
  bool pass = false;
  double min_prime = 0.0;     // smallest sampled psi'
  double min_prime_at = 0.0;  // abscissa where it occurred
  std::string message;
};

class PsiMap {
 public:
  enum class Kind { identity, affine, log, power, exp, user };

  // psi(x) = x
  static PsiMap identity(Interval dom);
  // psi(x) = c0 + c1 x, c1 > 0
  static PsiMap affine(double c0, double c1, Interval dom);
  // psi(x) = ln x, requires dom.lo > 0
  static PsiMap log(Interval dom);
  // psi(x) = x^sigma, sigma > 0, requires dom.lo >= 0
  static PsiMap power(double sigma, Interval dom);
  // psi(x) = e^x
  static PsiMap exp(Interval dom);
  // caller-supplied value and derivative; inverse found by bisection
  static PsiMap user(std::function<double(double)> value,
                     std::function<double(double)> deriv, Interval dom);

  Kind kind() const { return kind_; }
  Interval domain() const { return dom_; }
  double a() const { return dom_.lo; }
  double b() const { return dom_.hi; }

  // psi(x); x must lie in [a, b] up to roundoff slack.
  double operator()(double x) const;
  // psi'(x) > 0; throws if a user map returns a nonpositive derivative.
  double prime(double x) const;
  // x with psi(x) = s, clamped to [a, b].
  double inverse(double s) const;

  // Samples psi' at interior Chebyshev-distributed points and fails if any
  // sample is nonpositive or negligibly small relative to the largest
  // (degenerate-on-a-subinterval maps are rejected; an isolated zero of
  // psi' exactly at an endpoint, as for x^sigma at 0, is tolerated).
  PsiValidation validate(int samples = 129) const;

 private:
  PsiMap() = default;

  Kind kind_ = Kind::identity;
  Interval dom_{0.0, 1.0};
  double c0_ = 0.0, c1_ = 1.0;  // affine coefficients / power exponent slot
  std::function<double(double)> value_;
  std::function<double(double)> deriv_;
  void check_domain(double x) const;
};

// Free-function aliases over the methods, for pipeline-style call sites.
inline double psi_eval(const PsiMap& m, double x) { return m(x); }
inline double psi_prime(const PsiMap& m, double x) { return m.prime(x); }
inline double psi_inverse(const PsiMap& m, double s) { return m.inverse(s); }
inline PsiValidation validate_psi(const PsiMap& m, int samples = 129) {
  return m.validate(samples);
}

}  // namespace prabhakar
