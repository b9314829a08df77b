#include "prabhakar/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "abel.hpp"

namespace prabhakar {

namespace {

double span(const PsiMap& psi) { return psi(psi.b()) - psi(psi.a()); }

void check_envelope(const MLParams& ml, const PsiMap& psi) {
  const double reach = std::abs(ml.omega) * std::pow(span(psi), ml.rho);
  if (reach > series_envelope) {
    throw std::domain_error(
        "operator: |omega| (psi(b)-psi(a))^rho exceeds the series envelope");
  }
}

// Reflection x -> a+b-x together with psi -> -psi(a+b-.) turns a right-sided
// operator into the left-sided one on the same interval.
PsiMap reflect(const PsiMap& psi) {
  const double c = psi.a() + psi.b();
  return PsiMap::user([psi, c](double y) { return -psi(c - y); },
                      [psi, c](double y) { return psi.prime(c - y); },
                      {psi.a(), psi.b()});
}

SampledFunction reflect(const SampledFunction& f, double c) {
  Array nodes = (c - f.nodes).reverse();
  Array values = f.values.reverse();
  std::function<double(double)> g;
  if (f.callable) {
    auto inner = f.callable;
    g = [inner, c](double y) { return inner(c - y); };
  }
  return SampledFunction(std::move(nodes), std::move(values), std::move(g));
}

}  // namespace

OperatorSpec::OperatorSpec(MLParams ml_, PsiMap psi_, Side side_)
    : ml(ml_), psi(std::move(psi_)), side(side_) {
  if (ml.alpha == 0.0) {
    if (ml.gamma != 0.0) {
      throw std::invalid_argument(
          "OperatorSpec: alpha == 0 requires gamma == 0 (identity operator)");
    }
    return;  // identity operator never evaluates the kernel
  }
  check_envelope(ml, psi);
}

SampledFunction::SampledFunction(Array nodes_, Array values_,
                                 std::function<double(double)> callable_)
    : nodes(std::move(nodes_)), values(std::move(values_)),
      callable(std::move(callable_)) {
  if (nodes.size() != values.size()) {
    throw std::invalid_argument("SampledFunction: nodes/values size mismatch");
  }
  if (nodes.size() < 2) {
    throw std::invalid_argument("SampledFunction: needs at least 2 nodes");
  }
  for (Eigen::Index i = 0; i < nodes.size(); ++i) {
    if (!std::isfinite(nodes[i]) || !std::isfinite(values[i])) {
      throw std::invalid_argument("SampledFunction: entries must be finite");
    }
    if (i > 0 && !(nodes[i] > nodes[i - 1])) {
      throw std::invalid_argument(
          "SampledFunction: nodes must be strictly increasing");
    }
  }
}

double SampledFunction::value_at(double x) const {
  if (callable) return callable(x);
  const Eigen::Index n = nodes.size();
  const double slack = 1e-9 * (nodes[n - 1] - nodes[0]);
  if (x <= nodes[0] + slack && x >= nodes[0] - slack) return values[0];
  if (!(x >= nodes[0] - slack) || !(x <= nodes[n - 1] + slack)) {
    throw std::domain_error("SampledFunction: x outside the sampled range");
  }
  x = std::min(std::max(x, nodes[0]), nodes[n - 1]);
  const double* lo =
      std::upper_bound(nodes.data(), nodes.data() + n, x);
  Eigen::Index j = std::max<Eigen::Index>(1, lo - nodes.data()) - 1;
  j = std::min(j, n - 2);
  const double w = (x - nodes[j]) / (nodes[j + 1] - nodes[j]);
  return (1.0 - w) * values[j] + w * values[j + 1];
}

SampledFunction sample_uniform_s(const PsiMap& psi,
                                 const std::function<double(double)>& f,
                                 int n) {
  if (n < 2) throw std::invalid_argument("sample_uniform_s: n must be >= 2");
  if (!f) throw std::invalid_argument("sample_uniform_s: f is required");
  const double sa = psi(psi.a());
  const double D = span(psi);
  Array nodes(n), values(n);
  for (int j = 0; j < n; ++j) {
    double x;
    if (j == 0) {
      x = psi.a();
    } else if (j == n - 1) {
      x = psi.b();
    } else {
      x = psi.inverse(sa + D * j / (n - 1.0));
    }
    nodes[j] = x;
    values[j] = f(x);
  }
  return SampledFunction(std::move(nodes), std::move(values), f);
}

namespace {

// Scaled node positions and the evaluation preamble shared by the series
// quadrature entry points.
struct Prepared {
  Array shat;
  double sa = 0.0;
  double D = 1.0;
  double logD = 0.0;
};

Prepared prepare(const PsiMap& psi, const SampledFunction& f) {
  Prepared p;
  p.sa = psi(psi.a());
  p.D = span(psi);
  p.logD = std::log(p.D);
  const Eigen::Index n = f.nodes.size();
  p.shat.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    p.shat[i] = (psi(f.nodes[i]) - p.sa) / p.D;
  }
  if (std::abs(p.shat[0]) > 1e-12) {
    throw std::invalid_argument(
        "operator quadrature: sampled data must start at the base point");
  }
  p.shat[0] = 0.0;
  return p;
}

Array apply_series(const OperatorSpec& op, const SampledFunction& f,
                   const Array& x, const SeriesControl& ctl,
                   QuadratureReport* rep) {
  const Prepared pre = prepare(op.psi, f);
  const double shat_max = pre.shat[pre.shat.size() - 1];
  detail::MomentSum ws;
  Array out(x.size());
  QuadratureReport agg;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double Shat = (op.psi(x[i]) - pre.sa) / pre.D;
    if (Shat > shat_max + 1e-12) {
      throw std::domain_error(
          "operator quadrature: evaluation point beyond the sampled range");
    }
    Shat = std::min(std::max(Shat, 0.0), shat_max);
    const detail::PointResult r = detail::eval_kernel_series(
        op.ml, pre.shat, f.values, Shat, pre.logD, ctl, ws);
    out[i] = r.value;
    if (Shat > 0.0) {
      if (agg.min_segments < 0 || r.segments < agg.min_segments) {
        agg.min_segments = r.segments;
      }
      agg.max_terms = std::max(agg.max_terms, r.terms);
      agg.converged = agg.converged && r.converged;
    }
  }
  agg.coarse = agg.min_segments >= 0 && agg.min_segments < 8;
  if (rep) *rep = agg;
  return out;
}

}  // namespace

Array prabhakar_apply(const OperatorSpec& op, const SampledFunction& f,
                      const Array& x, SeriesControl ctl,
                      QuadratureReport* rep) {
  if (op.ml.alpha == 0.0) {
    // identity reduction: gamma == 0 was enforced at construction
    Array out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = f.value_at(x[i]);
    if (rep) *rep = QuadratureReport{};
    return out;
  }
  if (op.side == Side::right) {
    const double c = op.psi.a() + op.psi.b();
    OperatorSpec mirrored(op.ml, reflect(op.psi), Side::left);
    return prabhakar_apply(mirrored, reflect(f, c), (c - x).eval(), ctl, rep);
  }
  return apply_series(op, f, x, ctl, rep);
}

double prabhakar_apply(const OperatorSpec& op, const SampledFunction& f,
                       double x, SeriesControl ctl, QuadratureReport* rep) {
  Array xs(1);
  xs[0] = x;
  return prabhakar_apply(op, f, xs, ctl, rep)[0];
}

Array rl_apply(const PsiMap& psi, double alpha, const SampledFunction& f,
               const Array& x, SeriesControl ctl, QuadratureReport* rep) {
  if (!(alpha > 0.0)) {
    throw std::domain_error("rl_apply: requires alpha > 0");
  }
  OperatorSpec op(MLParams(1.0, alpha, 0.0, 0.0), psi);
  return prabhakar_apply(op, f, x, ctl, rep);
}

double rl_apply(const PsiMap& psi, double alpha, const SampledFunction& f,
                double x, SeriesControl ctl, QuadratureReport* rep) {
  Array xs(1);
  xs[0] = x;
  return rl_apply(psi, alpha, f, xs, ctl, rep)[0];
}

double rl_power(const PsiMap& psi, double alpha, double beta, double x,
                Side side) {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw std::domain_error("rl_power: requires alpha > 0 and beta > 0");
  }
  const double dpsi =
      side == Side::left ? psi(x) - psi(psi.a()) : psi(psi.b()) - psi(x);
  return std::exp(log_gamma(beta) - log_gamma(alpha + beta)) *
         std::pow(dpsi, alpha + beta - 1.0);
}

double prabhakar_power(const OperatorSpec& op, double beta, double x,
                       SeriesControl ctl) {
  if (!(beta > 0.0)) {
    throw std::domain_error("prabhakar_power: requires beta > 0");
  }
  if (op.ml.alpha == 0.0) {  // identity operator
    const double dpsi = op.side == Side::left
                            ? op.psi(x) - op.psi(op.psi.a())
                            : op.psi(op.psi.b()) - op.psi(x);
    return std::pow(dpsi, beta - 1.0);
  }
  const double dpsi = op.side == Side::left
                          ? op.psi(x) - op.psi(op.psi.a())
                          : op.psi(op.psi.b()) - op.psi(x);
  const MLParams shifted(op.ml.rho, op.ml.alpha + beta, op.ml.gamma,
                         op.ml.omega);
  const double e = ml3(shifted, op.ml.omega * std::pow(dpsi, op.ml.rho), ctl);
  return std::exp(log_gamma(beta)) * std::pow(dpsi, op.ml.alpha + beta - 1.0) *
         e;
}

namespace {

// Order-2 finite-difference stencils for the n-th derivative, n <= 4.
// Central where the stencil fits inside [sa, sb], one-sided at the edges.
double fd_derivative(const std::function<double(double)>& F, double s, int n,
                     double h, double sa, double sb) {
  static const std::vector<std::vector<double>> central = {
      {-0.5, 0.0, 0.5},
      {1.0, -2.0, 1.0},
      {-0.5, 1.0, 0.0, -1.0, 0.5},
      {1.0, -4.0, 6.0, -4.0, 1.0},
  };
  static const std::vector<std::vector<double>> forward = {
      {-1.5, 2.0, -0.5},
      {2.0, -5.0, 4.0, -1.0},
      {-2.5, 9.0, -12.0, 7.0, -1.5},
      {3.0, -14.0, 26.0, -24.0, 11.0, -2.0},
  };
  const int reach = n <= 2 ? 1 : 2;
  const double scale = std::pow(h, -double(n));
  double acc = 0.0;
  if (s - reach * h >= sa && s + reach * h <= sb) {
    const auto& c = central[n - 1];
    const int half = (int(c.size()) - 1) / 2;
    for (int i = 0; i < int(c.size()); ++i) {
      if (c[i] != 0.0) acc += c[i] * F(s + (i - half) * h);
    }
  } else if (s - reach * h < sa) {
    const auto& c = forward[n - 1];
    for (int i = 0; i < int(c.size()); ++i) acc += c[i] * F(s + i * h);
  } else {
    const auto& c = forward[n - 1];
    const double flip = (n % 2 == 0) ? 1.0 : -1.0;
    for (int i = 0; i < int(c.size()); ++i) acc += flip * c[i] * F(s - i * h);
  }
  return acc * scale;
}

}  // namespace

Array caputo_apply(const PsiMap& psi, double beta,
                   const std::function<double(double)>& f, const Array& x,
                   const CaputoOptions& opt) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::domain_error("caputo_apply: requires finite beta > 0");
  }
  if (beta == std::floor(beta)) {
    throw std::invalid_argument(
        "caputo_apply: integer orders are ordinary derivatives, not supported");
  }
  const int n = int(std::floor(beta)) + 1;
  if (n > 4) {
    throw std::invalid_argument("caputo_apply: orders above 4 not supported");
  }
  if (!f) throw std::invalid_argument("caputo_apply: f is required");

  std::function<double(double)> dn;
  if (opt.psi_derivative_n) {
    dn = opt.psi_derivative_n;
  } else {
    const double sa = psi(psi.a());
    const double sb = psi(psi.b());
    const double h = opt.step_scale * (sb - sa);
    auto F = [&psi, &f](double s) { return f(psi.inverse(s)); };
    dn = [F, &psi, n, h, sa, sb](double xx) {
      return fd_derivative(F, psi(xx), n, h, sa, sb);
    };
  }
  const SampledFunction g = sample_uniform_s(psi, dn, opt.nodes);
  return rl_apply(psi, n - beta, g, x, opt.series);
}

double bound_constant(const OperatorSpec& op) {
  if (op.ml.alpha == 0.0) return 1.0;  // identity operator
  const double D = span(op.psi);
  const MLParams shifted(op.ml.rho, op.ml.alpha + 1.0, op.ml.gamma,
                         op.ml.omega);
  return std::abs(std::pow(D, op.ml.alpha) *
                  ml3(shifted, op.ml.omega * std::pow(D, op.ml.rho)));
}

double weighted_bound_constant(const OperatorSpec& op, double nu,
                               SeriesControl ctl) {
  if (!(nu >= 0.0) || !(nu < 1.0)) {
    throw std::invalid_argument(
        "weighted_bound_constant: requires nu in [0, 1)");
  }
  if (op.ml.alpha == 0.0) return 1.0;  // identity operator
  const double log_D = std::log(span(op.psi));
  const double log_w = std::log(std::abs(op.ml.omega));
  double sum = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  double log_poch = 0.0;  // log |(gamma)_k|, built factor by factor
  for (int k = 0; k < ctl.max_terms; ++k) {
    const double m = op.ml.rho * k + op.ml.alpha;
    double log_term =
        log_poch + m * log_D - log_gamma(m + 1.0 - nu) - log_gamma(k + 1.0);
    if (k > 0) log_term += k * log_w;
    const double term = std::exp(log_term);
    sum += term;
    if (k > 0 && term <= ctl.rel_tol * sum && term <= prev) break;
    prev = term;
    const double factor = op.ml.gamma + k;
    if (factor == 0.0) break;  // all remaining Pochhammer terms vanish
    log_poch += std::log(std::abs(factor));
  }
  return std::exp(log_gamma(1.0 - nu)) * sum;
}

double weighted_norm(const SampledFunction& f, const PsiMap& psi, double nu) {
  if (!(nu >= 0.0) || !(nu < 1.0)) {
    throw std::invalid_argument("weighted_norm: requires nu in [0, 1)");
  }
  const double sa = psi(psi.a());
  double m = 0.0;
  for (Eigen::Index i = 0; i < f.nodes.size(); ++i) {
    const double w = std::pow(psi(f.nodes[i]) - sa, nu);
    m = std::max(m, std::abs(w * f.values[i]));
  }
  return m;
}

InverseSpec::InverseSpec(MLParams ml_, PsiMap psi_, double alpha_d_)
    : ml(ml_), psi(std::move(psi_)), alpha_d(alpha_d_) {
  if (!(alpha_d > ml.alpha)) {
    throw std::invalid_argument(
        "InverseSpec: differentiation order must exceed the operator order");
  }
  if (alpha_d == std::floor(alpha_d)) {
    throw std::invalid_argument(
        "InverseSpec: differentiation order must be noninteger");
  }
}

Array inverse_apply(const InverseSpec& spec,
                    const std::function<double(double)>& f, const Array& x,
                    const InverseOptions& opt) {
  if (!f) throw std::invalid_argument("inverse_apply: f is required");
  const OperatorSpec inner(
      MLParams(spec.ml.rho, spec.alpha_d - spec.ml.alpha, -spec.ml.gamma,
               spec.ml.omega),
      spec.psi);
  const SampledFunction fs = sample_uniform_s(spec.psi, f, opt.nodes);
  auto g = [&inner, &fs](double xx) {
    return prabhakar_apply(inner, fs, xx);
  };
  return caputo_apply(spec.psi, spec.alpha_d, g, x, opt.caputo);
}

}  // namespace prabhakar
