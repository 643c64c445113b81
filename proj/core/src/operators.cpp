#include "monocycle/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <unsupported/Eigen/Polynomials>

#include "monocycle/errors.hpp"
#include "spectral.hpp"

namespace monocycle {

namespace {

constexpr double kSingularRatio = 1e-10;

double bin_frequency(std::size_t k, const PeriodicGrid& grid) {
  return 2.0 * std::numbers::pi * static_cast<double>(k) / grid.period();
}

// Real roots of p inside the open interval.
std::vector<double> real_roots_in(const Polynomial& p, const Interval& d) {
  std::vector<double> out;
  if (p.degree() < 1) return out;
  if (p.degree() == 1) {
    const double r = -p.coeffs()[0] / p.coeffs()[1];
    if (d.contains(r)) out.push_back(r);
    return out;
  }
  Eigen::VectorXd c(p.degree() + 1);
  for (int i = 0; i <= p.degree(); ++i) c[i] = p.coeffs()[static_cast<std::size_t>(i)];
  Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(c);
  std::vector<double> roots;
  solver.realRoots(roots, 1e-8);
  for (double r : roots) {
    if (d.contains(r)) out.push_back(r);
  }
  return out;
}

// Limit of p as x -> +inf (dir = 1) or -inf (dir = -1); finite only for constants.
double limit_at(const Polynomial& p, int dir) {
  if (p.degree() <= 0) return p.is_zero() ? 0.0 : p.coeffs()[0];
  const double lead = p.coeffs().back();
  const bool odd = p.degree() % 2 == 1;
  const double sign = (dir < 0 && odd) ? -lead : lead;
  return sign > 0 ? std::numeric_limits<double>::infinity()
                  : -std::numeric_limits<double>::infinity();
}

}  // namespace

Polynomial::Polynomial(std::vector<double> ascending) : coeffs_(std::move(ascending)) {
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw DomainError("polynomial coefficient is not finite");
  }
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Polynomial::operator()(double x) const noexcept {
  double v = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = v * x + *it;
  return v;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial();
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = static_cast<double>(i) * coeffs_[i];
  return Polynomial(std::move(d));
}

double polynomial_min(const Polynomial& p, const Interval& domain) {
  double m = std::numeric_limits<double>::infinity();
  if (std::isfinite(domain.lo)) {
    m = std::min(m, p(domain.lo));
  } else {
    m = std::min(m, limit_at(p, -1));
  }
  if (std::isfinite(domain.hi)) {
    m = std::min(m, p(domain.hi));
  } else {
    m = std::min(m, limit_at(p, 1));
  }
  for (double r : real_roots_in(p.derivative(), domain)) m = std::min(m, p(r));
  return m;
}

double polynomial_max(const Polynomial& p, const Interval& domain) {
  std::vector<double> neg = p.coeffs();
  for (double& c : neg) c = -c;
  return -polynomial_min(Polynomial(std::move(neg)), domain);
}

// ---------------------------------------------------------------------------

LtiRelation::LtiRelation(std::vector<double> numerator, std::vector<double> denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
  for (const auto* side : {&num_, &den_}) {
    const char* name = side == &num_ ? "numerator" : "denominator";
    if (side->empty() || side->size() > 3) {
      throw ConfigError(name, std::string("LTI ") + name + " must have 1 to 3 coefficients");
    }
    if (side->back() == 0.0) {
      throw ConfigError(name, std::string("LTI ") + name + " leading coefficient is zero");
    }
    for (double c : *side) {
      if (!std::isfinite(c)) throw ConfigError(name, std::string("LTI ") + name + " not finite");
    }
  }
}

std::complex<double> LtiRelation::numerator_symbol(const PeriodicGrid& grid,
                                                   std::size_t k) const {
  return detail::poly_symbol(num_, k, grid.size(), grid.step());
}

std::complex<double> LtiRelation::denominator_symbol(const PeriodicGrid& grid,
                                                     std::size_t k) const {
  return detail::poly_symbol(den_, k, grid.size(), grid.step());
}

namespace {

// Bins 0..N/2 of a symbol; throws if any falls below the singularity threshold.
std::vector<std::complex<double>> checked_symbol(
    const PeriodicGrid& grid, const std::function<std::complex<double>(std::size_t)>& sym,
    const char* what) {
  const std::size_t bins = grid.size() / 2 + 1;
  std::vector<std::complex<double>> s(bins);
  double peak = 0.0;
  for (std::size_t k = 0; k < bins; ++k) {
    s[k] = sym(k);
    peak = std::max(peak, std::abs(s[k]));
  }
  for (std::size_t k = 0; k < bins; ++k) {
    if (std::abs(s[k]) <= kSingularRatio * peak) {
      const double f = bin_frequency(k, grid);
      throw ResonanceError(std::string(what) + " is singular at discrete frequency " +
                               std::to_string(f) + " rad/s (bin " + std::to_string(k) + ")",
                           k, f);
    }
  }
  return s;
}

}  // namespace

PeriodicSignal apply_lti(const LtiRelation& op, const PeriodicSignal& x) {
  const PeriodicGrid& g = x.grid();
  const std::size_t bins = g.size() / 2 + 1;
  std::vector<std::complex<double>> a(bins);
  std::vector<std::complex<double>> bx(bins);
  auto spec = detail::rfft(x.values());
  double a_peak = 0.0;
  double bx_peak = 0.0;
  for (std::size_t k = 0; k < bins; ++k) {
    a[k] = op.denominator_symbol(g, k);
    bx[k] = op.numerator_symbol(g, k) * spec[k];
    a_peak = std::max(a_peak, std::abs(a[k]));
    bx_peak = std::max(bx_peak, std::abs(bx[k]));
  }
  // At null modes of a(D) the relation has a solution only if b(D) x vanishes
  // there; the free component is set to zero.
  for (std::size_t k = 0; k < bins; ++k) {
    if (std::abs(a[k]) > kSingularRatio * a_peak) {
      spec[k] = bx[k] / a[k];
    } else if (std::abs(bx[k]) <= 1e-9 * bx_peak) {
      spec[k] = 0.0;
    } else {
      const double f = bin_frequency(k, g);
      throw ResonanceError("a(D) is singular at discrete frequency " + std::to_string(f) +
                               " rad/s (bin " + std::to_string(k) + ")",
                           k, f);
    }
  }
  return PeriodicSignal(g, detail::irfft(spec, g.size()));
}

LtiResolvent::LtiResolvent(const LtiRelation& op, double lambda, const PeriodicGrid& grid)
    : grid_(grid), lambda_(lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("resolvent parameter lambda must be positive");
  }
  const auto m = checked_symbol(
      grid,
      [&](std::size_t k) {
        return op.denominator_symbol(grid, k) + lambda * op.numerator_symbol(grid, k);
      },
      "a(D) + lambda b(D)");
  gain_.resize(m.size());
  for (std::size_t k = 0; k < m.size(); ++k) gain_[k] = op.denominator_symbol(grid, k) / m[k];
}

PeriodicSignal LtiResolvent::operator()(const PeriodicSignal& z) const {
  if (!(z.grid() == grid_)) throw DimensionError("LTI resolvent applied on a foreign grid");
  auto spec = detail::rfft(z.values());
  for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= gain_[k];
  return PeriodicSignal(grid_, detail::irfft(spec, grid_.size()));
}

PeriodicSignal resolvent_lti(const LtiRelation& op, double lambda, const PeriodicSignal& z) {
  return LtiResolvent(op, lambda, z.grid())(z);
}

double lti_inclusion_residual(const LtiRelation& op, const PeriodicSignal& x,
                              const PeriodicSignal& rest) {
  if (!(x.grid() == rest.grid())) throw DimensionError("residual: grid mismatch");
  const PeriodicGrid& g = x.grid();
  const std::size_t bins = g.size() / 2 + 1;
  std::vector<std::complex<double>> a(bins);
  double peak = 0.0;
  for (std::size_t k = 0; k < bins; ++k) {
    a[k] = op.denominator_symbol(g, k);
    peak = std::max(peak, std::abs(a[k]));
  }
  const auto xs = detail::rfft(x.values());
  auto rs = detail::rfft(rest.values());
  for (std::size_t k = 0; k < bins; ++k) {
    const auto bx = op.numerator_symbol(g, k) * xs[k];
    if (std::abs(a[k]) <= kSingularRatio * peak) {
      // Any value is admissible here as long as b_k x_k vanishes.
      rs[k] = std::abs(bx);
    } else {
      rs[k] += bx / a[k];
    }
  }
  return norm(PeriodicSignal(g, detail::irfft(rs, g.size())));
}

// ---------------------------------------------------------------------------

StaticPolyRelation::StaticPolyRelation(Polynomial p, Interval domain,
                                       std::optional<PeriodicSignal> offset)
    : p_(std::move(p)), dp_(p_.derivative()), domain_(domain), offset_(std::move(offset)) {
  if (p_.degree() > max_degree) {
    throw ConfigError("coeffs", "polynomial degree " + std::to_string(p_.degree()) +
                                    " exceeds " + std::to_string(max_degree));
  }
  if (!(domain_.lo < domain_.hi)) throw ConfigError("domain", "empty domain interval");
  double scale = 1.0;
  for (double c : dp_.coeffs()) scale = std::max(scale, std::abs(c));
  const double slope_min = polynomial_min(dp_, domain_);
  if (slope_min < -1e-12 * scale) {
    throw MonotonicityError("polynomial is decreasing somewhere on its domain (min slope " +
                            std::to_string(slope_min) + ")");
  }
}

StaticPolyRelation StaticPolyRelation::with_offset(PeriodicSignal offset) const {
  StaticPolyRelation r = *this;
  r.offset_ = std::move(offset);
  return r;
}

StaticPolyRelation StaticPolyRelation::without_offset() const {
  StaticPolyRelation r = *this;
  r.offset_.reset();
  return r;
}

PeriodicSignal StaticPolyRelation::apply(const PeriodicSignal& x) const {
  std::vector<double> v(x.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = p_(x[k]);
  PeriodicSignal out(x.grid(), std::move(v));
  if (offset_) return out - *offset_;
  return out;
}

double solve_monotone_scalar(const Polynomial& p, double lambda, double rhs) {
  if (p.is_zero()) return rhs;
  const Polynomial dp = p.derivative();
  auto g = [&](double w) { return w + lambda * p(w) - rhs; };
  constexpr double tol = 1e-12;

  double w = rhs;
  double gw = g(w);
  if (std::abs(gw) <= tol) return w;

  // Expand a bracket away from rhs until g changes sign.
  double lo = w;
  double hi = w;
  double step = 1.0 + std::abs(gw);
  const double dir = gw > 0.0 ? -1.0 : 1.0;
  bool found = false;
  for (int i = 0; i < 200; ++i) {
    const double probe = w + dir * step;
    const double gp = g(probe);
    if (!std::isfinite(gp)) break;
    if ((gp > 0.0) != (gw > 0.0) || gp == 0.0) {
      if (dir < 0) {
        lo = probe;
      } else {
        hi = probe;
      }
      found = true;
      break;
    }
    if (dir < 0) {
      hi = probe;
    } else {
      lo = probe;
    }
    step *= 2.0;
  }
  if (!found) {
    throw MonotonicityError("resolvent root not bracketed for right-hand side " +
                            std::to_string(rhs));
  }

  for (int it = 0; it < 200; ++it) {
    const double d = 1.0 + lambda * dp(w);
    double next = d > 0.0 ? w - gw / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    w = next;
    gw = g(w);
    if (std::abs(gw) <= tol) break;
    if (gw > 0.0) {
      hi = w;
    } else {
      lo = w;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() *
                       std::max(std::abs(lo), std::abs(hi))) {
      break;
    }
  }
  return w;
}

PeriodicSignal resolvent_static(const StaticPolyRelation& op, double lambda,
                                const PeriodicSignal& z) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("resolvent parameter lambda must be positive");
  }
  if (op.offset_ && !(op.offset_->grid() == z.grid())) {
    throw DimensionError("static resolvent: offset lives on a different grid");
  }
  std::vector<double> v(z.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double rhs = z[k] + (op.offset_ ? lambda * (*op.offset_)[k] : 0.0);
    v[k] = solve_monotone_scalar(op.p_, lambda, rhs);
  }
  return PeriodicSignal(z.grid(), std::move(v));
}

PeriodicSignal GainRelation::resolvent(double lambda, const PeriodicSignal& z) const {
  const double d = 1.0 + lambda * gain_;
  if (!(d > 0.0)) throw MonotonicityError("gain resolvent undefined: 1 + lambda*g <= 0");
  return (1.0 / d) * z;
}

PeriodicSignal apply_feedback(const FeedbackRelation& e, const PeriodicSignal& x) {
  return std::visit([&](const auto& r) { return r.apply(x); }, e);
}

MonotonicityReport empirical_monotonicity_check(const SignalMap& relation,
                                                const std::vector<PeriodicSignal>& samples) {
  if (samples.size() < 2) throw DomainError("monotonicity check needs at least 2 samples");
  std::vector<PeriodicSignal> images;
  images.reserve(samples.size());
  for (const auto& s : samples) images.push_back(relation(s));

  MonotonicityReport rep;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t j = i + 1; j < samples.size(); ++j) {
      const PeriodicSignal du = samples[i] - samples[j];
      const PeriodicSignal dv = images[i] - images[j];
      const double prod = inner_product(du, dv);
      ++rep.pairs;
      if (prod < rep.min_product) {
        rep.min_product = prod;
        if (prod < 0.0) rep.violating_pair = std::make_pair(i, j);
      }
      const double nu = inner_product(du, du);
      const double nv = inner_product(dv, dv);
      if (nu > 0.0) rep.alpha_estimate = std::min(rep.alpha_estimate, prod / nu);
      if (nv > 0.0) rep.beta_estimate = std::min(rep.beta_estimate, prod / nv);
    }
  }
  return rep;
}

}  // namespace monocycle
