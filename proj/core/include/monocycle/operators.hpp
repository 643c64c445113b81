#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "monocycle/signal.hpp"

namespace monocycle {

/// Map between signals on a common grid.
using SignalMap = std::function<PeriodicSignal(const PeriodicSignal&)>;

/// Closed interval, possibly unbounded.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
  bool operator==(const Interval&) const = default;
};

/// Real polynomial, coefficients in ascending powers. Trailing zeros are trimmed.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> ascending);

  double operator()(double x) const noexcept;
  Polynomial derivative() const;
  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }

  bool operator==(const Polynomial&) const = default;

 private:
  std::vector<double> coeffs_;
};

/// Infimum of p over the interval, -inf when unbounded below.
double polynomial_min(const Polynomial& p, const Interval& domain);
/// Supremum of p over the interval, +inf when unbounded above.
double polynomial_max(const Polynomial& p, const Interval& domain);

/// The operator y -> (b(s)/a(s)) y with s realized by the central difference D1
/// and s^2 by the second difference D2. Degrees are at most 2.
class LtiRelation {
 public:
  LtiRelation(std::vector<double> numerator, std::vector<double> denominator);

  const std::vector<double>& numerator() const noexcept { return num_; }
  const std::vector<double>& denominator() const noexcept { return den_; }

  /// Circulant eigenvalues of b(D) and a(D) at discrete Fourier bin k.
  std::complex<double> numerator_symbol(const PeriodicGrid& grid, std::size_t k) const;
  std::complex<double> denominator_symbol(const PeriodicGrid& grid, std::size_t k) const;

  /// a(s)/b(s).
  LtiRelation inverse() const { return LtiRelation(den_, num_); }

 private:
  std::vector<double> num_;
  std::vector<double> den_;
};

/// Solves a(D) w = b(D) x. Components at null modes of a(D) are set to zero; throws
/// ResonanceError when b(D) x does not vanish there.
PeriodicSignal apply_lti(const LtiRelation& op, const PeriodicSignal& x);

/// Resolvent (I + lambda b/a)^{-1}, factorized once for a given grid and lambda.
class LtiResolvent {
 public:
  /// Throws ResonanceError when a(D) + lambda b(D) is near-singular on the grid.
  LtiResolvent(const LtiRelation& op, double lambda, const PeriodicGrid& grid);

  /// Solves (a(D) + lambda b(D)) w = a(D) z.
  PeriodicSignal operator()(const PeriodicSignal& z) const;

  const PeriodicGrid& grid() const noexcept { return grid_; }
  double lambda() const noexcept { return lambda_; }

 private:
  PeriodicGrid grid_;
  double lambda_;
  std::vector<std::complex<double>> gain_;
};

PeriodicSignal resolvent_lti(const LtiRelation& op, double lambda, const PeriodicSignal& z);

/// Distance from the set {b/a x} to -rest, i.e. the norm of the smallest r with
/// r - rest in (b/a) x. Modes where a(D) vanishes contribute |b_k x_k|.
double lti_inclusion_residual(const LtiRelation& op, const PeriodicSignal& x,
                              const PeriodicSignal& rest);

/// Samplewise w -> p(w) - offset. p must be nondecreasing on the domain.
class StaticPolyRelation {
 public:
  /// Throws MonotonicityError if p' < 0 somewhere on the domain, ConfigError if degree > 7.
  explicit StaticPolyRelation(Polynomial p, Interval domain = {},
                              std::optional<PeriodicSignal> offset = std::nullopt);

  const Polynomial& polynomial() const noexcept { return p_; }
  const Interval& domain() const noexcept { return domain_; }
  const std::optional<PeriodicSignal>& offset() const noexcept { return offset_; }

  StaticPolyRelation with_offset(PeriodicSignal offset) const;
  StaticPolyRelation without_offset() const;

  PeriodicSignal apply(const PeriodicSignal& x) const;

  static constexpr int max_degree = 7;

 private:
  Polynomial p_;
  Polynomial dp_;
  Interval domain_;
  std::optional<PeriodicSignal> offset_;

  friend PeriodicSignal resolvent_static(const StaticPolyRelation&, double,
                                         const PeriodicSignal&);
};

/// Samplewise solve of w + lambda p(w) = z + lambda offset.
/// Throws MonotonicityError when a root cannot be bracketed.
PeriodicSignal resolvent_static(const StaticPolyRelation& op, double lambda,
                                const PeriodicSignal& z);

/// Root of w + lambda p(w) = rhs by safeguarded Newton with bracket expansion.
double solve_monotone_scalar(const Polynomial& p, double lambda, double rhs);

/// Samplewise x -> g x.
class GainRelation {
 public:
  explicit GainRelation(double gain) : gain_(gain) {}

  double gain() const noexcept { return gain_; }
  bool monotone() const noexcept { return gain_ >= 0.0; }

  PeriodicSignal apply(const PeriodicSignal& x) const { return gain_ * x; }
  /// z / (1 + lambda g). Throws MonotonicityError if 1 + lambda g <= 0.
  PeriodicSignal resolvent(double lambda, const PeriodicSignal& z) const;

 private:
  double gain_;
};

/// Positive-feedback element: a gain or a polynomial.
using FeedbackRelation = std::variant<GainRelation, StaticPolyRelation>;

PeriodicSignal apply_feedback(const FeedbackRelation& e, const PeriodicSignal& x);

struct MonotonicityReport {
  /// Smallest <u1-u2, R(u1)-R(u2)> over all pairs.
  double min_product = std::numeric_limits<double>::infinity();
  /// Indices of the pair achieving a negative minimum.
  std::optional<std::pair<std::size_t, std::size_t>> violating_pair;
  /// Smallest product / |u1-u2|^2.
  double alpha_estimate = std::numeric_limits<double>::infinity();
  /// Smallest product / |R(u1)-R(u2)|^2 over pairs with distinct images.
  double beta_estimate = std::numeric_limits<double>::infinity();
  std::size_t pairs = 0;

  bool monotone() const noexcept { return !violating_pair.has_value(); }
};

/// Pairwise monotonicity probe. Needs at least two samples.
MonotonicityReport empirical_monotonicity_check(const SignalMap& relation,
                                                const std::vector<PeriodicSignal>& samples);

}  // namespace monocycle
