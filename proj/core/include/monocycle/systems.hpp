#pragma once

#include <optional>
#include <string>

#include "monocycle/operators.hpp"
#include "monocycle/signal.hpp"

namespace monocycle {

/// External input u. Evaluated on whatever grid the solver currently uses.
struct InputSpec {
  enum class Kind { zero, sine, samples };

  Kind kind = Kind::zero;
  double amplitude = 0.0;
  /// Angular frequency in rad/s.
  double frequency = 0.0;
  /// Tabulated input; looked up by time modulo its own period.
  std::optional<PeriodicSignal> table;

  static InputSpec zero() { return {}; }
  static InputSpec sine(double amplitude, double frequency);
  static InputSpec from_samples(PeriodicSignal table);

  PeriodicSignal on(const PeriodicGrid& grid) const;
};

/// u in H^{-1} y + E1(y) - E2(y), split as A(y) = H^{-1} y + E1(y) - u and B(y) = E2(y).
struct MixedFeedbackSystem {
  std::string label;
  /// H^{-1} as b(s)/a(s).
  LtiRelation forward_h_inverse;
  StaticPolyRelation negative_feedback_e1;
  FeedbackRelation positive_feedback_e2;
  InputSpec input;
  /// Amplitude range used for load-time monotonicity probes.
  Interval operating_interval{-5.0, 5.0};
};

/// Probes E1 and E2 with constant and sinusoidal signals spanning the operating interval.
/// Throws MonotonicityError on a violation.
void validate_system(const MixedFeedbackSystem& sys);

PeriodicSignal apply_a(const MixedFeedbackSystem& sys, const PeriodicSignal& y);
PeriodicSignal apply_b(const MixedFeedbackSystem& sys, const PeriodicSignal& y);

struct VdpParams {
  double K = 1.0;
  PeriodicGrid grid{2.0 * 3.14159265358979323846, 5000};
};

/// H^{-1} = (s^2+1)/s, E1 = K x^3/3, E2 = K x, u = 0. Throws DomainError for K < 0.
MixedFeedbackSystem van_der_pol(double K);
MixedFeedbackSystem van_der_pol(const VdpParams& params);

/// Scalar problem 0 = x^3/3 - x with potential x^4/12 - x^2/2.
struct DoubleWell {
  static double a(double x) { return x * x * x / 3.0; }
  static double b(double x) { return x; }
  static double objective(double x) { return x * x * x * x / 12.0 - x * x / 2.0; }
};

DoubleWell double_well();

/// Period guess: min(2 pi (1 + K^2/16), (3 - 2 ln 2) K + 3 a1 K^{-1/3}),
/// with a1 the magnitude of the first zero of the Airy function.
double period_guess(double K);

struct DescribingFunctionPrediction {
  double amplitude;
  double frequency_rad_s;
};

/// Classical harmonic-balance prediction, independent of K.
DescribingFunctionPrediction describing_function_baseline(double K);

/// samples[k] = slope * k * h.
PeriodicSignal initial_guess_ramp(const PeriodicGrid& grid, double slope);

}  // namespace monocycle
