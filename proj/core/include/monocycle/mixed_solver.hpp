#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "monocycle/errors.hpp"
#include "monocycle/signal.hpp"
#include "monocycle/splitting.hpp"
#include "monocycle/systems.hpp"

namespace monocycle {

struct OuterConfig {
  double tol_eps1 = 0.01;
  std::size_t max_outer_iters = 100;
  DrConfig dr;
  /// Rescale the grid period between outer iterations.
  bool period_adaptation = false;
  /// Measure the outer change after removing the best cyclic time shift.
  bool phase_align = true;
  /// Cap on grid period updates when adaptation is on.
  std::size_t max_period_updates = 10;
  double relative_floor = 1e-12;

  void validate() const;
};

struct SolveReport {
  PeriodicSignal solution;
  std::size_t outer_iters = 0;
  std::vector<std::size_t> per_outer_inner_iters;
  std::vector<double> relative_change_history;
  /// |A(y) - B(y)| at the returned solution.
  double residual_norm = 0.0;
  double amplitude = 0.0;
  /// Grid period divided by the number of up-crossings; absent without crossings.
  std::optional<double> period_estimate;
  bool converged = false;
  /// Time shift (seconds) between consecutive outer iterates.
  std::vector<double> phase_drift_history;
  /// Grid period in force at each outer iteration.
  std::vector<double> grid_period_history;
};

/// Outer iteration ran out of budget. Holds the partial report.
class SolveNonConvergence : public NonConvergenceError {
 public:
  SolveNonConvergence(const std::string& what, SolveReport report);
  const SolveReport& report() const noexcept { return report_; }

 private:
  SolveReport report_;
};

/// Solves 0 in A(y) - B(y) by repeatedly solving 0 in A(w) - B(y_i) with Douglas-Rachford.
/// F1 is the LTI part of A, F2 the static part with offset u + B(y_i).
/// Throws SolveNonConvergence when max_outer_iters is exhausted.
SolveReport solve_mixed(const MixedFeedbackSystem& sys, const PeriodicSignal& y0,
                        const OuterConfig& cfg);

/// One outer step y -> zero of A(w) - B(y), warm-started at y.
PeriodicSignal outer_step(const MixedFeedbackSystem& sys, const PeriodicSignal& y,
                          const DrConfig& cfg);

/// |A(y) - B(y)|, with H^{-1} handled as a relation (see lti_inclusion_residual).
double residual_norm(const MixedFeedbackSystem& sys, const PeriodicSignal& y);

/// Grid period over the number of up-crossings.
std::optional<double> estimate_period(const PeriodicSignal& y);

struct AlignedChange {
  double change;
  /// Shift in samples applied to `next` before comparing: next(t) ~ prev(t - shift).
  double shift_samples;
};

/// relative_change after removing the best fractional cyclic shift of `next`.
AlignedChange aligned_relative_change(const PeriodicSignal& next, const PeriodicSignal& prev,
                                      double floor = 1e-12);

/// Fractional delay d (samples) maximizing the circular correlation of x(t) with ref(t - d).
double estimate_shift(const PeriodicSignal& x, const PeriodicSignal& ref);
/// Band-limited delay by d samples: out(t) = x(t - d h).
PeriodicSignal fractional_shift(const PeriodicSignal& x, double d);

struct ScalarSolveResult {
  double x_star = 0.0;
  std::size_t iters = 0;
  /// x_0, x_1, ..., x_iters.
  std::vector<double> trajectory;
};

struct ScalarOptions {
  /// Raise DomainError if an iterate leaves the sign of x0.
  bool restrict_sign = true;
  double floor = 1e-12;
};

/// x_{i+1} = A^{-1}(B(x_i)) until |x_{i+1} - x_i| / max(|x_i|, floor) < tol.
ScalarSolveResult scalar_mixed_solve(const std::function<double(double)>& a,
                                     const std::function<double(double)>& b, double x0,
                                     double tol, std::size_t max_iters,
                                     const ScalarOptions& opts = {});

/// Root of a(x) = target for strictly increasing a.
double invert_increasing(const std::function<double(double)>& a, double target,
                         double start = 0.0);

struct ContractionReport {
  double sampled_lipschitz_max = 0.0;
  /// Coercivity of A over the probes; 0 when A is not supplied.
  double alpha_estimate = 0.0;
  /// Cocoercivity of B over the probes; 0 when B is not supplied.
  double beta_estimate = 0.0;
  bool contraction_predicted = false;
  std::size_t probes_used = 0;
  std::size_t probes_failed = 0;
};

/// Samples |map(u) - map(v)| / |u - v| over seeded probe pairs in a ball around center.
/// Failed probes are skipped; throws Error if every probe fails.
ContractionReport estimate_contraction(const SignalMap& map, const PeriodicSignal& center,
                                       double radius, std::size_t num_probes,
                                       std::uint64_t seed, const SignalMap& a_forward = {},
                                       const SignalMap& b_forward = {});

ContractionReport estimate_contraction(const std::function<double(double)>& map, double center,
                                       double radius, std::size_t num_probes,
                                       std::uint64_t seed,
                                       const std::function<double(double)>& a_forward = {},
                                       const std::function<double(double)>& b_forward = {});

struct PeriodAdaptation {
  PeriodicGrid grid;
  PeriodicSignal signal;
  bool changed = false;
  /// Fewer than two crossings.
  bool warning = false;
  std::optional<double> estimated_period;
};

/// New period = 2 x mean gap between consecutive zero crossings in [0, T).
/// The iterate is resampled in time onto the new grid. No-op below 1% change.
PeriodAdaptation adapt_period(const PeriodicSignal& iterate);

/// Scale s in [lo, hi] minimizing residual_norm of the same samples on a grid of period s T.
double fit_period_scale(const MixedFeedbackSystem& sys, const PeriodicSignal& y,
                        double lo = 0.8, double hi = 1.25);

}  // namespace monocycle
