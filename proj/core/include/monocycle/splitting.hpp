#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "monocycle/operators.hpp"
#include "monocycle/signal.hpp"

namespace monocycle {

/// How the inner loop decides it is done.
enum class StopRule {
  /// Relative y-step below eps2.
  step,
  /// Relative y-step, inflated by rho/(1-rho) with rho the observed contraction rate,
  /// below eps2. Bounds the distance to the fixed point rather than the last step.
  error_estimate,
};

struct DrConfig {
  double lambda = 0.05;
  double tol_eps2 = 0.01;
  std::size_t max_inner_iters = 10000;
  /// When set together with a residual callback, convergence also needs
  /// residual(w) <= residual_tol * (1 + |w|).
  std::optional<double> residual_tol;
  StopRule stop_rule = StopRule::error_estimate;
  /// Steps spanned by the contraction-rate estimate.
  std::size_t rate_window = 5;
  double relative_floor = 1e-12;

  /// Throws ConfigError naming the bad field.
  void validate() const;
};

struct DrResult {
  PeriodicSignal zero_candidate;
  PeriodicSignal shadow;
  std::size_t inner_iters = 0;
  double final_relative_change = 0.0;
  std::optional<double> residual_norm;
};

/// Norm of F1(w) + F2(w), supplied by whoever owns the forward maps.
using ResidualFn = std::function<double(const PeriodicSignal&)>;

/// Douglas-Rachford iteration for 0 in F1(w) + F2(w):
///   w_half = res_f1(y); w = res_f2(2 w_half - y); y += w - w_half.
/// Throws NonConvergenceError when max_inner_iters is exhausted.
DrResult dr_solve(const SignalMap& res_f1, const SignalMap& res_f2, const PeriodicSignal& y0,
                  const DrConfig& cfg, const ResidualFn& residual = {});

/// One application of the Douglas-Rachford operator y -> y + w - w_half.
PeriodicSignal dr_step(const SignalMap& res_f1, const SignalMap& res_f2, const PeriodicSignal& y);

}  // namespace monocycle
