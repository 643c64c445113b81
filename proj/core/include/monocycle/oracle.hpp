#pragma once

#include <cstddef>
#include <vector>

#include "monocycle/signal.hpp"

namespace monocycle {

struct OdeConfig {
  double step = 1e-4;
  double t_end = 200.0;
  double x0 = 2.0;
  double v0 = 0.0;
  /// Keep every record_stride-th state.
  std::size_t record_stride = 10;
};

struct OdeState {
  double t;
  double x;
  double v;
};

struct OdeRun {
  double K = 0.0;
  double step = 0.0;
  double t_end = 0.0;
  double x0 = 0.0;
  double v0 = 0.0;
  std::vector<OdeState> trajectory;
};

/// Classical RK4 on x' = v, v' = -x - K (x^2 - 1) v.
/// Throws DivergenceError if |x| or |v| exceeds 1e6.
OdeRun integrate_vdp(double K, const OdeConfig& cfg);

struct LimitCycleFeatures {
  double amplitude;
  double period;
  /// One period starting at an up-crossing, N points.
  PeriodicSignal waveform;
};

/// Drops the first discard_fraction of the run, then measures the settled cycle.
/// Throws TransientError with fewer than 4 up-crossings left.
LimitCycleFeatures extract_limit_cycle(const OdeRun& run, double discard_fraction = 0.5,
                                       std::size_t num_samples = 5000);

struct WaveformComparison {
  /// Best-shift RMS difference over the RMS of the two signals.
  double rms_error;
  /// Delay of b relative to a, in seconds (grid of a).
  double phase_shift;
};

/// Minimizes the RMS difference over all cyclic shifts of b. Needs equal sample counts.
WaveformComparison compare_waveforms(const PeriodicSignal& a, const PeriodicSignal& b);

}  // namespace monocycle
