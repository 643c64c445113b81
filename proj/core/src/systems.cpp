#include "monocycle/systems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "monocycle/errors.hpp"

namespace monocycle {

InputSpec InputSpec::sine(double amplitude, double frequency) {
  InputSpec s;
  s.kind = Kind::sine;
  s.amplitude = amplitude;
  s.frequency = frequency;
  return s;
}

InputSpec InputSpec::from_samples(PeriodicSignal table) {
  InputSpec s;
  s.kind = Kind::samples;
  s.table = std::move(table);
  return s;
}

PeriodicSignal InputSpec::on(const PeriodicGrid& grid) const {
  switch (kind) {
    case Kind::zero:
      return PeriodicSignal::zeros(grid);
    case Kind::sine:
      return PeriodicSignal::sample(
          grid, [&](double t) { return amplitude * std::sin(frequency * t); });
    case Kind::samples: {
      const PeriodicSignal& x = *table;
      const double h = x.grid().step();
      return PeriodicSignal::sample(grid, [&](double t) {
        const double pos = std::fmod(t, x.grid().period()) / h;
        const double fl = std::floor(pos);
        const auto i = static_cast<std::ptrdiff_t>(fl);
        return (1.0 - (pos - fl)) * x.at(i) + (pos - fl) * x.at(i + 1);
      });
    }
  }
  return PeriodicSignal::zeros(grid);
}

PeriodicSignal apply_a(const MixedFeedbackSystem& sys, const PeriodicSignal& y) {
  return apply_lti(sys.forward_h_inverse, y) + sys.negative_feedback_e1.apply(y) -
         sys.input.on(y.grid());
}

PeriodicSignal apply_b(const MixedFeedbackSystem& sys, const PeriodicSignal& y) {
  return apply_feedback(sys.positive_feedback_e2, y);
}

void validate_system(const MixedFeedbackSystem& sys) {
  const PeriodicGrid grid(2.0 * std::numbers::pi, 16);
  const double lo = sys.operating_interval.lo;
  const double hi = sys.operating_interval.hi;
  std::vector<PeriodicSignal> probes;
  for (int i = 0; i <= 6; ++i) {
    probes.push_back(PeriodicSignal::constant(grid, lo + (hi - lo) * i / 6.0));
  }
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  for (double frac : {0.25, 0.5, 1.0}) {
    probes.push_back(PeriodicSignal::sample(
        grid, [&](double t) { return mid + frac * half * std::sin(t); }));
    probes.push_back(PeriodicSignal::sample(
        grid, [&](double t) { return mid + frac * half * std::cos(2.0 * t); }));
  }
  const auto e1 = sys.negative_feedback_e1.without_offset();
  const auto r1 = empirical_monotonicity_check([&](const PeriodicSignal& x) { return e1.apply(x); },
                                               probes);
  if (!r1.monotone()) throw MonotonicityError(sys.label + ": E1 is not monotone on its range");
  const auto r2 = empirical_monotonicity_check(
      [&](const PeriodicSignal& x) { return apply_feedback(sys.positive_feedback_e2, x); },
      probes);
  if (!r2.monotone()) throw MonotonicityError(sys.label + ": E2 is not monotone on its range");
}

MixedFeedbackSystem van_der_pol(double K) {
  if (!(K >= 0.0) || !std::isfinite(K)) throw DomainError("Van der Pol K must be >= 0");
  return MixedFeedbackSystem{
      "vdp",
      LtiRelation({1.0, 0.0, 1.0}, {0.0, 1.0}),
      StaticPolyRelation(Polynomial({0.0, 0.0, 0.0, K / 3.0})),
      GainRelation(K),
      InputSpec::zero(),
  };
}

MixedFeedbackSystem van_der_pol(const VdpParams& params) { return van_der_pol(params.K); }

DoubleWell double_well() { return {}; }

double period_guess(double K) {
  if (!(K >= 0.0)) throw DomainError("period_guess needs K >= 0");
  const double two_pi = 2.0 * std::numbers::pi;
  const double small = two_pi * (1.0 + K * K / 16.0);
  if (K == 0.0) return small;
  constexpr double airy_a1 = 2.338107410459767;
  const double large = (3.0 - 2.0 * std::numbers::ln2) * K + 3.0 * airy_a1 * std::cbrt(1.0 / K);
  return std::min(small, large);
}

DescribingFunctionPrediction describing_function_baseline(double) { return {2.0, 1.0}; }

PeriodicSignal initial_guess_ramp(const PeriodicGrid& grid, double slope) {
  return PeriodicSignal::sample(grid, [&](double t) { return slope * t; });
}

}  // namespace monocycle
