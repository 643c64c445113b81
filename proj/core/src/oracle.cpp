#include "monocycle/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "monocycle/errors.hpp"
#include "spectral.hpp"

namespace monocycle {

OdeRun integrate_vdp(double K, const OdeConfig& cfg) {
  if (!(cfg.step > 0.0)) throw ConfigError("step", "step must be positive");
  if (!(cfg.t_end > 0.0)) throw ConfigError("t_end", "t_end must be positive");
  if (cfg.record_stride < 1) throw ConfigError("record_stride", "record_stride must be >= 1");

  OdeRun run{K, cfg.step, cfg.t_end, cfg.x0, cfg.v0, {}};
  const auto steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.step));
  run.trajectory.reserve(steps / cfg.record_stride + 2);

  auto fx = [](double, double v) { return v; };
  auto fv = [K](double x, double v) { return -x - K * (x * x - 1.0) * v; };
  const double h = cfg.step;
  double x = cfg.x0;
  double v = cfg.v0;
  run.trajectory.push_back({0.0, x, v});
  for (std::size_t i = 1; i <= steps; ++i) {
    const double k1x = fx(x, v);
    const double k1v = fv(x, v);
    const double k2x = fx(x + 0.5 * h * k1x, v + 0.5 * h * k1v);
    const double k2v = fv(x + 0.5 * h * k1x, v + 0.5 * h * k1v);
    const double k3x = fx(x + 0.5 * h * k2x, v + 0.5 * h * k2v);
    const double k3v = fv(x + 0.5 * h * k2x, v + 0.5 * h * k2v);
    const double k4x = fx(x + h * k3x, v + h * k3v);
    const double k4v = fv(x + h * k3x, v + h * k3v);
    x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    const double t = static_cast<double>(i) * h;
    if (!(std::abs(x) <= 1e6 && std::abs(v) <= 1e6)) {
      throw DivergenceError("RK4 state exceeded 1e6 at t = " + std::to_string(t), t);
    }
    if (i % cfg.record_stride == 0 || i == steps) run.trajectory.push_back({t, x, v});
  }
  return run;
}

namespace {

// Cubic Hermite interpolation of x between two recorded states, using v = dx/dt.
double hermite(const OdeState& a, const OdeState& b, double t) {
  const double dt = b.t - a.t;
  const double s = (t - a.t) / dt;
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * a.x + (s3 - 2 * s2 + s) * dt * a.v + (-2 * s3 + 3 * s2) * b.x +
         (s3 - s2) * dt * b.v;
}

// Up-crossing time in [a.t, b.t], refined by bisection on the Hermite interpolant.
double crossing_time(const OdeState& a, const OdeState& b) {
  double lo = a.t;
  double hi = b.t;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (hermite(a, b, mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

LimitCycleFeatures extract_limit_cycle(const OdeRun& run, double discard_fraction,
                                       std::size_t num_samples) {
  if (!(discard_fraction >= 0.0 && discard_fraction < 1.0)) {
    throw ConfigError("discard_fraction", "discard_fraction must lie in [0, 1)");
  }
  const auto& tr = run.trajectory;
  if (tr.size() < 2) throw TransientError("trajectory is empty");
  const double t_start = tr.front().t + discard_fraction * (tr.back().t - tr.front().t);
  const auto first = static_cast<std::size_t>(
      std::lower_bound(tr.begin(), tr.end(), t_start,
                       [](const OdeState& s, double t) { return s.t < t; }) -
      tr.begin());

  std::vector<double> ups;
  std::vector<std::size_t> up_index;
  double xmax = -std::numeric_limits<double>::infinity();
  double xmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = first; i < tr.size(); ++i) {
    xmax = std::max(xmax, tr[i].x);
    xmin = std::min(xmin, tr[i].x);
    if (i + 1 < tr.size() && tr[i].x < 0.0 && tr[i + 1].x >= 0.0) {
      ups.push_back(crossing_time(tr[i], tr[i + 1]));
      up_index.push_back(i);
    }
  }
  if (ups.size() < 4) {
    throw TransientError("only " + std::to_string(ups.size()) +
                         " up-crossings after the discarded transient; increase t_end");
  }
  const double period = (ups.back() - ups.front()) / static_cast<double>(ups.size() - 1);

  // Resample the last complete cycle.
  const double t0 = ups[ups.size() - 2];
  const PeriodicGrid grid(period, num_samples);
  std::size_t j = up_index[up_index.size() - 2];
  std::vector<double> w(num_samples);
  for (std::size_t k = 0; k < num_samples; ++k) {
    const double t = t0 + grid.time(k);
    while (j + 1 < tr.size() && tr[j + 1].t < t) ++j;
    w[k] = j + 1 < tr.size() ? hermite(tr[j], tr[j + 1], t) : tr.back().x;
  }
  return {0.5 * (xmax - xmin), period, PeriodicSignal(grid, std::move(w))};
}

WaveformComparison compare_waveforms(const PeriodicSignal& a, const PeriodicSignal& b) {
  const std::size_t n = a.size();
  if (b.size() != n) {
    throw DimensionError("compare_waveforms: sample counts differ (" + std::to_string(n) +
                         " vs " + std::to_string(b.size()) + ")");
  }
  // c[m] = sum_k b[k] a[k - m]; the RMS difference is smallest where c is largest.
  auto bs = detail::rfft(b.values());
  const auto as = detail::rfft(a.values());
  for (std::size_t k = 0; k < bs.size(); ++k) bs[k] *= std::conj(as[k]);
  const auto c = detail::irfft(bs, n);
  std::size_t best = 0;
  for (std::size_t m = 1; m < n; ++m) {
    if (c[m] > c[best] + 1e-12 * std::abs(c[best])) best = m;
  }

  double diff2 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = b[(k + best) % n] - a[k];
    diff2 += d * d;
  }
  const double na2 = inner_product(a, a);
  const double nb2 = inner_product(b, b);
  const double scale = std::sqrt(0.5 * (na2 + nb2));
  auto m = static_cast<double>(best);
  if (m > 0.5 * static_cast<double>(n)) m -= static_cast<double>(n);
  return {scale > 0.0 ? std::sqrt(diff2) / scale : 0.0, m * a.grid().step()};
}

}  // namespace monocycle
