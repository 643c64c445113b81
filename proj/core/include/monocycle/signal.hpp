#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace monocycle {

/// Uniform grid of N samples over one period T. Step h = T/N.
class PeriodicGrid {
 public:
  /// Throws DomainError unless T is finite and positive and N >= 4.
  PeriodicGrid(double period, std::size_t num_samples);

  double period() const noexcept { return period_; }
  std::size_t size() const noexcept { return n_; }
  double step() const noexcept { return step_; }
  double time(std::size_t k) const noexcept { return static_cast<double>(k) * step_; }

  /// Same N, different period.
  PeriodicGrid with_period(double period) const { return PeriodicGrid(period, n_); }

  bool operator==(const PeriodicGrid&) const = default;

 private:
  double period_;
  std::size_t n_;
  double step_;
};

/// Immutable T-periodic sampled signal with cyclic indexing.
class PeriodicSignal {
 public:
  /// Throws DimensionError on a length mismatch and DomainError on non-finite samples.
  PeriodicSignal(const PeriodicGrid& grid, std::vector<double> samples);

  static PeriodicSignal zeros(const PeriodicGrid& grid);
  static PeriodicSignal constant(const PeriodicGrid& grid, double value);

  /// Samples f(t_k) for k = 0..N-1.
  template <class F>
  static PeriodicSignal sample(const PeriodicGrid& grid, F&& f) {
    std::vector<double> v(grid.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = f(grid.time(k));
    return PeriodicSignal(grid, std::move(v));
  }

  const PeriodicGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return samples_.size(); }
  std::span<const double> samples() const noexcept { return samples_; }
  const std::vector<double>& values() const noexcept { return samples_; }

  double operator[](std::size_t k) const noexcept { return samples_[k]; }
  /// Cyclic access: at(-1) == at(N-1), at(N) == at(0).
  double at(std::ptrdiff_t k) const noexcept;

  double max_abs() const noexcept;
  double min() const noexcept;
  double max() const noexcept;

  /// Same samples reinterpreted on a grid with equal N.
  PeriodicSignal on_grid(const PeriodicGrid& grid) const;

  friend PeriodicSignal operator+(const PeriodicSignal& a, const PeriodicSignal& b);
  friend PeriodicSignal operator-(const PeriodicSignal& a, const PeriodicSignal& b);
  friend PeriodicSignal operator*(double s, const PeriodicSignal& a);
  friend PeriodicSignal operator-(const PeriodicSignal& a);

  bool operator==(const PeriodicSignal&) const = default;

 private:
  PeriodicGrid grid_;
  std::vector<double> samples_;
};

/// Sum of a[n]*b[n]. Throws DimensionError on grid mismatch.
double inner_product(const PeriodicSignal& a, const PeriodicSignal& b);
double norm(const PeriodicSignal& a);

/// Central difference (x[k+1] - x[k-1]) / 2h with wraparound.
PeriodicSignal diff1(const PeriodicSignal& x);
/// Second difference (x[k+1] - 2x[k] + x[k-1]) / h^2 with wraparound.
PeriodicSignal diff2(const PeriodicSignal& x);

/// max|new - old| / max(max|old|, floor).
double relative_change(const PeriodicSignal& next, const PeriodicSignal& prev,
                       double floor = 1e-12);

struct Crossing {
  double time;
  bool rising;
};

/// Sign changes between cyclically adjacent samples, linearly interpolated, sorted in [0, T).
/// An exact-zero sample counts once, at its own time.
std::vector<Crossing> sign_changes(const PeriodicSignal& x);
std::vector<double> zero_crossings(const PeriodicSignal& x);
std::vector<double> up_crossings(const PeriodicSignal& x);

/// Rotate samples: out[k] = x[k - m].
PeriodicSignal cyclic_shift(const PeriodicSignal& x, std::ptrdiff_t m);

/// Periodic linear interpolation of x onto another grid (any N, any T).
/// Time is mapped proportionally: t' / T' = t / T.
PeriodicSignal resample(const PeriodicSignal& x, const PeriodicGrid& target);

/// Half of max - min.
double amplitude(const PeriodicSignal& x);

}  // namespace monocycle
