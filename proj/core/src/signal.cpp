#include "monocycle/signal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "monocycle/errors.hpp"

namespace monocycle {

PeriodicGrid::PeriodicGrid(double period, std::size_t num_samples)
    : period_(period), n_(num_samples), step_(period / static_cast<double>(num_samples)) {
  if (!std::isfinite(period) || period <= 0.0) {
    throw DomainError("grid period must be finite and positive, got " + std::to_string(period));
  }
  if (num_samples < 4) {
    throw DomainError("grid needs at least 4 samples, got " + std::to_string(num_samples));
  }
}

PeriodicSignal::PeriodicSignal(const PeriodicGrid& grid, std::vector<double> samples)
    : grid_(grid), samples_(std::move(samples)) {
  if (samples_.size() != grid_.size()) {
    throw DimensionError("signal has " + std::to_string(samples_.size()) +
                         " samples but grid has " + std::to_string(grid_.size()));
  }
  for (std::size_t k = 0; k < samples_.size(); ++k) {
    if (!std::isfinite(samples_[k])) {
      throw DomainError("non-finite sample at index " + std::to_string(k));
    }
  }
}

PeriodicSignal PeriodicSignal::zeros(const PeriodicGrid& grid) {
  return PeriodicSignal(grid, std::vector<double>(grid.size(), 0.0));
}

PeriodicSignal PeriodicSignal::constant(const PeriodicGrid& grid, double value) {
  return PeriodicSignal(grid, std::vector<double>(grid.size(), value));
}

double PeriodicSignal::at(std::ptrdiff_t k) const noexcept {
  const auto n = static_cast<std::ptrdiff_t>(samples_.size());
  std::ptrdiff_t r = k % n;
  if (r < 0) r += n;
  return samples_[static_cast<std::size_t>(r)];
}

double PeriodicSignal::max_abs() const noexcept {
  double m = 0.0;
  for (double v : samples_) m = std::max(m, std::abs(v));
  return m;
}

double PeriodicSignal::min() const noexcept {
  return *std::min_element(samples_.begin(), samples_.end());
}

double PeriodicSignal::max() const noexcept {
  return *std::max_element(samples_.begin(), samples_.end());
}

PeriodicSignal PeriodicSignal::on_grid(const PeriodicGrid& grid) const {
  return PeriodicSignal(grid, samples_);
}

namespace {

void require_same_grid(const PeriodicSignal& a, const PeriodicSignal& b, const char* op) {
  if (!(a.grid() == b.grid())) {
    throw DimensionError(std::string(op) + ": signals live on different grids");
  }
}

}  // namespace

PeriodicSignal operator+(const PeriodicSignal& a, const PeriodicSignal& b) {
  require_same_grid(a, b, "operator+");
  std::vector<double> v(a.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = a.samples_[k] + b.samples_[k];
  return PeriodicSignal(a.grid_, std::move(v));
}

PeriodicSignal operator-(const PeriodicSignal& a, const PeriodicSignal& b) {
  require_same_grid(a, b, "operator-");
  std::vector<double> v(a.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = a.samples_[k] - b.samples_[k];
  return PeriodicSignal(a.grid_, std::move(v));
}

PeriodicSignal operator*(double s, const PeriodicSignal& a) {
  std::vector<double> v(a.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = s * a.samples_[k];
  return PeriodicSignal(a.grid_, std::move(v));
}

PeriodicSignal operator-(const PeriodicSignal& a) { return -1.0 * a; }

double inner_product(const PeriodicSignal& a, const PeriodicSignal& b) {
  require_same_grid(a, b, "inner_product");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double norm(const PeriodicSignal& a) { return std::sqrt(inner_product(a, a)); }

PeriodicSignal diff1(const PeriodicSignal& x) {
  const std::size_t n = x.size();
  const double inv = 1.0 / (2.0 * x.grid().step());
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    v[k] = (x[(k + 1) % n] - x[(k + n - 1) % n]) * inv;
  }
  return PeriodicSignal(x.grid(), std::move(v));
}

PeriodicSignal diff2(const PeriodicSignal& x) {
  const std::size_t n = x.size();
  const double h = x.grid().step();
  const double inv = 1.0 / (h * h);
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    v[k] = (x[(k + 1) % n] - 2.0 * x[k] + x[(k + n - 1) % n]) * inv;
  }
  return PeriodicSignal(x.grid(), std::move(v));
}

double relative_change(const PeriodicSignal& next, const PeriodicSignal& prev, double floor) {
  require_same_grid(next, prev, "relative_change");
  double d = 0.0;
  for (std::size_t k = 0; k < next.size(); ++k) d = std::max(d, std::abs(next[k] - prev[k]));
  return d / std::max(prev.max_abs(), floor);
}

std::vector<Crossing> sign_changes(const PeriodicSignal& x) {
  const std::size_t n = x.size();
  const double h = x.grid().step();
  std::vector<Crossing> out;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = x[k];
    const double b = x[(k + 1) % n];
    if (a == 0.0) {
      if (x[(k + n - 1) % n] == 0.0) continue;
      // Direction taken from the nearest nonzero neighbours.
      double before = 0.0;
      double after = 0.0;
      for (std::size_t j = 1; j < n && before == 0.0; ++j) before = x[(k + n - j) % n];
      for (std::size_t j = 1; j < n && after == 0.0; ++j) after = x[(k + j) % n];
      if (before == 0.0 && after == 0.0) continue;
      if (before == 0.0 || after == 0.0 || (before < 0.0) != (after < 0.0)) {
        out.push_back({x.grid().time(k), after > 0.0 || before < 0.0});
      }
      continue;
    }
    if (b == 0.0) continue;
    if ((a < 0.0) != (b < 0.0)) {
      out.push_back({(static_cast<double>(k) + a / (a - b)) * h, b > a});
    }
  }
  return out;
}

std::vector<double> zero_crossings(const PeriodicSignal& x) {
  std::vector<double> t;
  for (const auto& c : sign_changes(x)) t.push_back(c.time);
  return t;
}

std::vector<double> up_crossings(const PeriodicSignal& x) {
  std::vector<double> t;
  for (const auto& c : sign_changes(x)) {
    if (c.rising) t.push_back(c.time);
  }
  return t;
}

PeriodicSignal cyclic_shift(const PeriodicSignal& x, std::ptrdiff_t m) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  std::vector<double> v(x.size());
  for (std::ptrdiff_t k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = x.at(k - m);
  return PeriodicSignal(x.grid(), std::move(v));
}

PeriodicSignal resample(const PeriodicSignal& x, const PeriodicGrid& target) {
  const double n_src = static_cast<double>(x.size());
  const double n_dst = static_cast<double>(target.size());
  std::vector<double> v(target.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double pos = static_cast<double>(k) * n_src / n_dst;
    const double fl = std::floor(pos);
    const double frac = pos - fl;
    const auto i = static_cast<std::ptrdiff_t>(fl);
    v[k] = (1.0 - frac) * x.at(i) + frac * x.at(i + 1);
  }
  return PeriodicSignal(target, std::move(v));
}

double amplitude(const PeriodicSignal& x) { return 0.5 * (x.max() - x.min()); }

}  // namespace monocycle
