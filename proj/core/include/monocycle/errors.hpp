#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace monocycle {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two signals live on different grids, or a sample vector has the wrong length.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid numeric input such as non-finite samples or a non-positive period.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A discrete Fourier mode makes a circulant system (near-)singular.
class ResonanceError : public Error {
 public:
  ResonanceError(const std::string& what, std::size_t mode, double frequency_rad_s)
      : Error(what), mode_(mode), frequency_(frequency_rad_s) {}

  std::size_t mode() const noexcept { return mode_; }
  /// Offending discrete frequency 2*pi*k/T in rad/s.
  double frequency() const noexcept { return frequency_; }

 private:
  std::size_t mode_;
  double frequency_;
};

/// A relation that must be monotone is not.
class MonotonicityError : public Error {
 public:
  using Error::Error;
};

/// An iteration ran out of budget. Carries the change history.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, std::vector<double> history,
                      std::vector<double> last_iterate)
      : Error(what), history_(std::move(history)), last_(std::move(last_iterate)) {}

  const std::vector<double>& history() const noexcept { return history_; }
  const std::vector<double>& last_iterate() const noexcept { return last_; }

 private:
  std::vector<double> history_;
  std::vector<double> last_;
};

/// Time integration blew up.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Not enough settled oscillation in a trajectory to extract a cycle.
class TransientError : public Error {
 public:
  using Error::Error;
};

/// Invalid user configuration. `field()` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& what, std::size_t line = 0)
      : Error(what), field_(field), line_(line) {}

  const std::string& field() const noexcept { return field_; }
  /// 1-based line in a definition file, 0 when not applicable.
  std::size_t line() const noexcept { return line_; }

 private:
  std::string field_;
  std::size_t line_;
};

}  // namespace monocycle
