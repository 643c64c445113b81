#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

namespace monocycle::cli {

/// Exit statuses shared by every command.
enum ExitCode : int {
  kOk = 0,
  kBadConfig = 1,
  kNotConverged = 2,
  kResonance = 3,
};

struct RunConfig {
  std::string command = "solve";
  /// "vdp" or a path to a system-definition file.
  std::string system = "vdp";
  double K = 1.5;
  std::size_t N = 5000;
  /// Defaults to 0.05, or 0.01 when K >= 10.
  std::optional<double> lambda;
  double eps1 = 0.01;
  double eps2 = 0.01;
  /// "auto" or a positive number.
  std::string period = "auto";
  /// ramp:<slope> | zero | file:<path>. For `scalar`, a number.
  std::optional<std::string> init;
  bool adapt_period = false;
  std::filesystem::path out_dir = ".";
  std::uint64_t seed = 0;
  std::size_t max_outer = 100;
  std::size_t max_inner = 10000;
  /// "estimate" or "step".
  std::string inner_stop = "estimate";
  bool phase_align = true;
  /// Oracle initial state; x0 defaults to 2, or 1 when K == 0.
  std::optional<double> x0;
  double v0 = 0.0;
  double oracle_step = 1e-4;
  /// Defaults to 40 period guesses.
  std::optional<double> t_end;

  double effective_lambda() const;
  double effective_x0() const;
};

nlohmann::json config_to_json(const RunConfig& cfg);

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_oracle(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_scalar(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Dispatches on cfg.command. Never throws.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace monocycle::cli
