#include "monocycle_cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>

#include "monocycle/errors.hpp"
#include "monocycle/io.hpp"
#include "monocycle/mixed_solver.hpp"
#include "monocycle/oracle.hpp"
#include "monocycle/system_file.hpp"
#include "monocycle/systems.hpp"

namespace monocycle::cli {

using nlohmann::json;

double RunConfig::effective_lambda() const {
  if (lambda) return *lambda;
  return K >= 10.0 ? 0.01 : 0.05;
}

double RunConfig::effective_x0() const {
  if (x0) return *x0;
  return K == 0.0 ? 1.0 : 2.0;
}

json config_to_json(const RunConfig& cfg) {
  json j;
  j["command"] = cfg.command;
  j["system"] = cfg.system;
  j["K"] = cfg.K;
  j["N"] = cfg.N;
  j["lambda"] = cfg.effective_lambda();
  j["eps1"] = cfg.eps1;
  j["eps2"] = cfg.eps2;
  j["period"] = cfg.period;
  j["init"] = cfg.init ? json(*cfg.init) : json(nullptr);
  j["adapt_period"] = cfg.adapt_period;
  j["out_dir"] = cfg.out_dir.generic_string();
  j["seed"] = cfg.seed;
  j["max_outer"] = cfg.max_outer;
  j["max_inner"] = cfg.max_inner;
  j["inner_stop"] = cfg.inner_stop;
  j["phase_align"] = cfg.phase_align;
  j["x0"] = cfg.effective_x0();
  j["v0"] = cfg.v0;
  j["oracle_step"] = cfg.oracle_step;
  j["t_end"] = cfg.t_end ? json(*cfg.t_end) : json(nullptr);
  return j;
}

namespace {

void check_config(const RunConfig& cfg) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!(cfg.K >= 0.0) || !std::isfinite(cfg.K)) throw ConfigError("K", "K must be >= 0");
  if (cfg.N < 4) throw ConfigError("N", "N must be at least 4");
  if (!positive(cfg.effective_lambda())) throw ConfigError("lambda", "lambda must be positive");
  if (!positive(cfg.eps1)) throw ConfigError("eps1", "eps1 must be positive");
  if (!positive(cfg.eps2)) throw ConfigError("eps2", "eps2 must be positive");
  if (cfg.max_outer < 1) throw ConfigError("max_outer", "max_outer must be >= 1");
  if (cfg.max_inner < 1) throw ConfigError("max_inner", "max_inner must be >= 1");
  if (cfg.inner_stop != "estimate" && cfg.inner_stop != "step") {
    throw ConfigError("inner_stop", "inner_stop must be 'estimate' or 'step'");
  }
  if (!positive(cfg.oracle_step)) throw ConfigError("oracle_step", "step must be positive");
  if (cfg.t_end && !positive(*cfg.t_end)) throw ConfigError("t_end", "t_end must be positive");
}

bool is_builtin(const RunConfig& cfg) { return cfg.system == "vdp"; }

MixedFeedbackSystem load_system(const RunConfig& cfg) {
  if (is_builtin(cfg)) return van_der_pol(cfg.K);
  return load_system_definition(cfg.system);
}

double grid_period(const RunConfig& cfg) {
  if (cfg.period == "auto") return is_builtin(cfg) ? period_guess(cfg.K) : 2.0 * std::numbers::pi;
  double v = 0.0;
  try {
    std::size_t used = 0;
    v = std::stod(cfg.period, &used);
    if (used != cfg.period.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ConfigError("period", "period must be 'auto' or a positive number");
  }
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("period", "period must be positive");
  return v;
}

PeriodicSignal initial_iterate(const RunConfig& cfg, const PeriodicGrid& grid) {
  const std::string init = cfg.init.value_or("ramp:1");
  if (init == "zero") return PeriodicSignal::zeros(grid);
  if (init.rfind("ramp:", 0) == 0) {
    try {
      std::size_t used = 0;
      const std::string s = init.substr(5);
      const double slope = std::stod(s, &used);
      if (used != s.size() || !std::isfinite(slope)) throw std::invalid_argument("slope");
      return initial_guess_ramp(grid, slope);
    } catch (const std::exception&) {
      throw ConfigError("init", "ramp slope is not a number");
    }
  }
  if (init.rfind("file:", 0) == 0) {
    const PeriodicSignal x = read_signal_csv(std::filesystem::path(init.substr(5)));
    return resample(x, grid);
  }
  throw ConfigError("init", "init must be ramp:<slope>, zero or file:<path>");
}

OuterConfig outer_config(const RunConfig& cfg) {
  OuterConfig oc;
  oc.tol_eps1 = cfg.eps1;
  oc.max_outer_iters = cfg.max_outer;
  oc.period_adaptation = cfg.adapt_period;
  oc.phase_align = cfg.phase_align;
  oc.dr.lambda = cfg.effective_lambda();
  oc.dr.tol_eps2 = cfg.eps2;
  oc.dr.max_inner_iters = cfg.max_inner;
  oc.dr.stop_rule = cfg.inner_stop == "step" ? StopRule::step : StopRule::error_estimate;
  return oc;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json report_to_json(const SolveReport& r) {
  json j;
  j["converged"] = r.converged;
  j["outer_iters"] = r.outer_iters;
  j["per_outer_inner_iters"] = r.per_outer_inner_iters;
  j["relative_change_history"] = r.relative_change_history;
  j["residual_norm"] = r.residual_norm;
  j["amplitude"] = r.amplitude;
  j["period_estimate"] = optional_json(r.period_estimate);
  j["grid_period"] = r.solution.grid().period();
  j["num_samples"] = r.solution.size();
  j["phase_drift_history"] = r.phase_drift_history;
  j["grid_period_history"] = r.grid_period_history;
  return j;
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("out_dir", "cannot write " + path.string());
  os << j.dump(2) << '\n';
}

void prepare_out_dir(const RunConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw ConfigError("out_dir", "cannot create " + cfg.out_dir.string());
}

struct SolveOutcome {
  SolveReport report;
  int code;
  std::string message;
};

// Runs the solver; non-convergence is folded into the outcome.
SolveOutcome run_solver(const RunConfig& cfg) {
  const MixedFeedbackSystem sys = load_system(cfg);
  const PeriodicGrid grid(grid_period(cfg), cfg.N);
  const PeriodicSignal y0 = initial_iterate(cfg, grid);
  const OuterConfig oc = outer_config(cfg);
  try {
    return {solve_mixed(sys, y0, oc), kOk, {}};
  } catch (const SolveNonConvergence& e) {
    return {e.report(), kNotConverged, e.what()};
  } catch (const NonConvergenceError& e) {
    SolveReport r{y0, 0, {}, e.history(), 0.0, 0.0, std::nullopt, false, {}, {}};
    if (e.last_iterate().size() == grid.size()) r.solution = PeriodicSignal(grid, e.last_iterate());
    r.amplitude = amplitude(r.solution);
    r.residual_norm = residual_norm(sys, r.solution);
    return {r, kNotConverged, e.what()};
  }
}

OdeConfig oracle_config(const RunConfig& cfg) {
  OdeConfig oc;
  oc.step = cfg.oracle_step;
  oc.t_end = cfg.t_end.value_or(40.0 * period_guess(cfg.K));
  oc.x0 = cfg.effective_x0();
  oc.v0 = cfg.v0;
  oc.record_stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(1e-3 / cfg.oracle_step)));
  return oc;
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "error: " << e.field() << ": " << e.what() << '\n';
    return kBadConfig;
  } catch (const ResonanceError& e) {
    err << "error: resonance at " << e.frequency() << " rad/s: " << e.what() << '\n';
    return kResonance;
  } catch (const DivergenceError& e) {
    err << "error: divergence: " << e.what() << '\n';
    return kResonance;
  } catch (const NonConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kNotConverged;
  } catch (const TransientError& e) {
    err << "error: " << e.what() << '\n';
    return kNotConverged;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kBadConfig;
  }
}

}  // namespace

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    check_config(cfg);
    prepare_out_dir(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    SolveOutcome o = run_solver(cfg);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_signal_csv(cfg.out_dir / "waveform.csv", o.report.solution);
    json j = report_to_json(o.report);
    j["config"] = config_to_json(cfg);
    j["wall_clock_seconds"] = secs;
    write_json(cfg.out_dir / "report.json", j);
    if (o.code != kOk) {
      err << "warning: " << o.message << '\n';
    }
    out << "solve: converged=" << (o.report.converged ? "true" : "false")
        << " outer_iters=" << o.report.outer_iters << " amplitude=" << o.report.amplitude
        << " period=" << (o.report.period_estimate ? *o.report.period_estimate : 0.0)
        << " residual=" << o.report.residual_norm << '\n';
    return o.code;
  });
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    check_config(cfg);
    prepare_out_dir(cfg);
    const OdeRun run = integrate_vdp(cfg.K, oracle_config(cfg));
    const LimitCycleFeatures f = extract_limit_cycle(run, 0.5, cfg.N);
    write_signal_csv(cfg.out_dir / "waveform.csv", f.waveform);
    json j;
    j["amplitude"] = f.amplitude;
    j["period"] = f.period;
    j["config"] = config_to_json(cfg);
    write_json(cfg.out_dir / "features.json", j);
    out << "oracle: amplitude=" << f.amplitude << " period=" << f.period << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    check_config(cfg);
    if (!is_builtin(cfg)) throw ConfigError("system", "compare supports the builtin vdp system");
    prepare_out_dir(cfg);
    const SolveOutcome s = run_solver(cfg);
    const OdeRun run = integrate_vdp(cfg.K, oracle_config(cfg));
    const LimitCycleFeatures f = extract_limit_cycle(run, 0.5, cfg.N);
    const auto df = describing_function_baseline(cfg.K);
    const double df_period = 2.0 * std::numbers::pi / df.frequency_rad_s;
    const double solver_period = s.report.period_estimate.value_or(0.0);
    const WaveformComparison cmp = compare_waveforms(f.waveform, s.report.solution);

    json j;
    j["solver"] = {{"amplitude", s.report.amplitude},
                   {"period", optional_json(s.report.period_estimate)},
                   {"converged", s.report.converged},
                   {"outer_iters", s.report.outer_iters}};
    j["oracle"] = {{"amplitude", f.amplitude}, {"period", f.period}};
    j["describing_function"] = {{"amplitude", df.amplitude}, {"period", df_period}};
    j["solver_vs_oracle_rms"] = cmp.rms_error;
    j["solver_vs_oracle_phase_shift"] = cmp.phase_shift;
    j["solver_period_error"] = std::abs(solver_period - f.period) / f.period;
    j["describing_function_period_error"] = std::abs(df_period - f.period) / f.period;
    j["config"] = config_to_json(cfg);
    write_json(cfg.out_dir / "comparison.json", j);
    out << "compare: solver(amp=" << s.report.amplitude << ", period=" << solver_period
        << ") oracle(amp=" << f.amplitude << ", period=" << f.period << ") df(amp="
        << df.amplitude << ", period=" << df_period << ") rms=" << cmp.rms_error << '\n';
    if (s.code != kOk) return s.code;
    return cmp.rms_error < 0.05 ? static_cast<int>(kOk) : static_cast<int>(kNotConverged);
  });
}

int cmd_scalar(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    double x0 = 0.3;
    if (cfg.init) {
      try {
        std::size_t used = 0;
        x0 = std::stod(*cfg.init, &used);
        if (used != cfg.init->size() || !std::isfinite(x0)) throw std::invalid_argument("x0");
      } catch (const std::exception&) {
        throw ConfigError("init", "scalar init must be a number");
      }
    }
    prepare_out_dir(cfg);
    const ScalarSolveResult r =
        scalar_mixed_solve(DoubleWell::a, DoubleWell::b, x0, 1e-10, 10000);
    std::ofstream os(cfg.out_dir / "trajectory.csv", std::ios::binary);
    if (!os) throw ConfigError("out_dir", "cannot write trajectory.csv");
    os << "iteration,x\n";
    for (std::size_t i = 0; i < r.trajectory.size(); ++i) {
      os << i << ',' << format_number(r.trajectory[i]) << '\n';
    }
    out << "scalar: x_star=" << format_number(r.x_star) << " iters=" << r.iters << '\n';
    return static_cast<int>(kOk);
  });
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.command == "solve") return cmd_solve(cfg, out, err);
  if (cfg.command == "oracle") return cmd_oracle(cfg, out, err);
  if (cfg.command == "compare") return cmd_compare(cfg, out, err);
  if (cfg.command == "scalar") return cmd_scalar(cfg, out, err);
  err << "error: command: unknown command '" << cfg.command << "'\n";
  return kBadConfig;
}

}  // namespace monocycle::cli
