#include "monocycle/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "monocycle/errors.hpp"

namespace monocycle {

void DrConfig::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(lambda)) throw ConfigError("lambda", "lambda must be positive");
  if (!positive(tol_eps2)) throw ConfigError("eps2", "eps2 must be positive");
  if (max_inner_iters < 1) throw ConfigError("max_inner_iters", "max_inner_iters must be >= 1");
  if (residual_tol && !positive(*residual_tol)) {
    throw ConfigError("residual_tol", "residual_tol must be positive");
  }
  if (rate_window < 1) throw ConfigError("rate_window", "rate_window must be >= 1");
  if (!positive(relative_floor)) throw ConfigError("relative_floor", "floor must be positive");
}

PeriodicSignal dr_step(const SignalMap& res_f1, const SignalMap& res_f2,
                       const PeriodicSignal& y) {
  const PeriodicSignal w_half = res_f1(y);
  const PeriodicSignal w = res_f2(2.0 * w_half - y);
  return y + w - w_half;
}

DrResult dr_solve(const SignalMap& res_f1, const SignalMap& res_f2, const PeriodicSignal& y0,
                  const DrConfig& cfg, const ResidualFn& residual) {
  cfg.validate();
  PeriodicSignal y = y0;
  std::vector<double> steps;
  std::vector<double> history;

  for (std::size_t j = 1; j <= cfg.max_inner_iters; ++j) {
    const PeriodicSignal w_half = res_f1(y);
    PeriodicSignal w = res_f2(2.0 * w_half - y);
    PeriodicSignal next = y + w - w_half;

    const double change = relative_change(next, y, cfg.relative_floor);
    const double step = change * std::max(y.max_abs(), cfg.relative_floor);
    steps.push_back(step);
    history.push_back(change);
    y = std::move(next);

    bool done = false;
    if (step == 0.0) {
      done = true;
    } else if (cfg.stop_rule == StopRule::step) {
      done = change < cfg.tol_eps2;
    } else if (steps.size() > cfg.rate_window) {
      const double earlier = steps[steps.size() - 1 - cfg.rate_window];
      const double rho =
          earlier > 0.0 ? std::pow(step / earlier, 1.0 / static_cast<double>(cfg.rate_window))
                        : 0.0;
      if (rho < 1.0) done = change * std::max(1.0, rho / (1.0 - rho)) < cfg.tol_eps2;
    }

    std::optional<double> res;
    if (done && residual && cfg.residual_tol) {
      res = residual(w);
      done = *res <= *cfg.residual_tol * (1.0 + norm(w));
    }
    if (done) {
      DrResult out{std::move(w), y, j, change, res};
      if (residual && !out.residual_norm) out.residual_norm = residual(out.zero_candidate);
      return out;
    }
  }
  throw NonConvergenceError("Douglas-Rachford did not meet eps2 within " +
                                std::to_string(cfg.max_inner_iters) + " iterations",
                            std::move(history), y.values());
}

}  // namespace monocycle
