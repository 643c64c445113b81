#include <CLI11.hpp>
#include <iostream>

#include "monocycle_cli/commands.hpp"

namespace {

void add_common(CLI::App* sub, monocycle::cli::RunConfig& cfg) {
  sub->add_option("--K", cfg.K, "Van der Pol damping parameter");
  sub->add_option("--N", cfg.N, "Samples per period");
  sub->add_option("--out-dir", cfg.out_dir, "Directory for output artifacts");
  sub->add_option("--seed", cfg.seed, "Random seed");
}

void add_solver(CLI::App* sub, monocycle::cli::RunConfig& cfg, std::optional<double>& lambda) {
  sub->add_option("--system", cfg.system, "Builtin 'vdp' or a system-definition file");
  sub->add_option("--lambda", lambda, "Resolvent parameter (default 0.05, 0.01 for K >= 10)");
  sub->add_option("--eps1", cfg.eps1, "Outer relative-change tolerance");
  sub->add_option("--eps2", cfg.eps2, "Inner relative-change tolerance");
  sub->add_option("--period", cfg.period, "Grid period, or 'auto'");
  sub->add_option("--init", cfg.init, "ramp:<slope> | zero | file:<path>");
  sub->add_flag("--adapt-period", cfg.adapt_period, "Adapt the grid period during the solve");
  sub->add_option("--max-outer", cfg.max_outer, "Outer iteration budget");
  sub->add_option("--max-inner", cfg.max_inner, "Inner iteration budget");
  sub->add_option("--inner-stop", cfg.inner_stop, "Inner stop rule: estimate | step")
      ->check(CLI::IsMember({"estimate", "step"}));
  sub->add_flag("!--no-phase-align", cfg.phase_align,
                "Measure the outer change without removing time shifts");
}

void add_oracle(CLI::App* sub, monocycle::cli::RunConfig& cfg) {
  sub->add_option("--x0", cfg.x0, "Initial position (default 2, or 1 when K = 0)");
  sub->add_option("--v0", cfg.v0, "Initial velocity");
  sub->add_option("--step", cfg.oracle_step, "RK4 step");
  sub->add_option("--t-end", cfg.t_end, "Integration horizon (default 40 period guesses)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periodic solutions of mixed-feedback systems by monotone operator splitting"};
  app.require_subcommand(1);
  monocycle::cli::RunConfig cfg;
  std::optional<double> lambda;

  auto* solve = app.add_subcommand("solve", "Compute a periodic solution");
  add_common(solve, cfg);
  add_solver(solve, cfg, lambda);

  auto* oracle = app.add_subcommand("oracle", "RK4 reference limit cycle");
  add_common(oracle, cfg);
  add_oracle(oracle, cfg);

  auto* compare = app.add_subcommand("compare", "Solver vs. RK4 vs. describing function");
  add_common(compare, cfg);
  add_solver(compare, cfg, lambda);
  add_oracle(compare, cfg);

  auto* scalar = app.add_subcommand("scalar", "Double-well scalar iteration");
  scalar->add_option("--init", cfg.init, "Initial value x0");
  scalar->add_option("--out-dir", cfg.out_dir, "Directory for output artifacts");
  scalar->add_option("--seed", cfg.seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : monocycle::cli::kBadConfig;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  cfg.lambda = lambda;
  return monocycle::cli::run(cfg, std::cout, std::cerr);
}
