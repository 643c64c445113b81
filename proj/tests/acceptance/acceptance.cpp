#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "monocycle/mixed_solver.hpp"
#include "monocycle/oracle.hpp"
#include "monocycle/splitting.hpp"
#include "monocycle/systems.hpp"
#include "monocycle_cli/commands.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace monocycle;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

OuterConfig reference_config(double K) {
  OuterConfig c;
  c.dr.lambda = K >= 10.0 ? 0.01 : 0.05;
  return c;
}

SolveReport solve_vdp(double K) {
  const PeriodicGrid g(period_guess(K), 5000);
  return solve_mixed(van_der_pol(K), initial_guess_ramp(g, 1.0), reference_config(K));
}

LimitCycleFeatures oracle(double K) {
  OdeConfig oc;
  oc.step = 1e-4;
  oc.t_end = 40.0 * period_guess(K);
  oc.record_stride = 10;
  return extract_limit_cycle(integrate_vdp(K, oc));
}

Outcome double_well_points() {
  const Stopwatch sw;
  const auto dw = monocycle::double_well();
  const auto pos = scalar_mixed_solve(dw.a, dw.b, 0.3, 1e-10, 10000);
  const auto neg = scalar_mixed_solve(dw.a, dw.b, -0.3, 1e-10, 10000);
  const auto zero = scalar_mixed_solve(dw.a, dw.b, 0.0, 1e-10, 10000);
  const double secs = sw.seconds();
  const bool ok = std::abs(pos.x_star - 1.7321) <= 1e-4 && std::abs(neg.x_star + 1.7321) <= 1e-4 &&
                  zero.x_star == 0.0 && secs < 1.0;
  return {ok, "x*=" + fmt("%.6f", pos.x_star) + "/" + fmt("%.6f", neg.x_star) + "/" + fmt("%g", zero.x_star) +
                  " in " + fmt("%.3fs", secs)};
}

Outcome small_k_sinusoid(const SolveReport& r, double secs) {
  const double period = r.period_estimate.value_or(0.0);
  const double fit = testsupport::sinusoid_fit_error(r.solution);
  const bool ok = r.converged && std::abs(r.amplitude - 2.0) <= 0.05 &&
                  std::abs(period / (2.0 * std::numbers::pi) - 1.0) <= 0.02 && fit < 0.03 && secs < 60.0;
  return {ok, "amplitude " + fmt("%.4f", r.amplitude) + ", period " + fmt("%.4f", period) + ", sinusoid fit " +
                  fmt("%.4f", fit) + ", " + fmt("%.2fs", secs)};
}

Outcome iteration_counts(const SolveReport* reports[3]) {
  const std::size_t reference[3] = {10, 8, 8};
  bool ok = true;
  std::string detail;
  for (int i = 0; i < 3; ++i) {
    ok = ok && reports[i]->converged && reports[i]->outer_iters <= 2 * reference[i];
    detail += (i ? ", " : "") + std::to_string(reports[i]->outer_iters) + "/" + std::to_string(2 * reference[i]);
  }
  return {ok, "outer iterations vs limit " + detail};
}

Outcome relaxation(const SolveReport& r, const LimitCycleFeatures& f) {
  const auto cmp = compare_waveforms(f.waveform, resample(r.solution, f.waveform.grid()));
  const double period_err = std::abs(r.period_estimate.value_or(0.0) - f.period) / f.period;
  const double crest = testsupport::crest_factor(r.solution);
  const bool ok = r.converged && cmp.rms_error < 0.08 && period_err < 0.10 &&
                  std::abs(crest / std::sqrt(2.0) - 1.0) > 0.10;
  return {ok, "rms " + fmt("%.4f", cmp.rms_error) + ", period error " + fmt("%.2f%%", 100 * period_err) +
                  ", crest factor " + fmt("%.3f", crest)};
}

Outcome describing_function_contrast(const fs::path& dir) {
  cli::RunConfig c;
  c.command = "compare";
  c.K = 10.0;
  c.out_dir = dir / "compare";
  std::ostringstream out, err;
  const int code = cli::run(c, out, err);
  if (code != cli::kOk) return {false, "compare exited " + std::to_string(code) + ": " + err.str()};
  const auto j = nlohmann::json::parse(slurp(c.out_dir / "comparison.json"));
  const double df = j["describing_function_period_error"].get<double>();
  const double solver = j["solver_period_error"].get<double>();
  return {df > 0.5 && solver < 0.1,
          "DF period error " + fmt("%.1f%%", 100 * df) + ", solver period error " + fmt("%.2f%%", 100 * solver)};
}

double max_rel(const PeriodicSignal& a, const PeriodicSignal& b) {
  return norm(a - b) / std::max(1.0, norm(b));
}

Outcome property_suites(const SolveReport* reports[3], const double ks[3]) {
  const Stopwatch sw;
  std::mt19937_64 rng(2024);
  std::string failed;
  auto check = [&](bool ok, const std::string& name) {
    if (!ok) failed += (failed.empty() ? "" : ", ") + name;
  };

  bool anti = true;
  bool nsd = true;
  for (std::size_t n : {8u, 64u, 512u}) {
    const PeriodicGrid g(2.0 * std::numbers::pi, n);
    for (int i = 0; i < 100; ++i) {
      const auto x = testsupport::random_signal(g, rng);
      const auto y = testsupport::random_signal(g, rng);
      const double scale = norm(x) * norm(y) / (g.step() * g.step());
      anti = anti && std::abs(inner_product(x, diff1(y)) + inner_product(diff1(x), y)) <= 1e-10 * scale;
      nsd = nsd && inner_product(x, diff2(x)) <= 1e-10 * norm(x) * norm(x) / (g.step() * g.step());
    }
  }
  check(anti, "D1 antisymmetry");
  check(nsd, "D2 semidefinite");

  const LtiRelation hinv({1.0, 0.0, 1.0}, {0.0, 1.0});
  const StaticPolyRelation cubic(Polynomial({0.0, 0.0, 0.0, 0.5}));
  bool nonexp = true;
  const PeriodicGrid g64(7.0, 64);
  for (int i = 0; i < 100; ++i) {
    const auto a = testsupport::random_signal(g64, rng);
    const auto b = testsupport::random_signal(g64, rng);
    const double d = norm(a - b);
    nonexp = nonexp && norm(resolvent_lti(hinv, 0.05, a) - resolvent_lti(hinv, 0.05, b)) <= d * (1.0 + 1e-9);
    nonexp = nonexp && norm(resolvent_static(cubic, 0.05, a) - resolvent_static(cubic, 0.05, b)) <= d * (1.0 + 1e-9);
  }
  check(nonexp, "resolvent nonexpansiveness");

  bool inverse = true;
  bool dense = true;
  for (std::size_t n : {16u, 33u, 64u}) {
    const PeriodicGrid g(7.0, n);
    const auto u = testsupport::random_signal(g, rng);
    const auto w = diff1(u);
    const auto z = w + 0.05 * (diff2(u) + u);
    inverse = inverse && (resolvent_lti(hinv, 0.05, z) - w).max_abs() <= 1e-8 * (1.0 + w.max_abs());
    const auto x = resolvent_static(cubic, 0.05, z);
    inverse = inverse && (x + 0.05 * cubic.apply(x) - z).max_abs() <= 1e-8 * (1.0 + z.max_abs());
    const LtiRelation op({1.0, 0.5, 2.0}, {1.0, 1.0});
    dense = dense && (resolvent_lti(op, 0.3, z) -
                      testsupport::dense_resolvent({1.0, 0.5, 2.0}, {1.0, 1.0}, 0.3, z)).max_abs() <= 1e-8;
  }
  check(inverse, "inverse consistency");
  check(dense, "fast path vs dense");

  // Douglas-Rachford invariance and residual certificate on the K = 1.5 solution.
  {
    const auto& r = *reports[1];
    const auto sys = van_der_pol(1.5);
    const auto f2 = sys.negative_feedback_e1.with_offset(apply_b(sys, r.solution));
    const double lambda = 0.05;
    const SignalMap r1 = [&](const PeriodicSignal& z) { return resolvent_lti(sys.forward_h_inverse, lambda, z); };
    const SignalMap r2 = [&](const PeriodicSignal& z) { return resolvent_static(f2, lambda, z); };
    DrConfig dc;
    dc.lambda = lambda;
    dc.tol_eps2 = 1e-10;
    dc.max_inner_iters = 200000;
    const auto dr = dr_solve(r1, r2, r.solution, dc);
    check(max_rel(dr_step(r1, r2, dr.shadow), dr.shadow) < 1e-6, "DR fixed-point invariance");
    const auto next = outer_step(sys, r.solution, reference_config(1.5).dr);
    check(aligned_relative_change(next, r.solution).change < 0.01, "outer fixed-point consistency");
    check(r.residual_norm <= 10.0 * 0.01 * (1.0 + norm(r.solution)), "residual certificate K=1.5");
  }

  for (int i = 0; i < 3; ++i) {
    const auto& y = reports[i]->solution;
    const std::string k = fmt("%g", ks[i]);
    const double pb = testsupport::power_balance(y);
    const double hw = testsupport::half_wave_asymmetry(y);
    check(pb < 0.02, "power balance K=" + k + " (" + fmt("%.2f%%", 100 * pb) + ")");
    check(hw < 0.05, "half-wave symmetry K=" + k + " (" + fmt("%.2f%%", 100 * hw) + ")");
  }

  const double secs = sw.seconds();
  check(secs < 30.0, "runtime");
  return {failed.empty(), (failed.empty() ? std::string("all properties hold") : "failed: " + failed) + ", " +
                              fmt("%.2fs", secs)};
}

Outcome determinism(const fs::path& dir) {
  std::string files[2];
  for (int i = 0; i < 2; ++i) {
    cli::RunConfig c;
    c.command = "solve";
    c.seed = 7;
    c.out_dir = dir / ("det" + std::to_string(i));
    std::ostringstream out, err;
    if (cli::run(c, out, err) != cli::kOk) return {false, "solve failed: " + err.str()};
    files[i] = slurp(c.out_dir / "waveform.csv");
  }
  return {!files[0].empty() && files[0] == files[1],
          files[0] == files[1] ? "waveform.csv byte-identical" : "waveform.csv differs"};
}

}  // namespace

int main() {
  const fs::path dir = fs::temp_directory_path() / "monocycle_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  const double ks[3] = {0.0002, 1.5, 10.0};
  std::vector<SolveReport> solved;
  double small_secs = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Stopwatch sw;
    solved.push_back(solve_vdp(ks[i]));
    if (i == 0) small_secs = sw.seconds();
  }
  const SolveReport* reports[3] = {&solved[0], &solved[1], &solved[2]};

  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"double-well fixed points", [] { return double_well_points(); }},
      {"small-K sinusoid", [&] { return small_k_sinusoid(solved[0], small_secs); }},
      {"iteration counts", [&] { return iteration_counts(reports); }},
      {"relaxation regime vs RK4", [&] { return relaxation(solved[2], oracle(10.0)); }},
      {"describing-function contrast", [&] { return describing_function_contrast(dir); }},
      {"property suites", [&] { return property_suites(reports, ks); }},
      {"determinism", [&] { return determinism(dir); }},
  };

  int failures = 0;
  int index = 1;
  for (const auto& [name, fn] : criteria) {
    Outcome o{false, ""};
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d: %s  %s: %s\n", index++, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    failures += o.pass ? 0 : 1;
  }
  fs::remove_all(dir);
  return failures == 0 ? 0 : 1;
}
