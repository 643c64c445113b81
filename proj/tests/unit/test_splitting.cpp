#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "monocycle/errors.hpp"
#include "monocycle/splitting.hpp"
#include "oracles.hpp"

using namespace monocycle;

namespace {

const PeriodicGrid kGrid(1.0, 4);

// Resolvent of w -> g (w - c) samplewise.
SignalMap affine_resolvent(double g, double c, double lambda) {
  return [=](const PeriodicSignal& z) {
    std::vector<double> v(z.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = (z[k] + lambda * g * c) / (1.0 + lambda * g);
    return PeriodicSignal(z.grid(), std::move(v));
  };
}

}  // namespace

TEST(DrConfig, ValidationNamesField) {
  DrConfig c;
  c.lambda = 0.0;
  try {
    c.validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "lambda");
  }
  c = DrConfig{};
  c.max_inner_iters = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = DrConfig{};
  c.tol_eps2 = -1.0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(DrSolve, DefaultParameters) {
  const DrConfig c;
  EXPECT_EQ(c.lambda, 0.05);
  EXPECT_EQ(c.tol_eps2, 0.01);
  EXPECT_EQ(c.max_inner_iters, 10000u);
}

TEST(DrSolve, IdentitySecondResolventFindsZeroOfFirst) {
  DrConfig cfg;
  cfg.lambda = 0.5;
  cfg.tol_eps2 = 1e-10;
  const auto r = dr_solve(affine_resolvent(1.0, 3.0, cfg.lambda), [](const PeriodicSignal& z) { return z; },
                          PeriodicSignal::zeros(kGrid), cfg);
  for (double v : r.zero_candidate.values()) EXPECT_NEAR(v, 3.0, 1e-8);
  EXPECT_LE(r.inner_iters, cfg.max_inner_iters);
}

TEST(DrSolve, AffinePairMatchesHandIteration) {
  // F1(w) = w, F2(w) = w - 2, lambda = 1: zero of the sum at w = 1.
  DrConfig cfg;
  cfg.lambda = 1.0;
  cfg.tol_eps2 = 1e-12;
  cfg.stop_rule = StopRule::step;
  const auto r = dr_solve(affine_resolvent(1.0, 0.0, 1.0), affine_resolvent(1.0, 2.0, 1.0),
                          PeriodicSignal::zeros(kGrid), cfg);
  for (double v : r.zero_candidate.values()) EXPECT_NEAR(v, 1.0, 1e-10);

  // Scalar replay: w_half = y/2, w = (2 w_half - y + 2)/2 = 1, y += 1 - y/2.
  double y = 0.0;
  std::size_t iters = 0;
  while (true) {
    const double w_half = y / 2.0;
    const double w = (2.0 * w_half - y + 2.0) / 2.0;
    const double next = y + w - w_half;
    ++iters;
    const double change = std::abs(next - y) / std::max(std::abs(y), 1e-12);
    y = next;
    if (change < 1e-12) break;
  }
  EXPECT_EQ(r.inner_iters, iters);
  for (double v : r.shadow.values()) EXPECT_DOUBLE_EQ(v, y);
}

TEST(DrSolve, StationaryAtKnownZero) {
  DrConfig cfg;
  cfg.lambda = 1.0;
  // res_F1(2) = 1 = w*, and F1(1) + F2(1) = 1 + (1 - 2) = 0.
  const auto y0 = PeriodicSignal::constant(kGrid, 2.0);
  const auto r = dr_solve(affine_resolvent(1.0, 0.0, 1.0), affine_resolvent(1.0, 2.0, 1.0), y0, cfg);
  EXPECT_EQ(r.inner_iters, 1u);
  EXPECT_EQ(r.shadow, y0);
  for (double v : r.zero_candidate.values()) EXPECT_DOUBLE_EQ(v, 1.0);
  EXPECT_EQ(r.final_relative_change, 0.0);
}

TEST(DrSolve, ErrorEstimateRuleStopsCloserThanStepRuleOnSlowContraction) {
  // lambda = 0.01 makes the DR map contract by about 0.98 per step.
  DrConfig cfg;
  cfg.lambda = 0.01;
  const auto r1 = affine_resolvent(1.0, 0.0, cfg.lambda);
  const auto r2 = affine_resolvent(1.0, 4.0, cfg.lambda);
  const auto y0 = PeriodicSignal::constant(kGrid, 10.0);
  cfg.stop_rule = StopRule::step;
  const auto loose = dr_solve(r1, r2, y0, cfg);
  cfg.stop_rule = StopRule::error_estimate;
  const auto tight = dr_solve(r1, r2, y0, cfg);
  const double e_loose = std::abs(loose.zero_candidate[0] - 2.0);
  const double e_tight = std::abs(tight.zero_candidate[0] - 2.0);
  EXPECT_GT(e_loose, 0.1);
  EXPECT_LT(e_tight, 0.05);
  EXPECT_GT(tight.inner_iters, loose.inner_iters);
}

TEST(DrSolve, BudgetExhaustionCarriesHistory) {
  DrConfig cfg;
  cfg.lambda = 0.01;
  cfg.max_inner_iters = 3;
  cfg.tol_eps2 = 1e-14;
  try {
    dr_solve(affine_resolvent(1.0, 0.0, 0.01), affine_resolvent(1.0, 4.0, 0.01),
             PeriodicSignal::constant(kGrid, 10.0), cfg);
    FAIL();
  } catch (const NonConvergenceError& e) {
    EXPECT_EQ(e.history().size(), 3u);
    EXPECT_EQ(e.last_iterate().size(), kGrid.size());
  }
}

TEST(DrSolve, ResidualCheckIsReportedAndEnforced) {
  DrConfig cfg;
  cfg.lambda = 0.5;
  cfg.residual_tol = 1e-6;
  const auto r1 = affine_resolvent(1.0, 0.0, cfg.lambda);
  const auto r2 = affine_resolvent(1.0, 2.0, cfg.lambda);
  // F1(w) + F2(w) = 2w - 2.
  const ResidualFn residual = [](const PeriodicSignal& w) {
    return norm(2.0 * w - PeriodicSignal::constant(w.grid(), 2.0));
  };
  const auto r = dr_solve(r1, r2, PeriodicSignal::zeros(kGrid), cfg, residual);
  ASSERT_TRUE(r.residual_norm.has_value());
  EXPECT_LE(*r.residual_norm, 1e-6 * (1.0 + norm(r.zero_candidate)));
}

TEST(DrStep, NonexpansiveForMonotonePair) {
  std::mt19937_64 rng(21);
  const PeriodicGrid g(2.0 * std::numbers::pi, 128);
  const double lambda = 0.05;
  const LtiResolvent f1(LtiRelation({1.0, 0.0, 1.0}, {0.0, 1.0}), lambda, g);
  const StaticPolyRelation f2(Polynomial({0.0, 0.0, 0.0, 0.5}), {}, PeriodicSignal::sample(g, [](double t) { return std::sin(t); }));
  const SignalMap r1 = [&](const PeriodicSignal& z) { return f1(z); };
  const SignalMap r2 = [&](const PeriodicSignal& z) { return resolvent_static(f2, lambda, z); };
  for (int i = 0; i < 100; ++i) {
    const auto a = testsupport::random_signal(g, rng, 2.0);
    const auto b = testsupport::random_signal(g, rng, 2.0);
    EXPECT_LE(norm(dr_step(r1, r2, a) - dr_step(r1, r2, b)), norm(a - b) * (1.0 + 1e-9));
  }
}

TEST(DrSolve, Deterministic) {
  const PeriodicGrid g(2.0 * std::numbers::pi, 256);
  const double lambda = 0.05;
  const LtiResolvent f1(LtiRelation({1.0, 0.0, 1.0}, {0.0, 1.0}), lambda, g);
  const auto y0 = PeriodicSignal::sample(g, [](double t) { return t; });
  const StaticPolyRelation f2(Polynomial({0.0, 0.0, 0.0, 0.5}), {}, 1.5 * y0);
  const SignalMap r1 = [&](const PeriodicSignal& z) { return f1(z); };
  const SignalMap r2 = [&](const PeriodicSignal& z) { return resolvent_static(f2, lambda, z); };
  const DrConfig cfg;
  const auto a = dr_solve(r1, r2, y0, cfg);
  const auto b = dr_solve(r1, r2, y0, cfg);
  EXPECT_EQ(a.inner_iters, b.inner_iters);
  EXPECT_EQ(a.zero_candidate, b.zero_candidate);
  EXPECT_EQ(a.shadow, b.shadow);
}
