#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "monocycle/errors.hpp"
#include "monocycle/systems.hpp"
#include "monocycle/system_file.hpp"

using namespace monocycle;

namespace {

ConfigError parse_error(const std::string& text) {
  std::istringstream is(text);
  try {
    parse_system_definition(is);
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "no ConfigError for:\n" << text;
  return ConfigError("", "");
}

const std::string kVdp =
    "label = test\n"
    "[lti]\n"
    "numerator = [1, 0, 1]\n"
    "denominator = [0, 1]\n"
    "[e1]\n"
    "coeffs = [0, 0, 0, 0.5]\n"
    "[e2]\n"
    "gain = 1.5\n";

}  // namespace

TEST(VanDerPol, CoefficientsForRepresentativeK) {
  for (double K : {0.0, 1.5, 10.0}) {
    const auto s = van_der_pol(K);
    EXPECT_EQ(s.label, "vdp");
    EXPECT_EQ(s.forward_h_inverse.numerator(), (std::vector<double>{1.0, 0.0, 1.0}));
    EXPECT_EQ(s.forward_h_inverse.denominator(), (std::vector<double>{0.0, 1.0}));
    const auto& p = s.negative_feedback_e1.polynomial();
    if (K == 0.0) {
      EXPECT_TRUE(p.is_zero());
    } else {
      EXPECT_EQ(p.degree(), 3);
      EXPECT_DOUBLE_EQ(p.coeffs()[3], K / 3.0);
    }
    ASSERT_TRUE(std::holds_alternative<GainRelation>(s.positive_feedback_e2));
    EXPECT_EQ(std::get<GainRelation>(s.positive_feedback_e2).gain(), K);
    EXPECT_EQ(s.input.kind, InputSpec::Kind::zero);
  }
  EXPECT_THROW(van_der_pol(-0.1), DomainError);
}

TEST(VanDerPol, ResidualMatchesOdeOnSmoothSignal) {
  // A(y) - B(y) on y = D1 x is x'' - K (1 - x'^2/3) x' + x in difference form.
  const double K = 1.5;
  const auto s = van_der_pol(K);
  const PeriodicGrid g(2.0 * std::numbers::pi, 64);
  const auto x = PeriodicSignal::sample(g, [](double t) { return std::sin(t) + 0.3 * std::cos(2.0 * t); });
  const auto y = diff1(x);
  const auto r = apply_a(s, y) - apply_b(s, y);
  const auto d2 = diff2(x);
  // H^{-1} D1 x = D2 x + x exactly at the discrete level when x has zero mean.
  const auto hx = apply_lti(s.forward_h_inverse, y);
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_NEAR(hx[k], d2[k] + x[k], 1e-10);
  for (std::size_t k = 0; k < g.size(); ++k) {
    EXPECT_NEAR(r[k], hx[k] + K * std::pow(y[k], 3) / 3.0 - K * y[k], 1e-10);
  }
}

TEST(DoubleWell, OperatorsAndCriticalPoints) {
  const auto dw = double_well();
  EXPECT_DOUBLE_EQ(dw.a(1.0), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(dw.b(1.0), 1.0);
  EXPECT_DOUBLE_EQ(dw.objective(std::sqrt(3.0)), -0.75);
  for (double x : {-std::sqrt(3.0), 0.0, std::sqrt(3.0)}) EXPECT_NEAR(dw.a(x) - dw.b(x), 0.0, 1e-14);
  // a - b is the derivative of the objective.
  for (double x : {-2.0, -0.7, 0.4, 1.9}) {
    const double h = 1e-5;
    const double fd = (dw.objective(x + h) - dw.objective(x - h)) / (2.0 * h);
    EXPECT_NEAR(fd, dw.a(x) - dw.b(x), 1e-8);
  }
}

TEST(PeriodGuess, LimitsAndKnownCycles) {
  EXPECT_DOUBLE_EQ(period_guess(0.0), 2.0 * std::numbers::pi);
  EXPECT_NEAR(period_guess(0.0002), 2.0 * std::numbers::pi, 1e-6);
  // Reference periods of the true limit cycles.
  EXPECT_NEAR(period_guess(1.0) / 6.6633, 1.0, 0.03);
  EXPECT_NEAR(period_guess(1.5) / 7.0960, 1.0, 0.03);
  EXPECT_NEAR(period_guess(10.0) / 19.0784, 1.0, 0.03);
  EXPECT_NEAR(period_guess(100.0) / 162.84, 1.0, 0.03);
  EXPECT_THROW(period_guess(-1.0), DomainError);
}

TEST(DescribingFunction, IndependentOfK) {
  for (double K : {0.0002, 1.5, 10.0}) {
    const auto p = describing_function_baseline(K);
    EXPECT_EQ(p.amplitude, 2.0);
    EXPECT_EQ(p.frequency_rad_s, 1.0);
  }
}

TEST(InitialGuessRamp, Examples) {
  const PeriodicGrid g(2.0 * std::numbers::pi, 5000);
  const auto r = initial_guess_ramp(g, 1.0);
  EXPECT_EQ(r[0], 0.0);
  EXPECT_NEAR(r[4999], 6.2819, 1e-4);
  EXPECT_DOUBLE_EQ(r[4999], 4999.0 * g.step());
  const auto r2 = initial_guess_ramp(PeriodicGrid(1.0, 4), 2.0);
  EXPECT_DOUBLE_EQ(r2[3], 1.5);
}

TEST(InputSpec, SineAndTable) {
  const PeriodicGrid g(2.0 * std::numbers::pi, 100);
  const auto u = InputSpec::sine(0.5, 2.0).on(g);
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_NEAR(u[k], 0.5 * std::sin(2.0 * g.time(k)), 1e-14);
  EXPECT_EQ(InputSpec::zero().on(g).max_abs(), 0.0);
  const auto tab = InputSpec::from_samples(u).on(g);
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_NEAR(tab[k], u[k], 1e-12);
}

TEST(ValidateSystem, AcceptsBuiltinsRejectsDecreasingFeedback) {
  EXPECT_NO_THROW(validate_system(van_der_pol(1.5)));
  auto s = van_der_pol(1.5);
  s.positive_feedback_e2 = GainRelation(-1.0);
  EXPECT_THROW(validate_system(s), MonotonicityError);
}

TEST(SystemFile, ParsesVanDerPolDefinition) {
  std::istringstream is(kVdp);
  const auto s = parse_system_definition(is);
  EXPECT_EQ(s.label, "test");
  EXPECT_EQ(s.negative_feedback_e1.polynomial().coeffs(), (std::vector<double>{0, 0, 0, 0.5}));
  EXPECT_EQ(std::get<GainRelation>(s.positive_feedback_e2).gain(), 1.5);
  const PeriodicGrid g(7.0, 33);
  const auto y = PeriodicSignal::sample(g, [](double t) { return std::sin(2.0 * std::numbers::pi * t / 7.0); });
  const auto ref = van_der_pol(1.5);
  EXPECT_LT(norm(apply_a(s, y) - apply_a(ref, y)), 1e-12);
}

TEST(SystemFile, ShippedExamplesLoad) {
  const std::filesystem::path dir = MONOCYCLE_SYSTEMS_DIR;
  const auto vdp = load_system_definition(dir / "vdp_k1_5.sys");
  EXPECT_EQ(vdp.label, "vdp K=1.5");
  const auto forced = load_system_definition(dir / "forced_damped.sys");
  EXPECT_EQ(forced.input.kind, InputSpec::Kind::sine);
  EXPECT_EQ(forced.input.frequency, 1.2);
}

TEST(SystemFile, ErrorsNameKeyAndLine) {
  {
    const auto e = parse_error(kVdp + "bogus = 1\n");
    EXPECT_EQ(e.field(), "e2.bogus");
    EXPECT_EQ(e.line(), 9u);
  }
  {
    const auto e = parse_error("[lti]\nnumerator = [1, 0, 1]\n[e1]\ncoeffs = [0, 1]\n[e2]\ngain = 1\n");
    EXPECT_EQ(e.field(), "lti.denominator");
  }
  {
    const auto e = parse_error("[lti]\nnumerator = [1, x]\ndenominator = [1]\n[e1]\ncoeffs = [0, 1]\n[e2]\ngain = 1\n");
    EXPECT_EQ(e.field(), "lti.numerator");
    EXPECT_EQ(e.line(), 2u);
  }
  {
    const auto e = parse_error("[lti]\nnumerator = [1]\ndenominator = [1]\n[e1]\ncoeffs = [0, -1]\n[e2]\ngain = 1\n");
    EXPECT_EQ(e.field(), "e1.coeffs");
    EXPECT_EQ(e.line(), 5u);
  }
  {
    const auto e = parse_error("[lti]\nnumerator = [1]\ndenominator = [1]\n[e1]\ncoeffs = [0, 1]\n[e2]\ngain = -2\n");
    EXPECT_EQ(e.field(), "e2.gain");
    EXPECT_EQ(e.line(), 7u);
  }
  {
    const auto e = parse_error("[lti]\nnumerator = [1]\ndenominator = [0, 0, 0]\n[e1]\ncoeffs = [0, 1]\n[e2]\ngain = 1\n");
    EXPECT_EQ(e.field(), "lti.denominator");
    EXPECT_EQ(e.line(), 3u);
  }
  {
    const auto e = parse_error("[nope]\n");
    EXPECT_EQ(e.line(), 1u);
  }
  {
    const auto e = parse_error(kVdp + "[input]\nkind = square\n");
    EXPECT_EQ(e.field(), "input.kind");
    EXPECT_EQ(e.line(), 10u);
  }
  {
    const auto e = parse_error("[lti]\nnumerator = [1]\nnumerator = [1]\n");
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(load_system_definition("/nonexistent/x.sys"), ConfigError);
}

TEST(SystemFile, FileInputResolvesRelativeToDefinition) {
  const auto dir = std::filesystem::temp_directory_path() / "monocycle_sysfile_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream u(dir / "u.csv");
    u << "t,value\n0,0\n0.25,1\n0.5,0\n0.75,-1\n";
  }
  {
    std::ofstream f(dir / "s.sys");
    f << kVdp << "[input]\nkind = file\npath = u.csv\n";
  }
  const auto s = load_system_definition(dir / "s.sys");
  ASSERT_EQ(s.input.kind, InputSpec::Kind::samples);
  EXPECT_DOUBLE_EQ(s.input.table->grid().period(), 1.0);
  std::filesystem::remove_all(dir);
}
