#include "monocycle/mixed_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "spectral.hpp"

namespace monocycle {

void OuterConfig::validate() const {
  if (!(tol_eps1 > 0.0) || !std::isfinite(tol_eps1)) {
    throw ConfigError("eps1", "eps1 must be positive");
  }
  if (max_outer_iters < 1) throw ConfigError("max_outer_iters", "max_outer_iters must be >= 1");
  if (!(relative_floor > 0.0)) throw ConfigError("relative_floor", "floor must be positive");
  dr.validate();
}

SolveNonConvergence::SolveNonConvergence(const std::string& what, SolveReport report)
    : NonConvergenceError(what, report.relative_change_history, report.solution.values()),
      report_(std::move(report)) {}

double residual_norm(const MixedFeedbackSystem& sys, const PeriodicSignal& y) {
  const PeriodicSignal rest = sys.negative_feedback_e1.without_offset().apply(y) -
                              sys.input.on(y.grid()) -
                              apply_feedback(sys.positive_feedback_e2, y);
  return lti_inclusion_residual(sys.forward_h_inverse, y, rest);
}

std::optional<double> estimate_period(const PeriodicSignal& y) {
  const auto up = up_crossings(y);
  if (up.empty()) return std::nullopt;
  return y.grid().period() / static_cast<double>(up.size());
}

double estimate_shift(const PeriodicSignal& x, const PeriodicSignal& ref) {
  const std::size_t n = x.size();
  if (ref.size() != n) throw DimensionError("estimate_shift: length mismatch");
  auto xs = detail::rfft(x.values());
  const auto rs = detail::rfft(ref.values());
  for (std::size_t k = 0; k < xs.size(); ++k) xs[k] *= std::conj(rs[k]);
  const auto c = detail::irfft(xs, n);
  const std::size_t m =
      static_cast<std::size_t>(std::max_element(c.begin(), c.end()) - c.begin());
  const double l = c[(m + n - 1) % n];
  const double r = c[(m + 1) % n];
  const double den = l - 2.0 * c[m] + r;
  double d = static_cast<double>(m) + (den != 0.0 ? 0.5 * (l - r) / den : 0.0);
  if (d > 0.5 * static_cast<double>(n)) d -= static_cast<double>(n);
  return d;
}

PeriodicSignal fractional_shift(const PeriodicSignal& x, double d) {
  const std::size_t n = x.size();
  auto s = detail::rfft(x.values());
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double ph = -2.0 * std::numbers::pi * static_cast<double>(k) * d / static_cast<double>(n);
    if (n % 2 == 0 && k == n / 2) {
      s[k] = s[k].real() * std::cos(ph);
    } else {
      s[k] *= std::polar(1.0, ph);
    }
  }
  return PeriodicSignal(x.grid(), detail::irfft(s, n));
}

AlignedChange aligned_relative_change(const PeriodicSignal& next, const PeriodicSignal& prev,
                                      double floor) {
  const double d = estimate_shift(next, prev);
  const PeriodicSignal aligned = d == 0.0 ? next : fractional_shift(next, -d);
  return {relative_change(aligned, prev, floor), d};
}

namespace {

// Zero of A(w) - B(y): F1 = H^{-1}, F2 = E1 - u - B(y).
DrResult frozen_solve(const MixedFeedbackSystem& sys, const LtiResolvent& res1,
                      const PeriodicSignal& u, const PeriodicSignal& y, const DrConfig& cfg) {
  const StaticPolyRelation f2 =
      sys.negative_feedback_e1.with_offset(u + apply_feedback(sys.positive_feedback_e2, y));
  const double lambda = cfg.lambda;
  return dr_solve([&](const PeriodicSignal& z) { return res1(z); },
                  [&](const PeriodicSignal& z) { return resolvent_static(f2, lambda, z); }, y,
                  cfg);
}

}  // namespace

PeriodicSignal outer_step(const MixedFeedbackSystem& sys, const PeriodicSignal& y,
                          const DrConfig& cfg) {
  const LtiResolvent res1(sys.forward_h_inverse, cfg.lambda, y.grid());
  return frozen_solve(sys, res1, sys.input.on(y.grid()), y, cfg).zero_candidate;
}

SolveReport solve_mixed(const MixedFeedbackSystem& sys, const PeriodicSignal& y0,
                        const OuterConfig& cfg) {
  cfg.validate();
  SolveReport rep{y0, 0, {}, {}, 0.0, 0.0, std::nullopt, false, {}, {}};
  PeriodicSignal y = y0;
  std::optional<LtiResolvent> res1;
  std::optional<PeriodicSignal> u;
  auto regrid = [&](const PeriodicGrid& g) {
    res1.emplace(sys.forward_h_inverse, cfg.dr.lambda, g);
    u.emplace(sys.input.on(g));
  };
  auto finish = [&] {
    rep.solution = y;
    rep.residual_norm = residual_norm(sys, y);
    rep.amplitude = amplitude(y);
    rep.period_estimate = estimate_period(y);
  };

  try {
    regrid(y.grid());
  } catch (const ResonanceError& e) {
    throw ResonanceError(std::string("setup: ") + e.what(), e.mode(), e.frequency());
  }

  std::size_t period_updates = 0;
  for (std::size_t i = 1; i <= cfg.max_outer_iters; ++i) {
    DrResult inner = [&] {
      try {
        return frozen_solve(sys, *res1, *u, y, cfg.dr);
      } catch (const NonConvergenceError& e) {
        throw NonConvergenceError("outer iteration " + std::to_string(i) + ": " + e.what(),
                                  e.history(), e.last_iterate());
      }
    }();
    PeriodicSignal w = std::move(inner.zero_candidate);

    double change = 0.0;
    double drift = 0.0;
    if (cfg.phase_align) {
      const AlignedChange ac = aligned_relative_change(w, y, cfg.relative_floor);
      change = ac.change;
      drift = ac.shift_samples * y.grid().step();
    } else {
      change = relative_change(w, y, cfg.relative_floor);
    }
    rep.outer_iters = i;
    rep.per_outer_inner_iters.push_back(inner.inner_iters);
    rep.relative_change_history.push_back(change);
    rep.phase_drift_history.push_back(drift);
    rep.grid_period_history.push_back(y.grid().period());
    y = std::move(w);

    if (change >= cfg.tol_eps1) continue;

    if (cfg.period_adaptation && period_updates < cfg.max_period_updates) {
      std::optional<PeriodicSignal> moved;
      if (zero_crossings(y).size() >= 3) {
        PeriodAdaptation pa = adapt_period(y);
        if (pa.changed) moved = std::move(pa.signal);
      } else {
        const double s = fit_period_scale(sys, y);
        if (std::abs(s - 1.0) >= 0.01) moved = y.on_grid(y.grid().with_period(s * y.grid().period()));
      }
      if (moved) {
        ++period_updates;
        y = std::move(*moved);
        regrid(y.grid());
        continue;
      }
    }
    rep.converged = true;
    finish();
    return rep;
  }
  finish();
  throw SolveNonConvergence("outer iteration did not meet eps1 within " +
                                std::to_string(cfg.max_outer_iters) + " iterations",
                            rep);
}

// ---------------------------------------------------------------------------

double invert_increasing(const std::function<double(double)>& a, double target, double start) {
  auto g = [&](double x) { return a(x) - target; };
  double lo = start;
  double hi = start;
  double glo = g(lo);
  if (glo == 0.0) return start;
  double step = 1.0;
  if (glo < 0.0) {
    for (int i = 0; g(hi) < 0.0; ++i) {
      if (i > 1100) throw DomainError("A^{-1}: target out of range");
      lo = hi;
      hi = start + step;
      step *= 2.0;
    }
  } else {
    for (int i = 0; g(lo) > 0.0; ++i) {
      if (i > 1100) throw DomainError("A^{-1}: target out of range");
      hi = lo;
      lo = start - step;
      step *= 2.0;
    }
  }
  // Bisection: about 60 halvings reach adjacent doubles.
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if (gm < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(g(lo)) <= std::abs(g(hi)) ? lo : hi;
}

ScalarSolveResult scalar_mixed_solve(const std::function<double(double)>& a,
                                     const std::function<double(double)>& b, double x0,
                                     double tol, std::size_t max_iters,
                                     const ScalarOptions& opts) {
  if (!(tol > 0.0)) throw ConfigError("tol", "tolerance must be positive");
  if (max_iters < 1) throw ConfigError("max_iters", "max_iters must be >= 1");
  ScalarSolveResult res;
  res.trajectory.push_back(x0);
  double x = x0;
  for (std::size_t i = 1; i <= max_iters; ++i) {
    const double next = invert_increasing(a, b(x), x);
    res.trajectory.push_back(next);
    if (opts.restrict_sign && x0 != 0.0 && (next == 0.0 || (next > 0.0) != (x0 > 0.0))) {
      throw DomainError("iterate " + std::to_string(next) + " left the basin of x0 = " +
                        std::to_string(x0));
    }
    const double change = std::abs(next - x) / std::max(std::abs(x), opts.floor);
    x = next;
    if (change < tol) {
      res.x_star = x;
      res.iters = i;
      return res;
    }
  }
  throw NonConvergenceError("scalar iteration did not converge", res.trajectory, {x});
}

// ---------------------------------------------------------------------------

namespace {

using Vec = std::vector<double>;

double vdot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Vec vsub(const Vec& a, const Vec& b) {
  Vec d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

using VecMap = std::function<Vec(const Vec&)>;

ContractionReport contraction_core(const VecMap& map, const Vec& center, double radius,
                                   std::size_t num_probes, std::uint64_t seed,
                                   const VecMap& a_fwd, const VecMap& b_fwd) {
  if (num_probes < 2) throw ConfigError("num_probes", "need at least 2 probes");
  if (!(radius > 0.0)) throw ConfigError("radius", "radius must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&] {
    Vec d(center.size());
    for (double& v : d) v = gauss(rng);
    const double len = std::sqrt(vdot(d, d));
    const double r = radius * unit(rng) / (len > 0.0 ? len : 1.0);
    Vec p(center.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = center[i] + r * d[i];
    return p;
  };

  // Draw everything first so results do not depend on which probes fail.
  std::vector<std::pair<Vec, Vec>> pairs;
  for (std::size_t i = 0; i < num_probes; ++i) {
    Vec u = draw();
    Vec v = draw();
    pairs.emplace_back(std::move(u), std::move(v));
  }

  ContractionReport rep;
  double alpha = std::numeric_limits<double>::infinity();
  double beta = std::numeric_limits<double>::infinity();
  for (const auto& [u, v] : pairs) {
    Vec mu;
    Vec mv;
    try {
      mu = map(u);
      mv = map(v);
    } catch (const Error&) {
      ++rep.probes_failed;
      continue;
    }
    const Vec du = vsub(u, v);
    const double nu = std::sqrt(vdot(du, du));
    if (nu == 0.0) continue;
    ++rep.probes_used;
    const Vec dm = vsub(mu, mv);
    rep.sampled_lipschitz_max = std::max(rep.sampled_lipschitz_max, std::sqrt(vdot(dm, dm)) / nu);
    if (a_fwd) {
      const Vec da = vsub(a_fwd(u), a_fwd(v));
      alpha = std::min(alpha, vdot(du, da) / (nu * nu));
    }
    if (b_fwd) {
      const Vec db = vsub(b_fwd(u), b_fwd(v));
      const double nb = vdot(db, db);
      if (nb > 0.0) beta = std::min(beta, vdot(du, db) / nb);
    }
  }
  if (rep.probes_used == 0) throw Error("contraction estimate: every probe failed");
  rep.alpha_estimate = std::isfinite(alpha) ? std::max(alpha, 0.0) : 0.0;
  rep.beta_estimate = std::isfinite(beta) ? std::max(beta, 0.0) : 0.0;
  rep.contraction_predicted = rep.sampled_lipschitz_max < 1.0;
  return rep;
}

}  // namespace

ContractionReport estimate_contraction(const SignalMap& map, const PeriodicSignal& center,
                                       double radius, std::size_t num_probes,
                                       std::uint64_t seed, const SignalMap& a_forward,
                                       const SignalMap& b_forward) {
  const PeriodicGrid grid = center.grid();
  auto lift = [&](const SignalMap& f) -> VecMap {
    if (!f) return {};
    return [&grid, f](const Vec& x) { return f(PeriodicSignal(grid, x)).values(); };
  };
  return contraction_core(lift(map), center.values(), radius, num_probes, seed, lift(a_forward),
                          lift(b_forward));
}

ContractionReport estimate_contraction(const std::function<double(double)>& map, double center,
                                       double radius, std::size_t num_probes,
                                       std::uint64_t seed,
                                       const std::function<double(double)>& a_forward,
                                       const std::function<double(double)>& b_forward) {
  auto lift = [](const std::function<double(double)>& f) -> VecMap {
    if (!f) return {};
    return [f](const Vec& x) { return Vec{f(x[0])}; };
  };
  return contraction_core(lift(map), Vec{center}, radius, num_probes, seed, lift(a_forward),
                          lift(b_forward));
}

// ---------------------------------------------------------------------------

PeriodAdaptation adapt_period(const PeriodicSignal& iterate) {
  PeriodAdaptation out{iterate.grid(), iterate, false, false, std::nullopt};
  const auto zc = zero_crossings(iterate);
  if (zc.size() < 2) {
    out.warning = true;
    return out;
  }
  const double mean_gap = (zc.back() - zc.front()) / static_cast<double>(zc.size() - 1);
  const double period = 2.0 * mean_gap;
  out.estimated_period = period;
  const double old = iterate.grid().period();
  if (std::abs(period - old) < 0.01 * old) return out;

  const PeriodicGrid grid = iterate.grid().with_period(period);
  const double h = iterate.grid().step();
  out.signal = PeriodicSignal::sample(grid, [&](double t) {
    const double pos = std::fmod(t, old) / h;
    const double fl = std::floor(pos);
    const auto i = static_cast<std::ptrdiff_t>(fl);
    return (1.0 - (pos - fl)) * iterate.at(i) + (pos - fl) * iterate.at(i + 1);
  });
  out.grid = grid;
  out.changed = true;
  return out;
}

double fit_period_scale(const MixedFeedbackSystem& sys, const PeriodicSignal& y, double lo,
                        double hi) {
  const double base = y.grid().period();
  auto f = [&](double s) { return residual_norm(sys, y.on_grid(y.grid().with_period(s * base))); };
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - g * (hi - lo);
  double d = lo + g * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < 60; ++i) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - g * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + g * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace monocycle
