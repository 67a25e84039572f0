#include "nlclaw/acceptance.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <limits>

#include "json.hpp"
#include "nlclaw/diagnostics.hpp"
#include "nlclaw/euler.hpp"
#include "nlclaw/front_tracking.hpp"
#include "nlclaw/multidim.hpp"
#include "nlclaw/parallel.hpp"
#include "nlclaw/reference.hpp"
#include "nlclaw/runner.hpp"

namespace nlclaw {

namespace {

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

} // namespace

std::string CriterionResult::line() const {
  std::string s = std::string(passed ? "[PASS] " : "[FAIL] ") + std::to_string(id) + ". " + title;
  if (!values.empty()) {
    s += ":";
    for (std::size_t i = 0; i < values.size(); ++i) {
      s += (i == 0 ? " " : ", ") + values[i].first + "=" + short_num(values[i].second);
    }
  }
  if (!note.empty()) {
    s += " (" + note + ")";
  }
  return s;
}

bool AcceptanceRun::all_passed() const {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

namespace {

using json = nlohmann::ordered_json;

const std::vector<double> kEpsilons{0.2, 0.1, 0.05, 0.025, 0.0125};

struct Ctx {
  std::size_t threads = 0;
  /// Invariant reports of every NN / velocity_reg / flux_reg run.
  std::vector<std::pair<std::string, DiagnosticsReport>> invariants;

  void record(const std::string& tag, const Trajectory& tr) {
    if (tr.mode != Mode::Conservative) {
      invariants.emplace_back(tag, check_invariants(tr));
    }
  }
  ConvergenceOptions conv(ErrorMetric m) const {
    ConvergenceOptions o;
    o.dx_max = 1e-3;
    o.metric = m;
    o.threads = threads;
    return o;
  }
};

CriterionResult make(int id, const std::string& title) {
  CriterionResult r;
  r.id = id;
  r.title = title;
  return r;
}

double tanh_neg(double x) { return -std::tanh(x); }

// 1. Riemann shock speed.
CriterionResult c1(Ctx& ctx) {
  auto r = make(1, "Riemann shock speed (NN, (1,0), T=1)");
  SolverConfig cfg;
  std::vector<double> speeds;
  std::vector<Trajectory> runs(2);
  const std::vector<double> eps{0.1, 0.05};
  parallel_for(eps.size(), [&](std::size_t k) {
    const GridSpec g = padded_grid(-1.0, 1.0, 1.0, 1.0, eps[k], cfg);
    runs[k] = solve_nn(InitialData1D::from(RiemannData{1.0, 0.0}, g), eps[k], 1.0, cfg);
  }, ctx.threads);
  bool ok = true;
  for (std::size_t k = 0; k < eps.size(); ++k) {
    const FrontSpeed fs = measure_front_speed(runs[k], 0.5, 0.2, 1.0);
    speeds.push_back(fs.speed);
    r.values.emplace_back("speed(eps=" + short_num(eps[k]) + ")", fs.speed);
    ok = ok && std::abs(fs.speed - 0.5) <= 0.02 * 0.5;
    ctx.record("c1 eps=" + short_num(eps[k]), runs[k]);
  }
  const double gap = std::abs(speeds[0] - speeds[1]);
  r.values.emplace_back("eps_gap", gap);
  r.values.emplace_back("gap_limit", 2.0 * cfg.dx / 1.0);
  r.passed = ok && gap <= 2.0 * cfg.dx / 1.0;
  return r;
}

// 2. Rarefaction non-convergence.
CriterionResult c2(Ctx& ctx) {
  auto r = make(2, "Rarefaction non-convergence ((-1,1), T=1)");
  ConvergenceProblem p;
  p.a = -2.0;
  p.b = 2.0;
  p.T = 1.0;
  p.window_a = -2.0;
  p.window_b = 2.0;
  p.setup = [](const GridSpec& g) { return InitialData1D::from(RiemannData{-1.0, 1.0}, g); };
  p.reference = [](const GridFunction1D&, const GridSpec& g) {
    return sample([](double x) { return burgers_riemann_exact({-1.0, 1.0}, x); }, g);
  };
  std::vector<Trajectory> runs;
  const auto tab = convergence_study(p, kEpsilons, "exact_riemann", SolverConfig{},
                                     ctx.conv(ErrorMetric::L1), &runs);
  bool ok = true;
  std::vector<double> e;
  std::vector<double> err;
  for (std::size_t k = 0; k < tab.rows.size(); ++k) {
    const auto& row = tab.rows[k];
    r.values.emplace_back("L1(eps=" + short_num(row.epsilon) + ")", row.error_l1);
    ok = ok && std::abs(row.error_l1 - 1.0) <= 0.1;
    e.push_back(row.epsilon);
    err.push_back(row.error_l1);
  }
  for (std::size_t k = 0; k < runs.size(); ++k) {
    ctx.record("c2 eps=" + short_num(kEpsilons[k]), runs[k]);
  }
  const double slope = log_log_slope(e, err);
  r.values.emplace_back("slope", slope);
  r.passed = ok && std::abs(slope) <= 0.1;
  return r;
}

// 3. Smooth-regime convergence.
CriterionResult c3(Ctx& ctx) {
  auto r = make(3, "Smooth-regime convergence (-tanh, T=0.5)");
  const double T = 0.5;
  ConvergenceProblem p;
  p.a = -3.0;
  p.b = 3.0;
  p.T = T;
  p.window_a = -2.0;
  p.window_b = 2.0;
  p.setup = [](const GridSpec& g) { return InitialData1D::from(tanh_neg, g); };
  p.reference = [T](const GridFunction1D& u0, const GridSpec& g) {
    return lax_oleinik_solve(u0, T, g);
  };
  std::vector<Trajectory> runs;
  const auto tab = convergence_study(p, kEpsilons, "lax_oleinik", SolverConfig{},
                                     ctx.conv(ErrorMetric::Sup), &runs);
  const double L = 2.0;
  const double M = 1.0;
  const double bound_per_eps = 1.1 * L * L * M * T * std::exp(L * M * T);
  bool below = true;
  for (const auto& row : tab.rows) {
    r.values.emplace_back("sup(eps=" + short_num(row.epsilon) + ")", row.error_sup);
    below = below && row.error_sup <= bound_per_eps * row.epsilon;
  }
  for (std::size_t k = 0; k < runs.size(); ++k) {
    ctx.record("c3 eps=" + short_num(kEpsilons[k]), runs[k]);
  }
  r.values.emplace_back("rate", tab.fitted_rate);
  r.values.emplace_back("bound/eps", bound_per_eps);
  r.passed = tab.rate_reported && tab.fitted_rate >= 0.8 && below;
  return r;
}

// 4. Catastrophe time.
CriterionResult c4(Ctx&) {
  auto r = make(4, "Catastrophe time");
  const GridSpec g = GridSpec::from_domain(-10.0, 10.0, 1e-3);
  const double t1 = catastrophe_time(sample(tanh_neg, g));
  const double t2 = catastrophe_time(sample([](double x) { return std::tanh(x); }, g));
  r.values.emplace_back("t*(-tanh)", t1);
  r.values.emplace_back("t*(tanh) finite", std::isinf(t2) ? 0.0 : 1.0);
  r.passed = std::abs(t1 - 1.0) <= 1e-3 && std::isinf(t2) && t2 > 0.0;
  return r;
}

// 5. Structural invariants on every run collected so far.
CriterionResult c5(Ctx& ctx) {
  auto r = make(5, "Structural invariants on every NN/velocity_reg/flux_reg run");
  const DiagnosticTolerances tol;
  double mp = 0.0;
  double deficit = 0.0;
  double lip = 0.0;
  bool ok = !ctx.invariants.empty();
  std::string failed;
  for (const auto& [tag, rep] : ctx.invariants) {
    if (!rep.all_required_pass()) {
      ok = false;
      failed += (failed.empty() ? "" : "; ") + tag;
    }
    if (const auto* c = rep.find("max_principle")) {
      mp = std::max(mp, c->measured);
    }
    if (const auto* c = rep.find("tv_deficit")) {
      deficit = std::max(deficit, c->measured);
    }
    if (const auto* c = rep.find("l1_lipschitz")) {
      lip = std::max(lip, c->threshold > 0.0 ? c->measured / (c->threshold / tol.lipschitz_factor) : 0.0);
    }
  }
  r.values.emplace_back("runs", static_cast<double>(ctx.invariants.size()));
  r.values.emplace_back("max_principle_excess", mp);
  r.values.emplace_back("tv_deficit_worst", deficit);
  r.values.emplace_back("lipschitz_ratio_worst", lip);
  if (!failed.empty()) {
    r.note = "failed: " + failed;
  }
  r.passed = ok;
  return r;
}

// 6. General-flux Riemann.
CriterionResult c6(Ctx& ctx) {
  auto r = make(6, "General-flux Riemann (cubic, (2,0))");
  SolverConfig cfg;
  const double eps = 0.1;
  const std::vector<Mode> modes{Mode::VelocityReg, Mode::FluxReg};
  const std::vector<double> expected{2.0, 1.0};
  std::vector<Trajectory> runs(2);
  parallel_for(2, [&](std::size_t k) {
    const GridSpec g = padded_grid(-1.0, 1.0, 2.0, 1.0, eps, cfg);
    runs[k] = solve_general(InitialData1D::from(RiemannData{2.0, 0.0}, g), FluxSpec::cubic(0.0, 2.0),
                            eps, 1.0, cfg, modes[k]);
  }, ctx.threads);
  const double rh = 4.0 / 3.0;
  bool ok = true;
  for (std::size_t k = 0; k < 2; ++k) {
    const FrontSpeed fs = measure_front_speed(runs[k], 1.0, 0.2, 1.0);
    const std::string m = to_string(modes[k]);
    r.values.emplace_back(m, fs.speed);
    r.values.emplace_back(m + " z_vs_RH", std::abs(fs.speed - rh) / std::max(fs.standard_error, 1e-300));
    ok = ok && std::abs(fs.speed - expected[k]) <= 0.02 * expected[k];
    ok = ok && std::abs(fs.speed - rh) > 10.0 * fs.standard_error &&
         std::abs(fs.speed - rh) > 0.02 * rh;
    ctx.record("c6 " + m, runs[k]);
  }
  r.passed = ok;
  return r;
}

// 7. Burgers-mode equivalence.
CriterionResult c7(Ctx& ctx) {
  auto r = make(7, "Burgers-mode equivalence");
  SolverConfig cfg;
  const double eps = 0.1;
  const double T = 0.5;
  const GridSpec g = padded_grid(-3.0, 3.0, 1.0, T, eps, cfg);
  // A generic quadratic flux object, so the general-flux code path is taken.
  const FluxSpec quad("quadratic", [](double u) { return 0.5 * u * u; }, [](double u) { return u; },
                      -1.0, 1.0);
  std::vector<Trajectory> runs(3);
  parallel_for(3, [&](std::size_t k) {
    const InitialData1D u0 = InitialData1D::from(tanh_neg, g);
    if (k == 0) {
      runs[k] = solve_nn(u0, eps, T, cfg);
    } else {
      runs[k] = solve_general(u0, quad, eps, T, cfg, k == 1 ? Mode::VelocityReg : Mode::FluxReg);
    }
  }, ctx.threads);
  double worst = 0.0;
  bool same_times = true;
  for (std::size_t k = 1; k < 3; ++k) {
    same_times = same_times && runs[k].times == runs[0].times;
    if (!same_times) {
      break;
    }
    for (std::size_t n = 0; n < runs[0].states.size(); ++n) {
      worst = std::max(worst, sup_distance(runs[k].states[n], runs[0].states[n]));
    }
  }
  ctx.record("c7 nn", runs[0]);
  ctx.record("c7 velocity_reg", runs[1]);
  ctx.record("c7 flux_reg", runs[2]);
  r.values.emplace_back("max_pointwise_diff", worst);
  r.passed = same_times && worst <= 1e-12;
  return r;
}

// 8. Oracle triangulation.
CriterionResult c8(Ctx&) {
  auto r = make(8, "Oracle triangulation (Godunov, Lax-Oleinik, front tracking)");
  bool ok = true;
  for (int sc = 0; sc < 2; ++sc) {
    const double T = sc == 0 ? 1.0 : 2.0;
    const GridSpec g = GridSpec::from_domain(-6.0, 6.0, 1e-3);
    const GridFunction1D u0 = sc == 0 ? sample(RiemannData{1.0, 0.0}, g) : sample(tanh_neg, g);
    const FluxSpec f = FluxSpec::burgers(u0.min(), u0.max());
    const auto lo = lax_oleinik_solve(u0, T, g);
    const auto go = godunov_solve(u0, f, T).final();
    const double delta = g.dx / 4.0;
    const auto ft = front_tracking_solve(quantize(u0, delta), f, T, delta).at(T).sample(g);
    const std::string tag = sc == 0 ? "shock" : "tanh";
    const double d1 = l1_distance(lo, go, -5.0, 5.0);
    const double d2 = l1_distance(lo, ft, -5.0, 5.0);
    const double d3 = l1_distance(go, ft, -5.0, 5.0);
    r.values.emplace_back(tag + " LO-G", d1);
    r.values.emplace_back(tag + " LO-FT", d2);
    r.values.emplace_back(tag + " G-FT", d3);
    ok = ok && std::max({d1, d2, d3}) <= 5e-3;
  }
  r.passed = ok;
  return r;
}

PiecewiseInitialData lipschitz_increasing_datum() {
  PiecewiseInitialData pw;
  pw.breakpoints = {-0.5, 0.5};
  pw.pieces = {[](double x) { return 1.0 + 0.2 * std::tanh(x + 0.5); },
               [](double x) { return 0.2 * std::tanh(x); },
               [](double x) { return -1.0 + 0.2 * std::tanh(x - 0.5); }};
  pw.descriptions = {"1 + 0.2 tanh(x + 0.5)", "0.2 tanh(x)", "-1 + 0.2 tanh(x - 0.5)"};
  pw.lipschitz_C = 0.2;
  return pw;
}

// 9. Piecewise-Lipschitz-increasing scenario.
CriterionResult c9(Ctx& ctx) {
  auto r = make(9, "Piecewise Lipschitz-increasing data (two entropic jumps)");
  const PiecewiseInitialData pw = lipschitz_increasing_datum();
  const double sup = 1.2;
  const double horizon = secondary_horizon(pw.min_gap(), sup);
  const double T = 0.9 * horizon;
  ConvergenceProblem p;
  p.a = -3.0;
  p.b = 3.0;
  p.sup_u0 = sup;
  p.T = T;
  p.window_a = -2.0;
  p.window_b = 2.0;
  p.tube_factor = 4.0;
  p.setup = [pw](const GridSpec& g) { return InitialData1D::from(pw, g); };
  p.reference = [T](const GridFunction1D& u0, const GridSpec& g) {
    return lax_oleinik_solve(u0, T, g);
  };
  std::vector<Trajectory> runs;
  const auto tab =
      convergence_study(p, kEpsilons, "lax_oleinik", SolverConfig{}, ctx.conv(ErrorMetric::L1), &runs);
  r.values.emplace_back("T", T);
  for (const auto& row : tab.rows) {
    r.values.emplace_back("L1(eps=" + short_num(row.epsilon) + ")", row.error_l1);
  }
  r.values.emplace_back("rate", tab.fitted_rate);
  bool oleinik = true;
  double worst = 0.0;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const auto& u = runs[k].final();
    const auto ref = lax_oleinik_solve(runs[k].initial(), T, u.spec());
    const auto c = oleinik_check(u, pw.lipschitz_C,
                                 tubes(find_shocks(ref, p.shock_drop), 4.0 * kEpsilons[k]));
    oleinik = oleinik && c.passed;
    worst = std::max(worst, c.measured);
    ctx.record("c9 eps=" + short_num(kEpsilons[k]), runs[k]);
  }
  r.values.emplace_back("max_slope_outside_tubes", worst);
  r.values.emplace_back("C", pw.lipschitz_C);
  r.passed = tab.rate_reported && tab.fitted_rate >= 0.5 && oleinik;
  return r;
}

// 10. Stability envelope.
CriterionResult c10(Ctx& ctx) {
  auto r = make(10, "L1 stability envelope (eps=0.1, T=1)");
  SolverConfig cfg;
  const double eps = 0.1;
  const GridSpec g = padded_grid(-2.0, 2.0, 1.0, 1.0, eps, cfg);
  cfg.fixed_dt = 0.4 * g.dx;
  const double h = g.dx;
  std::vector<Trajectory> runs(2);
  parallel_for(2, [&](std::size_t k) {
    const double shift = k == 0 ? 0.0 : h;
    runs[k] = solve_nn(InitialData1D::from([shift](double x) { return tanh_neg(x - shift); }, g), eps,
                       1.0, cfg);
  }, ctx.threads);
  const auto rep = stability_envelope(runs[0], runs[1], build_mollifier(eps, g.dx));
  double worst = 0.0;
  for (std::size_t k = 0; k < rep.distances.size(); ++k) {
    if (rep.bounds[k] > 0.0) {
      worst = std::max(worst, rep.distances[k] / rep.bounds[k]);
    }
  }
  ctx.record("c10 u", runs[0]);
  ctx.record("c10 shifted", runs[1]);
  r.values.emplace_back("C_eps", rep.constant);
  r.values.emplace_back("initial_distance", rep.distances.front());
  r.values.emplace_back("final_distance", rep.distances.back());
  r.values.emplace_back("worst_ratio_to_bound", worst);
  r.passed = rep.check.passed;
  return r;
}

// 11. Counterexample datum: NN converges, the conservative equation does not.
CriterionResult c11(Ctx& ctx) {
  auto r = make(11, "Counterexample datum (NN vs conservative)");
  PiecewiseInitialData d;
  d.breakpoints = {0.0};
  d.pieces = {[](double x) { return std::clamp(x + 2.0, 0.0, 1.0); },
              [](double x) { return -std::clamp(2.0 - x, 0.0, 1.0); }};
  d.descriptions = {"clamp(x + 2, 0, 1)", "-clamp(2 - x, 0, 1)"};
  ConvergenceProblem p;
  p.a = -2.0;
  p.b = 2.0;
  p.T = 1.0;
  p.window_a = -3.0;
  p.window_b = 3.0;
  p.setup = [d](const GridSpec& g) { return InitialData1D::from(d, g); };
  p.reference = [](const GridFunction1D& u0, const GridSpec& g) {
    return lax_oleinik_solve(u0, 1.0, g);
  };
  std::vector<Trajectory> runs;
  const auto tab =
      convergence_study(p, kEpsilons, "lax_oleinik", SolverConfig{}, ctx.conv(ErrorMetric::L1), &runs);
  bool decreasing = true;
  for (std::size_t k = 0; k < tab.rows.size(); ++k) {
    r.values.emplace_back("NN L1(eps=" + short_num(tab.rows[k].epsilon) + ")", tab.rows[k].error_l1);
    if (k > 0) {
      decreasing = decreasing && tab.rows[k].error_l1 < tab.rows[k - 1].error_l1;
    }
  }
  for (std::size_t k = 0; k < runs.size(); ++k) {
    ctx.record("c11 eps=" + short_num(kEpsilons[k]), runs[k]);
  }
  r.values.emplace_back("NN rate", tab.fitted_rate);
  ConvergenceProblem pc = p;
  pc.mode = Mode::Conservative;
  const double smallest = kEpsilons.back();
  const auto cons = convergence_study(pc, {smallest}, "lax_oleinik", SolverConfig{},
                                      ctx.conv(ErrorMetric::L1));
  const double nn_gap = tab.rows.back().error_l1;
  const double cons_gap = cons.rows.front().error_l1;
  r.values.emplace_back("conservative L1", cons_gap);
  r.values.emplace_back("gap ratio", cons_gap / nn_gap);
  r.passed = decreasing && tab.rate_reported && tab.fitted_rate >= 0.5 && cons_gap > 10.0 * nn_gap;
  return r;
}

// 12. Euler refinement.
CriterionResult c12(Ctx&) {
  auto r = make(12, "Isentropic Euler refinement, round trip, mutation");
  const auto rho0 = [](double x) { return 1.0 + 0.1 * std::exp(-x * x); };
  const auto vel0 = [](double) { return 0.0; };
  const double T = 0.3;
  const ResidualBank bank{-3.0, 3.0, 5};

  const GridSpec probe = GridSpec::from_domain(-4.0, 4.0, 1e-3);
  const auto rr = sample(rho0, probe);
  const auto vv = sample([](double x) { return 0.05 * std::sin(x); }, probe);
  const auto back = from_invariants(to_invariants(rr, vv));
  const double rt = std::max(sup_distance(back.first, rr), sup_distance(back.second, vv));
  const double rt_tol = 4.0 * DBL_EPSILON * std::max({1.0, sup_norm(rr), sup_norm(vv)});
  r.values.emplace_back("round_trip", rt);

  const std::vector<std::pair<double, double>> levels{{4e-3, 0.2}, {2e-3, 0.1}, {1e-3, 0.05}};
  std::vector<std::pair<double, double>> res;
  double inflation = std::numeric_limits<double>::infinity();
  for (const auto& [dx, eps] : levels) {
    SolverConfig cfg;
    cfg.dx = dx;
    const GridSpec g = padded_grid(-4.0, 4.0, 1.1, T, eps, cfg);
    const auto tr = solve_isentropic(rho0, vel0, g, eps, T, cfg);
    res.push_back(conservative_residual(tr.states, tr.times, bank));
    EulerOptions bad;
    bad.flip_lambda = true;
    const auto tm = solve_isentropic(rho0, vel0, g, eps, T, cfg, bad);
    const auto m = conservative_residual(tm.states, tm.times, bank);
    inflation = std::min(inflation, std::max(m.first, m.second) /
                                        std::max(res.back().first, res.back().second));
    r.values.emplace_back("r_mass(dx=" + short_num(dx) + ")", res.back().first);
    r.values.emplace_back("r_mom(dx=" + short_num(dx) + ")", res.back().second);
  }
  double ratio = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < res.size(); ++k) {
    ratio = std::min({ratio, res[k - 1].first / res[k].first, res[k - 1].second / res[k].second});
  }
  r.values.emplace_back("min_decrease", ratio);
  r.values.emplace_back("mutation_inflation", inflation);
  r.passed = rt <= rt_tol && ratio >= 1.8 && inflation >= 10.0;
  return r;
}

// 13. 2D reduction and maximum principle.
CriterionResult c13(Ctx&) {
  auto r = make(13, "2D dimensional reduction and maximum principle");
  SolverConfig cfg;
  cfg.dx = 2e-3;
  const double eps = 0.2;
  const double T = 0.5;
  const GridSpec x = padded_grid(-3.0, 3.0, 1.0, T, eps, cfg);
  // Three rows: every node sits on the boundary stencil in y, the hardest case.
  const GridSpec2D g{x.x0, -0.05, x.dx, 0.05, x.n, 3};
  const InitialData2D u0{sample([](double xx, double) { return tanh_neg(xx); }, g),
                         [](double xx, double) { return tanh_neg(xx); }};
  const auto tr2 = solve_velocity_reg_2d(u0, FluxSpec::burgers(), FluxSpec::zero(), eps, T, cfg);
  const auto tr1 = solve_nn(InitialData1D::from(tanh_neg, x), eps, T, cfg);
  double worst = tr1.times == tr2.times ? 0.0 : std::numeric_limits<double>::infinity();
  if (std::isfinite(worst)) {
    for (std::size_t k = 0; k < tr1.times.size(); ++k) {
      for (std::size_t j = 0; j < g.ny; ++j) {
        worst = std::max(worst, sup_distance(tr2.states[k].row(j), tr1.states[k]));
      }
    }
  }
  r.values.emplace_back("row_diff", worst);

  // A genuinely two-dimensional run.
  SolverConfig c2;
  c2.dx = 0.02;
  const auto gd = GridSpec2D::from_domain(-3.0, 3.0, -3.0, 3.0, 0.02, 0.02);
  const auto f = [](double xx, double yy) { return -0.5 * std::tanh(xx + yy) + 0.3 * std::exp(-xx * xx - yy * yy); };
  const InitialData2D d{sample(f, gd), nullptr};
  const auto trd = solve_velocity_reg_2d(d, FluxSpec::burgers(), FluxSpec::burgers(), 0.25, T, c2);
  double excess = 0.0;
  for (const auto* t : {&tr2, &trd}) {
    const double lo = t->states.front().min();
    const double hi = t->states.front().max();
    for (std::size_t k = 0; k < t->step_min.size(); ++k) {
      excess = std::max({excess, lo - t->step_min[k], t->step_max[k] - hi});
    }
  }
  r.values.emplace_back("max_principle_excess", excess);
  r.passed = worst <= 1e-10 && excess <= 0.0;
  return r;
}

std::string criterion_json(const CriterionResult& c) {
  json values = json::object();
  for (const auto& [k, v] : c.values) {
    values[k] = v;
  }
  const json j{{"version", version_string()},
               {"criterion", c.id},
               {"title", c.title},
               {"passed", c.passed},
               {"values", values},
               {"note", c.note}};
  return j.dump(2) + "\n";
}


std::map<int, CriterionResult> run_core(std::size_t threads,
                                        const std::function<void(const CriterionResult&)>& cb) {
  Ctx ctx;
  ctx.threads = threads;
  using Fn = CriterionResult (*)(Ctx&);
  // Criterion 5 runs last: it audits the trajectories of the others.
  const std::vector<std::pair<int, Fn>> order{{1, c1}, {2, c2},   {3, c3},   {4, c4},   {6, c6},
                                              {7, c7}, {8, c8},   {9, c9},   {10, c10}, {11, c11},
                                              {12, c12}, {13, c13}, {5, c5}};
  std::map<int, CriterionResult> out;
  for (const auto& [id, f] : order) {
    CriterionResult r;
    try {
      r = f(ctx);
    } catch (const std::exception& e) {
      r = make(id, "criterion " + std::to_string(id));
      r.note = std::string("error: ") + e.what();
    }
    if (cb) {
      cb(r);
    }
    out[r.id] = r;
  }
  return out;
}

} // namespace

AcceptanceRun run_acceptance(const AcceptanceOptions& opt) {
  AcceptanceRun run;
  const auto first = run_core(opt.threads, opt.on_result);
  for (const auto& [id, r] : first) {
    run.results.push_back(r);
    char name[32];
    std::snprintf(name, sizeof name, "criterion_%02d.json", id);
    run.files[name] = criterion_json(r);
  }
  if (opt.check_determinism) {
    auto r14 = make(14, "Determinism (repeat run on one thread, byte-identical files)");
    const auto second = run_core(1, nullptr);
    std::size_t differing = 0;
    for (const auto& [id, r] : second) {
      char name[32];
      std::snprintf(name, sizeof name, "criterion_%02d.json", id);
      const auto it = run.files.find(name);
      if (it == run.files.end() || it->second != criterion_json(r)) {
        ++differing;
        r14.note += (r14.note.empty() ? "differs: " : ", ") + std::string(name);
      }
    }
    r14.values.emplace_back("files_compared", static_cast<double>(second.size()));
    r14.values.emplace_back("files_differing", static_cast<double>(differing));
    r14.passed = differing == 0 && second.size() == first.size();
    if (opt.on_result) {
      opt.on_result(r14);
    }
    run.results.push_back(r14);
    run.files["criterion_14.json"] = criterion_json(r14);
  }
  std::string summary = "# nlclaw " + version_string() + " acceptance\n";
  for (const auto& r : run.results) {
    summary += r.line() + "\n";
  }
  run.files["acceptance_summary.txt"] = summary;
  return run;
}

} // namespace nlclaw
