#include "nlclaw/runner.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "nlclaw/errors.hpp"
#include "nlclaw/euler.hpp"
#include "nlclaw/multidim.hpp"
#include "nlclaw/reference.hpp"

namespace nlclaw {

std::string version_string() { return NLCLAW_VERSION; }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string header_lines(const std::vector<std::pair<std::string, std::string>>& fields) {
  std::string out = "# nlclaw " + version_string() + "\n";
  for (const auto& [k, v] : fields) {
    out += "# " + k + "=" + v + "\n";
  }
  return out;
}

namespace {

using json = nlohmann::ordered_json;

ScalarFn expr_fn(const std::string& text) {
  const Expression e = Expression::parse(text);
  return [e](double x) { return e(x); };
}

FluxSpec make_flux(FluxKind k, const ScenarioSpec& s, double lo, double hi) {
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  switch (k) {
  case FluxKind::Burgers:
    return FluxSpec::burgers(lo, hi);
  case FluxKind::Cubic:
    return FluxSpec::cubic(lo, hi);
  case FluxKind::Zero:
    return FluxSpec::zero(lo, hi);
  case FluxKind::Expression:
    return FluxSpec("expression", expr_fn(s.f), expr_fn(s.fprime), lo, hi);
  }
  throw InvalidArgument("unknown flux");
}

Mode solver_mode(RunMode m) {
  switch (m) {
  case RunMode::NN:
    return Mode::NN;
  case RunMode::Conservative:
    return Mode::Conservative;
  case RunMode::VelocityReg:
    return Mode::VelocityReg;
  case RunMode::FluxReg:
    return Mode::FluxReg;
  default:
    throw InvalidArgument("mode " + to_string(m) + " is not a scalar 1D mode");
  }
}

std::string command_name(Command c) {
  switch (c) {
  case Command::Run:
    return "run";
  case Command::Sweep:
    return "sweep";
  case Command::Euler:
    return "euler";
  case Command::Verify:
    return "verify";
  }
  return "?";
}

json check_json(const CheckResult& c) {
  return json{{"name", c.name},         {"passed", c.passed},       {"required", c.required},
              {"measured", c.measured}, {"threshold", c.threshold}, {"realises", c.realises}};
}

json report_json(const DiagnosticsReport& r) {
  json a = json::array();
  for (const auto& c : r.checks) {
    a.push_back(check_json(c));
  }
  return a;
}

SolverConfig base_config(const ScenarioSpec& s, const RunOptions& opt) {
  SolverConfig cfg;
  cfg.dx = s.dx;
  cfg.cfl = s.cfl;
  cfg.stride = s.stride;
  cfg.max_snapshots = std::max<std::size_t>(opt.max_snapshots, 3);
  return cfg;
}

/// Node range of g inside [a, b].
std::pair<std::size_t, std::size_t> window(const GridSpec& g, double a, double b) {
  const double lo = std::ceil((a - g.x0) / g.dx - 1e-9);
  const double hi = std::floor((b - g.x0) / g.dx + 1e-9);
  const auto i0 = static_cast<std::size_t>(std::max(0.0, lo));
  const auto i1 = static_cast<std::size_t>(std::min(static_cast<double>(g.n - 1), hi));
  return {i0, i1};
}

std::string suffix(const std::vector<double>& eps, std::size_t k) {
  return eps.size() > 1 ? "_eps" + std::to_string(k) : "";
}

std::string label(const std::string& name, const std::vector<double>& eps, std::size_t k) {
  return eps.size() > 1 ? name + "[eps=" + fmt(eps[k]) + "]" : name;
}

void add_labelled(DiagnosticsReport& into, const DiagnosticsReport& from,
                  const std::vector<double>& eps, std::size_t k) {
  for (CheckResult c : from.checks) {
    c.name = label(c.name, eps, k);
    into.add(std::move(c));
  }
}

// ---------------------------------------------------------------- 1D scalar

struct Scalar1D {
  std::function<InitialData1D(const GridSpec&)> setup;
  double lo = 0.0;
  double hi = 0.0;
  double sup = 0.0;
  FluxSpec flux = FluxSpec::burgers();
  double speed = 0.0; ///< padding speed
};

Scalar1D prepare_scalar(const ScenarioSpec& s) {
  Scalar1D p;
  switch (s.initial) {
  case InitialKind::Riemann: {
    const RiemannData d{s.uL, s.uR};
    p.setup = [d](const GridSpec& g) { return InitialData1D::from(d, g); };
    p.lo = std::min(s.uL, s.uR);
    p.hi = std::max(s.uL, s.uR);
    break;
  }
  case InitialKind::Piecewise: {
    PiecewiseInitialData pw;
    pw.breakpoints = s.breakpoints;
    for (const auto& t : s.pieces) {
      pw.pieces.push_back(expr_fn(t));
      pw.descriptions.push_back(t);
    }
    pw.lipschitz_C = s.lipschitz_C;
    pw.validate();
    p.setup = [pw](const GridSpec& g) { return InitialData1D::from(pw, g); };
    const auto u = sample(pw, GridSpec::from_domain(s.a, s.b, s.dx));
    p.lo = u.min();
    p.hi = u.max();
    break;
  }
  case InitialKind::Expression: {
    // Interpolated from the samples: feet then never leave the sampled range,
    // so the maximum principle is checked exactly.
    const ScalarFn f = expr_fn(s.u0);
    p.setup = [f](const GridSpec& g) { return InitialData1D(sample(f, g)); };
    const auto u = sample(f, GridSpec::from_domain(s.a, s.b, s.dx));
    p.lo = u.min();
    p.hi = u.max();
    break;
  }
  case InitialKind::None:
    throw InvalidArgument("scenario has no initial data");
  }
  p.sup = std::max(std::abs(p.lo), std::abs(p.hi));
  p.flux = make_flux(s.flux, s, p.lo, p.hi);
  const bool general = s.mode == RunMode::VelocityReg || s.mode == RunMode::FluxReg;
  p.speed = general ? p.flux.max_speed() : p.sup;
  return p;
}

Trajectory solve_scalar(const ScenarioSpec& s, const Scalar1D& p, double eps,
                        const SolverConfig& cfg) {
  const GridSpec g = padded_grid(s.a, s.b, p.speed, s.T, eps, cfg);
  const InitialData1D u0 = p.setup(g);
  switch (s.mode) {
  case RunMode::NN:
    return solve_nn(u0, eps, s.T, cfg);
  case RunMode::Conservative:
    return solve_conservative_nonlocal(u0.grid(), eps, s.T, cfg);
  default:
    return solve_general(u0, p.flux, eps, s.T, cfg, solver_mode(s.mode));
  }
}

std::vector<std::pair<std::string, std::string>> run_header(const ScenarioSpec& s, double eps,
                                                            double dx, double dt) {
  return {{"scenario", s.name}, {"mode", to_string(s.mode)}, {"epsilon", fmt(eps)},
          {"dx", fmt(dx)},      {"dt", fmt(dt)},             {"flux", to_string(s.flux)},
          {"T", fmt(s.T)}};
}

std::string trajectory_csv(const ScenarioSpec& s, const Trajectory& tr) {
  std::ostringstream o;
  const GridSpec& g = tr.initial().spec();
  o << header_lines(run_header(s, tr.epsilon, g.dx, tr.dt));
  o << "t,x,u\n";
  const auto [i0, i1] = window(g, s.a, s.b);
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    const std::string t = fmt(tr.times[k]);
    for (std::size_t i = i0; i <= i1; ++i) {
      o << t << ',' << fmt(g.x(i)) << ',' << fmt(tr.states[k][i]) << '\n';
    }
  }
  return o.str();
}

std::string trajectory_json(const ScenarioSpec& s, const Trajectory& tr) {
  const GridSpec& g = tr.initial().spec();
  const auto [i0, i1] = window(g, s.a, s.b);
  json j;
  json h;
  for (const auto& [k, v] : run_header(s, tr.epsilon, g.dx, tr.dt)) {
    h[k] = v;
  }
  j["version"] = version_string();
  j["header"] = h;
  json x = json::array();
  for (std::size_t i = i0; i <= i1; ++i) {
    x.push_back(g.x(i));
  }
  j["x"] = x;
  j["t"] = tr.times;
  json u = json::array();
  for (const auto& st : tr.states) {
    json row = json::array();
    for (std::size_t i = i0; i <= i1; ++i) {
      row.push_back(st[i]);
    }
    u.push_back(row);
  }
  j["u"] = u;
  return j.dump(1) + "\n";
}

std::string profile_dat(const std::vector<std::pair<std::string, std::string>>& header,
                        const std::string& cols, const GridFunction1D& u, double a, double b) {
  std::ostringstream o;
  o << header_lines(header) << "# " << cols << "\n";
  const auto [i0, i1] = window(u.spec(), a, b);
  for (std::size_t i = i0; i <= i1; ++i) {
    o << fmt(u.x(i)) << ' ' << fmt(u[i]) << '\n';
  }
  return o.str();
}

/// Front-speed predictions for a decreasing Riemann jump.
struct SpeedPrediction {
  double expected = 0.0;
  double rankine_hugoniot = 0.0;
};

SpeedPrediction predict_speed(const ScenarioSpec& s, const FluxSpec& f) {
  SpeedPrediction p;
  p.rankine_hugoniot = (f.f(s.uL) - f.f(s.uR)) / (s.uL - s.uR);
  switch (s.mode) {
  case RunMode::NN:
    p.expected = 0.5 * (s.uL + s.uR);
    break;
  case RunMode::VelocityReg:
    p.expected = 0.5 * (f.fprime(s.uL) + f.fprime(s.uR));
    break;
  case RunMode::FluxReg:
    p.expected = f.fprime(0.5 * (s.uL + s.uR));
    break;
  default:
    p.expected = p.rankine_hugoniot;
  }
  return p;
}

bool has_front(const ScenarioSpec& s, const Scalar1D& p) {
  return s.initial == InitialKind::Riemann && s.uL > s.uR &&
         (s.mode == RunMode::NN || s.mode == RunMode::VelocityReg || s.mode == RunMode::FluxReg) &&
         p.flux.is_convex();
}

ConvergenceProblem convergence_problem(const ScenarioSpec& s, const Scalar1D& p,
                                       std::string* reference) {
  ConvergenceProblem cp;
  cp.a = s.a;
  cp.b = s.b;
  cp.sup_u0 = p.speed;
  cp.T = s.T;
  cp.window_a = s.a;
  cp.window_b = s.b;
  cp.mode = solver_mode(s.mode);
  cp.flux = p.flux;
  cp.setup = p.setup;
  if (s.initial == InitialKind::Riemann && s.uL > s.uR) {
    cp.floor_l1_per_dx = 10.0;
  }
  if (s.initial == InitialKind::Piecewise) {
    cp.tube_factor = 4.0;
  }
  const double T = s.T;
  if (s.flux == FluxKind::Burgers) {
    if (s.initial == InitialKind::Riemann) {
      const RiemannData d{s.uL, s.uR};
      *reference = "exact_riemann";
      cp.reference = [d, T](const GridFunction1D&, const GridSpec& g) {
        return sample([d, T](double x) { return burgers_riemann_exact(d, x / T); }, g);
      };
    } else {
      *reference = "lax_oleinik";
      cp.reference = [T](const GridFunction1D& u0, const GridSpec& g) {
        return lax_oleinik_solve(u0, T, g);
      };
    }
  } else {
    if (!p.flux.is_convex()) {
      throw InvalidFlux("sweeps with a non-convex flux have no reference solver");
    }
    *reference = "godunov";
    const FluxSpec f = p.flux;
    cp.reference = [f, T](const GridFunction1D& u0, const GridSpec&) {
      return godunov_solve(u0, f, T).final();
    };
  }
  return cp;
}

void run_scalar(const ScenarioSpec& s, const RunOptions& opt, RunOutcome& out, json& j) {
  const Scalar1D p = prepare_scalar(s);
  const SolverConfig cfg = base_config(s, opt);
  const auto& eps = s.epsilons;
  const bool multi = eps.size() > 1;
  std::vector<Trajectory> runs;
  json table;
  if (multi) {
    std::string ref;
    const ConvergenceProblem cp = convergence_problem(s, p, &ref);
    ConvergenceOptions co;
    co.dx_max = s.dx;
    co.metric = ErrorMetric::L1;
    co.threads = opt.threads;
    const ConvergenceTable tab = convergence_study(cp, eps, ref, cfg, co, &runs);
    json rows = json::array();
    std::vector<double> e;
    std::vector<double> err;
    std::ostringstream dat;
    dat << header_lines({{"scenario", s.name}, {"mode", to_string(s.mode)},
                         {"reference", ref}, {"T", fmt(s.T)},
                         {"window", fmt(s.a) + "," + fmt(s.b)}})
        << "# epsilon l1_error\n";
    for (const auto& r : tab.rows) {
      rows.push_back(json{{"epsilon", r.epsilon},
                          {"dx", r.dx},
                          {"dt", r.dt},
                          {"error_l1", r.error_l1},
                          {"error_sup", r.error_sup},
                          {"floor_dominated", r.floor_dominated}});
      e.push_back(r.epsilon);
      err.push_back(r.error_l1);
      dat << fmt(r.epsilon) << ' ' << fmt(r.error_l1) << '\n';
    }
    const double slope_all = log_log_slope(e, err);
    table = json{{"reference", ref},
                 {"metric", "l1"},
                 {"rows", rows},
                 {"fitted_rate", tab.fitted_rate},
                 {"rate_reported", tab.rate_reported},
                 {"slope_all", slope_all}};
    out.files[s.name + "_sweep.dat"] = dat.str();
    out.summary.push_back("reference " + ref + ": fitted rate " +
                          (tab.rate_reported ? fmt(tab.fitted_rate) : std::string("not reported")) +
                          ", slope over all rows " + fmt(slope_all));
    for (const auto& r : tab.rows) {
      out.summary.push_back("  eps " + fmt(r.epsilon) + "  L1 " + fmt(r.error_l1) +
                            (r.floor_dominated ? "  (floor)" : ""));
    }
    if (s.expect == Expectation::Nonconvergence) {
      out.report.add({"plateau_slope", std::abs(slope_all) <= 0.1, true, std::abs(slope_all), 0.1,
                      "errors do not decrease with epsilon"});
    }
    if (s.expect == Expectation::Convergence || s.min_rate > 0.0) {
      const double need = s.min_rate > 0.0 ? s.min_rate : 0.5;
      out.report.add({"convergence_rate", tab.rate_reported && tab.fitted_rate >= need, true,
                      tab.fitted_rate, need, "errors decrease with epsilon"});
    }
  } else {
    if (s.expect != Expectation::None || s.min_rate > 0.0) {
      throw InvalidArgument("'expect' and 'min_rate' need an epsilon list");
    }
    runs.push_back(solve_scalar(s, p, eps.front(), cfg));
  }

  json jr = json::array();
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const Trajectory& tr = runs[k];
    const DiagnosticsReport inv = check_invariants(tr);
    add_labelled(out.report, inv, eps, k);
    json rj{{"epsilon", tr.epsilon},
            {"dx", tr.initial().dx()},
            {"dt", tr.dt},
            {"stored_states", tr.times.size()},
            {"contract", inv.contract}};
    if (has_front(s, p)) {
      const SpeedPrediction pred = predict_speed(s, p.flux);
      const FrontSpeed fs = measure_front_speed(tr, 0.5 * (s.uL + s.uR), 0.2 * s.T, s.T);
      const double tol = 0.02 * std::abs(pred.expected);
      out.report.add({label("front_speed", eps, k), std::abs(fs.speed - pred.expected) <= tol, true,
                      fs.speed, pred.expected, "Riemann front speed within 2%"});
      rj["front_speed"] = json{{"speed", fs.speed},
                               {"expected", pred.expected},
                               {"standard_error", fs.standard_error},
                               {"samples", fs.samples},
                               {"rankine_hugoniot", pred.rankine_hugoniot}};
      out.summary.push_back("eps " + fmt(tr.epsilon) + ": front speed " + fmt(fs.speed) +
                            " (expected " + fmt(pred.expected) + ", Rankine-Hugoniot " +
                            fmt(pred.rankine_hugoniot) + ")");
    }
    jr.push_back(rj);
    if (opt.command == Command::Run) {
      const std::string base = s.name + suffix(eps, k);
      out.files[base + (s.output == OutputFormat::Csv ? ".csv" : ".json")] =
          s.output == OutputFormat::Csv ? trajectory_csv(s, tr) : trajectory_json(s, tr);
      out.files[base + "_final.dat"] =
          profile_dat(run_header(s, tr.epsilon, tr.initial().dx(), tr.dt), "x u", tr.final(), s.a, s.b);
    }
  }
  j["runs"] = jr;
  if (multi) {
    j["convergence"] = table;
  }
}

// ---------------------------------------------------------------- euler

void run_euler(const ScenarioSpec& s, const RunOptions& opt, RunOutcome& out, json& j) {
  const ScalarFn rho0 = expr_fn(s.rho0);
  const ScalarFn v0 = expr_fn(s.v0);
  const GridSpec probe = GridSpec::from_domain(s.a, s.b, s.dx);
  const auto r = sample(rho0, probe);
  const auto v = sample(v0, probe);

  // Round trip through the invariants, to rounding.
  const auto back = from_invariants(to_invariants(r, v));
  const double scale = std::max({1.0, sup_norm(r), sup_norm(v)});
  const double rt = std::max(sup_distance(back.first, r), sup_distance(back.second, v));
  out.report.add({"round_trip", rt <= 4.0 * DBL_EPSILON * scale, true, rt, 4.0 * DBL_EPSILON * scale,
                  "(rho, v) -> (mu, lam) -> (rho, v) is the identity"});

  double speed = 0.0;
  for (std::size_t i = 0; i < probe.n; ++i) {
    speed = std::max({speed, std::abs(r[i] + v[i]), std::abs(r[i] - v[i])});
  }
  const auto& eps = s.epsilons;
  const ResidualBank bank{s.a, s.b, 5};
  json rows = json::array();
  std::vector<std::pair<double, double>> res;
  std::ostringstream dat;
  dat << header_lines({{"scenario", s.name}, {"mode", "euler"}, {"T", fmt(s.T)}})
      << "# epsilon residual_mass residual_momentum\n";
  for (std::size_t k = 0; k < eps.size(); ++k) {
    SolverConfig cfg = base_config(s, opt);
    // dx follows epsilon so that dx, dt and epsilon refine together.
    cfg.dx = s.dx * eps[k] / eps.front();
    const GridSpec g = padded_grid(s.a, s.b, speed, s.T, eps[k], cfg);
    EulerTrajectory tr = solve_isentropic(rho0, v0, g, eps[k], s.T, cfg);
    const auto [r1, r2] = conservative_residual(tr.states, tr.times, bank);
    res.emplace_back(r1, r2);
    dat << fmt(eps[k]) << ' ' << fmt(r1) << ' ' << fmt(r2) << '\n';
    rows.push_back(json{{"epsilon", eps[k]},
                        {"dx", cfg.dx},
                        {"dt", tr.dt},
                        {"residual_mass", r1},
                        {"residual_momentum", r2},
                        {"negative_density", tr.negative_density}});
    out.report.add({label("residual_finite", eps, k), std::isfinite(r1) && std::isfinite(r2), true,
                    std::max(r1, r2), 0.0, "weak-form residual is finite"});
    out.report.add({label("density_nonnegative", eps, k), !tr.negative_density, false,
                    tr.negative_density ? 1.0 : 0.0, 0.0, "no vacuum formed"});
    out.summary.push_back("eps " + fmt(eps[k]) + " dx " + fmt(cfg.dx) + ": residuals " + fmt(r1) +
                          " " + fmt(r2));
    if (opt.command == Command::Run || opt.command == Command::Euler) {
      const std::string base = s.name + suffix(eps, k);
      const auto hdr = run_header(s, eps[k], cfg.dx, tr.dt);
      std::ostringstream o;
      o << header_lines(hdr) << "t,x,rho,v\n";
      const auto [i0, i1] = window(g, s.a, s.b);
      for (std::size_t n = 0; n < tr.times.size(); ++n) {
        const auto rho = tr.states[n].rho();
        const auto vel = tr.states[n].vel();
        const std::string t = fmt(tr.times[n]);
        for (std::size_t i = i0; i <= i1; ++i) {
          o << t << ',' << fmt(g.x(i)) << ',' << fmt(rho[i]) << ',' << fmt(vel[i]) << '\n';
        }
      }
      out.files[base + ".csv"] = o.str();
      out.files[base + "_rho.dat"] = profile_dat(hdr, "x rho", tr.states.back().rho(), s.a, s.b);
      out.files[base + "_v.dat"] = profile_dat(hdr, "x v", tr.states.back().vel(), s.a, s.b);
    }
  }
  for (std::size_t k = 1; k < res.size(); ++k) {
    const double need = 0.9 * eps[k - 1] / eps[k];
    const double ratio = std::min(res[k - 1].first / res[k].first, res[k - 1].second / res[k].second);
    out.report.add({"residual_decrease[" + fmt(eps[k - 1]) + "->" + fmt(eps[k]) + "]",
                    ratio >= need, s.expect == Expectation::Convergence, ratio, need,
                    "residual shrinks when dx, dt and epsilon are refined together"});
  }
  j["runs"] = rows;
  if (eps.size() > 1) {
    out.files[s.name + "_residual.dat"] = dat.str();
  }
}

// ---------------------------------------------------------------- 2D

void run_2d(const ScenarioSpec& s, const RunOptions& opt, RunOutcome& out, json& j) {
  if (s.epsilons.size() != 1) {
    throw InvalidArgument("mode nn2d takes a single epsilon");
  }
  const Expression e = Expression::parse(s.u0, true);
  const ScalarFn2 f = [e](double x, double y) { return e(x, y); };
  const auto probe = sample(f, GridSpec2D::from_domain(s.a, s.b, s.ya, s.yb, s.dx, s.dx));
  const double lo = probe.min();
  const double hi = probe.max();
  const FluxSpec f1 = make_flux(s.flux, s, lo, hi);
  const FluxSpec f2 = make_flux(s.flux_y, s, lo, hi);
  const double eps = s.epsilons.front();
  SolverConfig cfg = base_config(s, opt);
  const double pad_x = f1.max_speed() * s.T + eps + cfg.margin;
  const double pad_y = s.flux_y == FluxKind::Zero ? 0.0 : f2.max_speed() * s.T + eps + cfg.margin;
  const auto g = GridSpec2D::from_domain(s.a - pad_x, s.b + pad_x, s.ya - pad_y, s.yb + pad_y,
                                         s.dx, s.dx);
  const InitialData2D u0{sample(f, g), nullptr}; // bilinear from samples, see 1D expression data
  const Trajectory2D tr = solve_velocity_reg_2d(u0, f1, f2, eps, s.T, cfg);

  const double slack = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
  double lo_run = u0.samples.min();
  double hi_run = u0.samples.max();
  double worst = 0.0;
  for (std::size_t k = 0; k < tr.step_min.size(); ++k) {
    worst = std::max({worst, u0.samples.min() - tr.step_min[k], tr.step_max[k] - u0.samples.max()});
    lo_run = std::min(lo_run, tr.step_min[k]);
    hi_run = std::max(hi_run, tr.step_max[k]);
  }
  out.report.add({"max_principle", worst <= slack, true, std::max(0.0, worst), slack,
                  "values stay within the range of the initial data"});
  const double tv0 = tr.step_tv.front();
  const double tvmax = *std::max_element(tr.step_tv.begin(), tr.step_tv.end());
  out.report.add({"tv_bound", tvmax <= 1.05 * tv0 + 1e-12, true, tvmax, 1.05 * tv0,
                  "total variation stays within 5% of its initial value"});
  out.summary.push_back("2D run: range [" + fmt(lo_run) + ", " + fmt(hi_run) + "], max TV " +
                        fmt(tvmax) + " (initial " + fmt(tv0) + ")");
  j["runs"] = json::array({json{{"epsilon", eps}, {"dx", s.dx}, {"dt", tr.dt},
                                {"stored_states", tr.times.size()}}});
  if (opt.command == Command::Run) {
    const auto& u = tr.final();
    auto hdr = run_header(s, eps, s.dx, tr.dt);
    hdr.emplace_back("t", fmt(tr.times.back()));
    std::ostringstream o;
    o << header_lines(hdr) << "x,y,u\n";
    const auto [i0, i1] = window(g.x_axis(), s.a, s.b);
    const auto [j0, j1] = window(g.y_axis(), s.ya, s.yb);
    for (std::size_t jj = j0; jj <= j1; ++jj) {
      for (std::size_t i = i0; i <= i1; ++i) {
        o << fmt(g.x(i)) << ',' << fmt(g.y(jj)) << ',' << fmt(u(i, jj)) << '\n';
      }
    }
    out.files[s.name + ".csv"] = o.str();
    // Profile along the middle row of the window.
    const std::size_t mid = (j0 + j1) / 2;
    hdr.emplace_back("y", fmt(g.y(mid)));
    out.files[s.name + "_final.dat"] = profile_dat(hdr, "x u", u.row(mid), s.a, s.b);
  }
}

} // namespace

RunOutcome run_scenario(const ScenarioSpec& s, const RunOptions& opt) {
  if (opt.command == Command::Sweep && s.epsilons.size() < 2) {
    throw InvalidArgument("sweep needs at least two values in 'epsilons'");
  }
  if (opt.command == Command::Euler && s.mode != RunMode::Euler) {
    throw InvalidArgument("the euler command needs a scenario with mode euler");
  }
  RunOutcome out;
  json j;
  j["version"] = version_string();
  j["scenario"] = s.name;
  j["command"] = command_name(opt.command);
  j["mode"] = to_string(s.mode);
  j["flux"] = to_string(s.flux);
  j["T"] = s.T;
  j["dx"] = s.dx;
  j["epsilons"] = s.epsilons;
  switch (s.mode) {
  case RunMode::Euler:
    out.report.contract = "euler";
    run_euler(s, opt, out, j);
    break;
  case RunMode::NN2D:
    out.report.contract = "nn2d";
    run_2d(s, opt, out, j);
    break;
  default:
    out.report.contract = s.mode == RunMode::Conservative ? "conservative" : "nn";
    run_scalar(s, opt, out, j);
  }
  const bool pass = out.report.all_required_pass();
  out.exit_code = pass ? kExitOk : kExitCheckFailure;
  j["checks"] = report_json(out.report);
  j["passed"] = pass;
  out.files[s.name + "_report.json"] = j.dump(2) + "\n";
  std::size_t failed = 0;
  for (const auto& c : out.report.checks) {
    if (c.required && !c.passed) {
      ++failed;
      out.summary.push_back("FAILED " + c.name + ": measured " + fmt(c.measured) + ", threshold " +
                            fmt(c.threshold));
    }
  }
  out.summary.push_back(std::to_string(out.report.checks.size()) + " checks, " +
                        std::to_string(failed) + " required failures");
  return out;
}

void write_outcome(const RunOutcome& outcome, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, content] : outcome.files) {
    std::ofstream f(dir / name, std::ios::binary);
    f << content;
    if (!f) {
      throw Error("cannot write " + (dir / name).string());
    }
  }
}

} // namespace nlclaw
