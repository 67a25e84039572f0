#include "nlclaw/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlclaw/errors.hpp"
#include "nlclaw/parallel.hpp"

namespace nlclaw {

bool DiagnosticsReport::all_required_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed || !c.required; });
}

const CheckResult* DiagnosticsReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) {
      return &c;
    }
  }
  return nullptr;
}

void DiagnosticsReport::append(const DiagnosticsReport& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

double catastrophe_time(const GridFunction1D& u0) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < u0.size(); ++i) {
    s = std::max(s, -(u0[i + 1] - u0[i]) / u0.dx());
  }
  return s > 0.0 ? 1.0 / s : std::numeric_limits<double>::infinity();
}

double secondary_horizon(double min_gap, double sup_u0) {
  if (!(min_gap > 0.0)) {
    throw InvalidArgument("breakpoint gap must be positive");
  }
  return sup_u0 > 0.0 ? min_gap / (2.0 * sup_u0) : std::numeric_limits<double>::infinity();
}

double level_crossing(const GridFunction1D& u, double level) {
  std::size_t count = 0;
  double pos = 0.0;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    if ((u[i] > level) != (u[i + 1] > level)) {
      ++count;
      pos = u.x(i) + u.dx() * (level - u[i]) / (u[i + 1] - u[i]);
    }
  }
  if (count == 0) {
    throw NoCrossing("profile never crosses the level");
  }
  if (count > 1) {
    throw MultipleCrossings("profile crosses the level " + std::to_string(count) + " times");
  }
  return pos;
}

FrontSpeed measure_front_speed(const Trajectory& traj, double level, double t0, double t1) {
  std::vector<double> ts;
  std::vector<double> xs;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const double t = traj.times[k];
    if (t >= t0 && t <= t1) {
      ts.push_back(t);
      xs.push_back(level_crossing(traj.states[k], level));
    }
  }
  const std::size_t n = ts.size();
  if (n < 3) {
    throw InvalidArgument("front speed needs at least three stored states in the window");
  }
  double tm = 0.0;
  double xm = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    tm += ts[k];
    xm += xs[k];
  }
  tm /= static_cast<double>(n);
  xm /= static_cast<double>(n);
  double stt = 0.0;
  double stx = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    stt += (ts[k] - tm) * (ts[k] - tm);
    stx += (ts[k] - tm) * (xs[k] - xm);
  }
  if (!(stt > 0.0)) {
    throw InvalidArgument("front speed window has no time extent");
  }
  FrontSpeed out;
  out.speed = stx / stt;
  double ssr = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double r = xs[k] - (xm + out.speed * (ts[k] - tm));
    ssr += r * r;
  }
  out.standard_error = std::sqrt(ssr / static_cast<double>(n - 2) / stt);
  out.samples = n;
  return out;
}

namespace {

CheckResult make_check(std::string name, double measured, double threshold, bool required,
                       std::string realises) {
  CheckResult c;
  c.name = std::move(name);
  c.measured = measured;
  c.threshold = threshold;
  c.passed = measured <= threshold;
  c.required = required;
  c.realises = std::move(realises);
  return c;
}

double mass(const GridFunction1D& u) {
  double s = 0.0;
  for (double v : u.values()) {
    s += v;
  }
  return s * u.dx();
}

} // namespace

DiagnosticsReport check_invariants(const Trajectory& traj, const DiagnosticTolerances& tol) {
  if (traj.states.empty()) {
    throw InvalidArgument("empty trajectory");
  }
  const bool conservative = traj.mode == Mode::Conservative;
  DiagnosticsReport rep;
  rep.contract = conservative ? "conservative" : "nn";
  const GridFunction1D& u0 = traj.initial();
  const double lo = u0.min();
  const double hi = u0.max();
  const double sup0 = sup_norm(u0);
  const double tv0 = total_variation(u0);

  std::vector<double> tvs = traj.step_tv;
  std::vector<double> mins = traj.step_min;
  std::vector<double> maxs = traj.step_max;
  if (tvs.empty()) {
    for (const auto& s : traj.states) {
      tvs.push_back(total_variation(s));
      mins.push_back(s.min());
      maxs.push_back(s.max());
    }
  }

  double excess = 0.0;
  for (std::size_t k = 0; k < mins.size(); ++k) {
    excess = std::max({excess, maxs[k] - hi, lo - mins[k]});
  }
  rep.add(make_check("max_principle", excess, tol.max_principle * std::max(1.0, sup0),
                     !conservative, "values stay within the range of u0"));

  double growth = 0.0;
  for (std::size_t k = 1; k < tvs.size(); ++k) {
    growth = std::max(growth, tvs[k] - tvs[k - 1]);
  }
  rep.add(make_check("tv_nonincreasing", growth, tol.tv_step * std::max(1.0, tv0), !conservative,
                     "discrete total variation never grows between steps"));

  const double tv_end = total_variation(traj.final());
  const double deficit = tv0 > 0.0 ? std::max(0.0, (tv0 - tv_end) / tv0) : 0.0;
  rep.add(make_check("tv_deficit", deficit, tol.tv_deficit, !conservative,
                     "total variation preserved up to the terminal time"));

  // Pairs at least a tenth of the run apart, so that a front jumping a whole
  // cell between two close snapshots does not dominate the ratio.
  const double span = tol.lipschitz_span * traj.final_time();
  double lip = 0.0;
  std::size_t j = 0;
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    j = std::max(j, k + 1);
    while (j < traj.states.size() && traj.times[j] - traj.times[k] < span) {
      ++j;
    }
    if (j >= traj.states.size()) {
      break;
    }
    const double dt = traj.times[j] - traj.times[k];
    if (dt > 0.0) {
      lip = std::max(lip, l1_distance(traj.states[j], traj.states[k]) / dt);
    }
  }
  rep.add(make_check("l1_lipschitz", lip, tol.lipschitz_factor * sup0 * tv0, !conservative,
                     "L1 distance between times bounded by sup|u0| TV(u0) |t - s|"));

  if (conservative) {
    // With constant far-field states the boundary flux is u^2 on each side.
    const double uL = u0[0];
    const double uR = u0[u0.size() - 1];
    const double m0 = mass(u0);
    double drift = 0.0;
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
      const double t = traj.times[k] - traj.times.front();
      drift = std::max(drift, std::abs(mass(traj.states[k]) - m0 + t * (uR * uR - uL * uL)));
    }
    rep.add(make_check("mass", drift, tol.mass * std::max(1.0, std::abs(m0)), true,
                       "mass changes only through the far-field flux"));
  }
  return rep;
}

StabilityReport stability_envelope(const Trajectory& u, const Trajectory& v, const Mollifier& m,
                                   const DiagnosticTolerances& tol) {
  if (u.states.size() != v.states.size() || u.states.empty()) {
    throw InvalidArgument("trajectories must store the same number of states");
  }
  StabilityReport rep;
  rep.constant = m.sup_density() * (total_variation(u.initial()) + total_variation(v.initial()));
  const double d0 = l1_distance(u.initial(), v.initial());
  double worst = 0.0;
  bool ok = true;
  for (std::size_t k = 0; k < u.states.size(); ++k) {
    if (std::abs(u.times[k] - v.times[k]) > 1e-12 * std::max(1.0, u.times[k])) {
      throw InvalidArgument("trajectories are stored at different times");
    }
    const double t = u.times[k] - u.times.front();
    const double d = l1_distance(u.states[k], v.states[k]);
    const double bound = std::exp(rep.constant * t) * d0 * tol.stability_factor;
    rep.times.push_back(u.times[k]);
    rep.distances.push_back(d);
    rep.bounds.push_back(bound);
    ok = ok && d <= bound;
    if (bound > 0.0) {
      worst = std::max(worst, d / bound);
    } else if (d > 0.0) {
      worst = std::numeric_limits<double>::infinity();
    }
  }
  rep.check = make_check("stability_envelope", worst, 1.0, true,
                         "L1 distance within exp(C t) times the initial distance");
  rep.check.passed = ok;
  return rep;
}

CheckResult oleinik_check(const GridFunction1D& u, double C, const Intervals& excluded,
                          const DiagnosticTolerances& tol) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    const double xa = u.x(i);
    const double xb = u.x(i + 1);
    const bool skip = std::any_of(excluded.begin(), excluded.end(), [&](const auto& iv) {
      return xb >= iv.first && xa <= iv.second;
    });
    if (!skip) {
      worst = std::max(worst, (u[i + 1] - u[i]) / u.dx());
    }
  }
  if (!std::isfinite(worst)) {
    worst = 0.0;
  }
  return make_check("oleinik", worst, C + tol.oleinik, true, "one-sided slope bound u_x <= C");
}

std::vector<double> find_shocks(const GridFunction1D& u, double min_drop) {
  std::vector<double> out;
  std::size_t i = 0;
  const std::size_t n = u.size();
  while (i + 1 < n) {
    if (u[i + 1] >= u[i]) {
      ++i;
      continue;
    }
    // run of strictly decreasing steps, each at least a tenth of min_drop
    std::size_t j = i;
    while (j + 1 < n && u[j] - u[j + 1] >= 0.1 * min_drop) {
      ++j;
    }
    if (j > i && u[i] - u[j] >= min_drop) {
      out.push_back(0.5 * (u.x(i) + u.x(j)));
    }
    i = std::max(j, i + 1);
  }
  return out;
}

Intervals tubes(const std::vector<double>& centres, double half_width) {
  Intervals out;
  for (double c : centres) {
    out.emplace_back(c - half_width, c + half_width);
  }
  return out;
}

namespace {

bool excluded_node(double x, const Intervals& excluded) {
  return std::any_of(excluded.begin(), excluded.end(),
                     [x](const auto& iv) { return x >= iv.first && x <= iv.second; });
}

} // namespace

double l1_distance_excluding(const GridFunction1D& u, const GridFunction1D& v, double a, double b,
                             const Intervals& excluded) {
  if (!u.same_grid(v)) {
    throw GridMismatch("grid functions are defined on different grids");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = u.x(i);
    if (x >= a && x <= b && !excluded_node(x, excluded)) {
      s += std::abs(u[i] - v[i]);
    }
  }
  return s * u.dx();
}

double sup_distance_excluding(const GridFunction1D& u, const GridFunction1D& v, double a,
                              double b, const Intervals& excluded) {
  if (!u.same_grid(v)) {
    throw GridMismatch("grid functions are defined on different grids");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = u.x(i);
    if (x >= a && x <= b && !excluded_node(x, excluded)) {
      s = std::max(s, std::abs(u[i] - v[i]));
    }
  }
  return s;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t k = 0; k < std::min(x.size(), y.size()); ++k) {
    if (x[k] > 0.0 && y[k] > 0.0) {
      lx.push_back(std::log(x[k]));
      ly.push_back(std::log(y[k]));
    }
  }
  const std::size_t n = lx.size();
  if (n < 2) {
    return 0.0;
  }
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

ConvergenceTable convergence_study(const ConvergenceProblem& problem,
                                   const std::vector<double>& epsilons,
                                   const std::string& reference_name, const SolverConfig& cfg,
                                   const ConvergenceOptions& opt,
                                   std::vector<Trajectory>* trajectories) {
  if (epsilons.empty()) {
    throw InvalidArgument("epsilon list is empty");
  }
  if (!problem.setup || !problem.reference) {
    throw InvalidArgument("convergence problem needs setup and reference callbacks");
  }
  std::vector<double> eps = epsilons;
  std::sort(eps.begin(), eps.end(), std::greater<>());
  for (double e : eps) {
    if (!(e > 0.0)) {
      throw InvalidArgument("epsilon must be positive");
    }
  }
  std::vector<ConvergenceRow> rows(eps.size());
  std::vector<Trajectory> runs(eps.size());
  parallel_for(
      eps.size(),
      [&](std::size_t k) {
        SolverConfig c = cfg;
        c.dx = std::min(opt.dx_max, eps[k] / 8.0);
        if (!trajectories) {
          c.max_snapshots = 2;
        }
        const GridSpec grid = padded_grid(problem.a, problem.b, problem.sup_u0, problem.T, eps[k], c);
        const InitialData1D u0 = problem.setup(grid);
        Trajectory tr;
        if (problem.mode == Mode::Conservative) {
          tr = solve_conservative_nonlocal(u0.grid(), eps[k], problem.T, c);
        } else {
          tr = solve_general(u0, problem.flux, eps[k], problem.T, c, problem.mode);
        }
        const GridFunction1D ref = problem.reference(u0.grid(), grid);
        ConvergenceRow& row = rows[k];
        row.epsilon = eps[k];
        row.dx = c.dx;
        row.dt = tr.dt;
        const Intervals skip =
            problem.tube_factor > 0.0
                ? tubes(find_shocks(ref, problem.shock_drop), problem.tube_factor * eps[k])
                : Intervals{};
        row.error_l1 =
            l1_distance_excluding(tr.final(), ref, problem.window_a, problem.window_b, skip);
        row.error_sup =
            sup_distance_excluding(tr.final(), ref, problem.window_a, problem.window_b, skip);
        row.floor_dominated = row.error_l1 <= problem.floor_l1_per_dx * c.dx;
        runs[k] = std::move(tr);
      },
      opt.threads);

  ConvergenceTable table;
  table.rows = std::move(rows);
  table.metric = opt.metric;
  table.reference = reference_name;
  const std::size_t n = table.rows.size();
  const std::size_t first = n >= 3 ? n - 3 : 0;
  std::vector<double> xs;
  std::vector<double> ys;
  bool floor = false;
  for (std::size_t k = first; k < n; ++k) {
    const auto& r = table.rows[k];
    xs.push_back(r.epsilon);
    ys.push_back(opt.metric == ErrorMetric::L1 ? r.error_l1 : r.error_sup);
    floor = floor || r.floor_dominated;
  }
  table.rate_reported = n >= 2 && !floor;
  table.fitted_rate = table.rate_reported ? log_log_slope(xs, ys) : 0.0;
  if (trajectories) {
    *trajectories = std::move(runs);
  }
  return table;
}

} // namespace nlclaw
