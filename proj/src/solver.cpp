#include "nlclaw/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <limits>

#include "nlclaw/errors.hpp"

namespace nlclaw {

std::string to_string(Mode mode) {
  switch (mode) {
  case Mode::NN:
    return "nn";
  case Mode::Conservative:
    return "conservative";
  case Mode::VelocityReg:
    return "velocity_reg";
  case Mode::FluxReg:
    return "flux_reg";
  }
  return "nn";
}

Mode parse_mode(const std::string& name) {
  if (name == "nn") {
    return Mode::NN;
  }
  if (name == "conservative") {
    return Mode::Conservative;
  }
  if (name == "velocity_reg") {
    return Mode::VelocityReg;
  }
  if (name == "flux_reg") {
    return Mode::FluxReg;
  }
  throw InvalidArgument("unknown mode '" + name + "'");
}

void SolverConfig::validate() const {
  if (!(dx > 0.0) || !std::isfinite(dx)) {
    throw InvalidArgument("dx must be positive");
  }
  if (!(cfl > 0.0) || cfl > 1.0) {
    throw InvalidArgument("cfl must lie in (0, 1]");
  }
  if (!(picard_tol > 0.0)) {
    throw InvalidArgument("picard_tol must be positive");
  }
  if (picard_max_iters < 1) {
    throw InvalidArgument("picard_max_iters must be at least 1");
  }
  if (margin < 0.0) {
    throw InvalidArgument("margin must be nonnegative");
  }
  if (stride == 0 && max_snapshots < 2) {
    throw InvalidArgument("max_snapshots must be at least 2");
  }
  if (fixed_dt < 0.0) {
    throw InvalidArgument("fixed_dt must be nonnegative");
  }
}

std::size_t Trajectory::nearest_index(double t) const {
  std::size_t best = 0;
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (std::abs(times[k] - t) < std::abs(times[best] - t)) {
      best = k;
    }
  }
  return best;
}

GridSpec padded_grid(double a, double b, double sup_u0, double T, double epsilon,
                     const SolverConfig& cfg) {
  const double pad = sup_u0 * T + epsilon + cfg.margin;
  return GridSpec::from_domain(a - pad, b + pad, cfg.dx);
}

namespace {

using VelocityFn = std::function<void(std::span<const double>, std::span<double>)>;

struct StepOutcome {
  int iterations = 0;
  bool ambiguous = false;
};

/// Discrete state of the characteristic scheme at one time level.
struct MapState {
  std::vector<double> Y; // backward map to time zero, per node
  std::vector<double> u;
  std::vector<double> v;
  std::vector<double> X; // positions of the tracked breakpoints of u0
};

double pchip(const std::vector<double>& f, const GridSpec& g, double x, Extension ext) {
  return interpolate_monotone_cubic(f, g.x0, g.dx, x, ext);
}

/// Advances a MapState by one step of size dt. Node values are always
/// u0-pieces evaluated at the interpolated map, and the side of every tracked
/// breakpoint decides which piece applies, so jumps of u0 stay sharp and move
/// with their own characteristic.
class MapStepper {
public:
  MapStepper(const GridSpec& g, const InitialData1D& u0, VelocityFn vel, const SolverConfig& cfg)
      : g_(g), u0_(u0), vel_(std::move(vel)), cfg_(cfg), foot_(g.n), next_(g.n), ynew_(g.n),
        unew_(g.n), uprev_(g.n), uprev2_(g.n), w_(g.n), wprev_(g.n), vn_at_(g.n) {}

  MapState initial_state() const {
    MapState s;
    s.Y.resize(g_.n);
    s.u.resize(g_.n);
    for (std::size_t i = 0; i < g_.n; ++i) {
      s.Y[i] = g_.x(i);
      s.u[i] = u0_.grid()[i];
    }
    s.v.resize(g_.n);
    vel_(s.u, s.v);
    s.X = u0_.breakpoints();
    return s;
  }

  // Node values with each tracked jump resolved to its one-sided limits: the
  // nodes straddling a front take the end values of their pieces. The layer
  // between them is thinner than a cell, so plain samples can miss its range.
  std::vector<double> presented(const MapState& s) const {
    std::vector<double> u = s.u;
    const auto& bp = u0_.breakpoints();
    const std::size_t nf = s.X.size();
    for (std::size_t m = 0; m < nf; ++m) {
      const double left = u0_.piece(m, bp[m]);
      const double right = u0_.piece(m + 1, bp[m]);
      if (!(std::abs(left - right) > 1e-12 * (1.0 + std::abs(left) + std::abs(right)))) {
        continue;
      }
      const double pos = std::floor((s.X[m] - g_.x0) / g_.dx);
      if (pos < 0.0 || pos + 1.0 >= static_cast<double>(g_.n)) {
        continue;
      }
      const auto i = static_cast<std::size_t>(pos);
      if (m == 0 || g_.x(i) > s.X[m - 1]) {
        u[i] = left;
      }
      if (m + 1 == nf || g_.x(i + 1) <= s.X[m + 1]) {
        u[i + 1] = right;
      }
    }
    return u;
  }

  StepOutcome step(MapState& s, double dt) {
    const std::size_t n = g_.n;
    const std::size_t nf = s.X.size();
    for (std::size_t i = 0; i < n; ++i) {
      foot_[i] = g_.x(i) - dt * s.v[i];
    }
    vX_.resize(nf);
    xnew_.resize(nf);
    xnext_.resize(nf);
    for (std::size_t m = 0; m < nf; ++m) {
      vX_[m] = pchip(s.v, g_, s.X[m], Extension::Constant);
      xnew_[m] = s.X[m] + dt * vX_[m];
    }
    order(xnew_);
    uprev_ = s.u;
    bool have_prev2 = false;
    for (int it = 1; it <= cfg_.picard_max_iters; ++it) {
      evaluate(s);
      vel_(unew_, w_);
      advance_positions(s, dt, w_);
      double du = 0.0;
      double df = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        du = std::max(du, std::abs(unew_[i] - uprev_[i]));
        df = std::max(df, std::abs(next_[i] - foot_[i]));
      }
      for (std::size_t m = 0; m < nf; ++m) {
        df = std::max(df, std::abs(xnext_[m] - xnew_[m]));
      }
      if (!std::isfinite(du) || !std::isfinite(df)) {
        throw PicardDivergence("fixed-point iteration produced non-finite values");
      }
      if (du <= cfg_.picard_tol && df <= cfg_.picard_tol) {
        accept(s);
        return {it, false};
      }
      if (have_prev2 && du > 0.0 && std::equal(unew_.begin(), unew_.end(), uprev2_.begin())) {
        return settle_cycle(s, dt, it);
      }
      uprev2_ = uprev_;
      uprev_ = unew_;
      wprev_ = w_;
      have_prev2 = it >= 2;
      foot_.swap(next_);
      xnew_.swap(xnext_);
    }
    throw PicardDivergence("fixed-point iteration did not converge in " +
                           std::to_string(cfg_.picard_max_iters) + " iterations");
  }

private:
  static void order(std::vector<double>& x) {
    for (std::size_t m = 1; m < x.size(); ++m) {
      x[m] = std::max(x[m], x[m - 1]);
    }
  }

  // Node values for the current feet and breakpoint positions.
  void evaluate(const MapState& s) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < g_.n; ++i) {
      const double x = g_.x(i);
      while (k < xnew_.size() && xnew_[k] < x) {
        ++k;
      }
      double y;
      pchip_pair(s.Y, s.v, foot_[i], y, vn_at_[i]);
      ynew_[i] = u0_.clamp_to_piece(k, y);
      unew_[i] = u0_.piece(k, ynew_[i]);
    }
  }

  // Map (unit-slope extension) and velocity (constant extension) at the same
  // point, sharing the cell lookup.
  void pchip_pair(const std::vector<double>& Y, const std::vector<double>& v, double x, double& y,
                  double& vel) const {
    const double s = (x - g_.x0) / g_.dx;
    if (s >= 1.0 && s < static_cast<double>(g_.n - 2)) {
      const auto i = static_cast<std::size_t>(s);
      const double t = s - static_cast<double>(i);
      y = monotone_cubic_segment(Y[i - 1], Y[i], Y[i + 1], Y[i + 2], t);
      vel = monotone_cubic_segment(v[i - 1], v[i], v[i + 1], v[i + 2], t);
      return;
    }
    y = pchip(Y, g_, x, Extension::UnitSlope);
    vel = pchip(v, g_, x, Extension::Constant);
  }

  // Trapezoidal updates of the feet (backwards) and the breakpoints (forwards).
  void advance_positions(const MapState& s, double dt, const std::vector<double>& w) {
    for (std::size_t i = 0; i < g_.n; ++i) {
      next_[i] = g_.x(i) - 0.5 * dt * (w[i] + vn_at_[i]);
    }
    for (std::size_t m = 0; m < xnew_.size(); ++m) {
      xnext_[m] = s.X[m] + 0.5 * dt * (vX_[m] + pchip(w, g_, xnew_[m], Extension::Constant));
    }
    order(xnext_);
  }

  void accept(MapState& s) {
    s.Y = ynew_;
    s.u = unew_;
    s.v = w_;
    s.X = xnew_;
  }

  // The discrete state alternates between two configurations: a node next to
  // an expansive jump flips with the velocity it induces. Average the two
  // velocities and settle the positions against that frozen field.
  StepOutcome settle_cycle(MapState& s, double dt, int it) {
    std::vector<double> wavg(g_.n);
    for (std::size_t i = 0; i < g_.n; ++i) {
      wavg[i] = 0.5 * (w_[i] + wprev_[i]);
    }
    for (int k = 0; k < cfg_.picard_max_iters; ++k) {
      evaluate(s);
      advance_positions(s, dt, wavg);
      double df = 0.0;
      for (std::size_t i = 0; i < g_.n; ++i) {
        df = std::max(df, std::abs(next_[i] - foot_[i]));
      }
      for (std::size_t m = 0; m < xnew_.size(); ++m) {
        df = std::max(df, std::abs(xnext_[m] - xnew_[m]));
      }
      foot_.swap(next_);
      xnew_.swap(xnext_);
      if (df <= cfg_.picard_tol) {
        break;
      }
    }
    evaluate(s);
    vel_(unew_, w_);
    accept(s);
    return {it, true};
  }

  GridSpec g_;
  const InitialData1D& u0_;
  VelocityFn vel_;
  const SolverConfig& cfg_;
  std::vector<double> foot_, next_, ynew_, unew_, uprev_, uprev2_, w_, wprev_, vn_at_;
  std::vector<double> vX_, xnew_, xnext_;
};

void record_step(Trajectory& tr, std::span<const double> u, const GridSpec& g) {
  double tv = 0.0;
  double lo = u[0];
  double hi = u[0];
  for (std::size_t i = 1; i < u.size(); ++i) {
    tv += std::abs(u[i] - u[i - 1]);
    lo = std::min(lo, u[i]);
    hi = std::max(hi, u[i]);
  }
  (void)g;
  tr.step_tv.push_back(tv);
  tr.step_min.push_back(lo);
  tr.step_max.push_back(hi);
}

std::size_t pick_stride(const SolverConfig& cfg, std::size_t steps) {
  if (cfg.stride > 0) {
    return cfg.stride;
  }
  const std::size_t slots = cfg.max_snapshots - 1;
  return std::max<std::size_t>(1, (steps + slots - 1) / slots);
}

double choose_dt(double speed, double dx, const SolverConfig& cfg) {
  const double limit = cfg.cfl * dx / std::max(speed, 1e-12);
  if (cfg.fixed_dt > 0.0) {
    if (cfg.fixed_dt > limit * (1.0 + 1e-12)) {
      throw CflViolation("fixed time step exceeds the CFL bound");
    }
    return cfg.fixed_dt;
  }
  return limit;
}

Trajectory run_map_scheme(const InitialData1D& u0, VelocityFn vel, double speed, double epsilon,
                          double T, const SolverConfig& cfg, Mode mode) {
  if (!(T >= 0.0) || !std::isfinite(T)) {
    throw InvalidArgument("final time must be finite and nonnegative");
  }
  const GridSpec g = u0.grid().spec();
  Trajectory tr;
  tr.epsilon = epsilon;
  tr.mode = mode;
  tr.dt = choose_dt(speed, g.dx, cfg);
  const std::size_t steps =
      T > 0.0 ? static_cast<std::size_t>(std::ceil(T / tr.dt - 1e-9)) : std::size_t{0};
  const std::size_t stride = pick_stride(cfg, steps);

  MapStepper stepper(g, u0, std::move(vel), cfg);
  MapState s = stepper.initial_state();
  tr.times.push_back(0.0);
  std::vector<double> shown = stepper.presented(s);
  tr.states.emplace_back(g, shown);
  record_step(tr, shown, g);

  for (std::size_t k = 1; k <= steps; ++k) {
    const double t_prev = static_cast<double>(k - 1) * tr.dt;
    const double t = k == steps ? T : static_cast<double>(k) * tr.dt;
    const StepOutcome out = stepper.step(s, t - t_prev);
    tr.picard_iterations.push_back(out.iterations);
    if (out.ambiguous) {
      ++tr.ambiguous_steps;
    }
    shown = stepper.presented(s);
    record_step(tr, shown, g);
    if (k % stride == 0 || k == steps) {
      tr.times.push_back(t);
      tr.states.emplace_back(g, shown);
    }
  }
  return tr;
}

void check_grid(const Mollifier& m, double dx) {
  if (std::abs(m.dx() - dx) > 1e-12 * dx) {
    throw GridMismatch("mollifier was built for a different grid spacing");
  }
}

} // namespace

GridFunction1D step_nn(const GridFunction1D& u_n, const Mollifier& m, double dt,
                       const SolverConfig& cfg, int* iterations) {
  check_grid(m, u_n.dx());
  const double speed = sup_norm(u_n);
  if (dt * speed > cfg.cfl * u_n.dx() * (1.0 + 1e-12)) {
    throw CflViolation("time step exceeds the CFL bound");
  }
  const InitialData1D data(u_n);
  MapStepper stepper(
      u_n.spec(), data,
      [&m](std::span<const double> in, std::span<double> out) { convolve_into(m, in, out); }, cfg);
  MapState s = stepper.initial_state();
  const StepOutcome out = stepper.step(s, dt);
  if (iterations != nullptr) {
    *iterations = out.iterations;
  }
  return {u_n.spec(), std::move(s.u)};
}

Trajectory solve_nn(const InitialData1D& u0, double epsilon, double T, const SolverConfig& cfg,
                    double orientation) {
  cfg.validate();
  const GridFunction1D& g0 = u0.grid();
  const Mollifier m = build_mollifier(epsilon, g0.dx());
  check_grid(m, cfg.dx);
  VelocityFn vel;
  if (orientation == 1.0) {
    vel = [m](std::span<const double> in, std::span<double> out) { convolve_into(m, in, out); };
  } else {
    vel = [m, orientation](std::span<const double> in, std::span<double> out) {
      convolve_into(m, in, out);
      for (double& x : out) {
        x *= orientation;
      }
    };
  }
  const double speed = sup_norm(g0) * std::abs(orientation);
  return run_map_scheme(u0, vel, speed, epsilon, T, cfg, Mode::NN);
}

Trajectory solve_general(const InitialData1D& u0, const FluxSpec& flux, double epsilon, double T,
                         const SolverConfig& cfg, Mode mode) {
  if (mode == Mode::NN) {
    return solve_nn(u0, epsilon, T, cfg);
  }
  if (mode == Mode::Conservative) {
    throw InvalidArgument("solve_general does not handle the conservative mode");
  }
  cfg.validate();
  const GridFunction1D& g0 = u0.grid();
  const Mollifier m = build_mollifier(epsilon, g0.dx());
  check_grid(m, cfg.dx);
  const FluxSpec f = flux.on_range(g0.min(), g0.max());
  const ScalarFn fp = f.fprime_fn();
  VelocityFn vel;
  if (mode == Mode::VelocityReg) {
    vel = [m, fp](std::span<const double> in, std::span<double> out) {
      std::vector<double> g(in.size());
      for (std::size_t i = 0; i < in.size(); ++i) {
        g[i] = fp(in[i]);
      }
      convolve_into(m, g, out);
    };
  } else {
    vel = [m, fp](std::span<const double> in, std::span<double> out) {
      convolve_into(m, in, out);
      for (double& x : out) {
        x = fp(x);
      }
    };
  }
  return run_map_scheme(u0, vel, f.max_speed(), epsilon, T, cfg, mode);
}

Trajectory solve_conservative_nonlocal(const GridFunction1D& u0, double epsilon, double T,
                                       const SolverConfig& cfg) {
  cfg.validate();
  if (!(T >= 0.0) || !std::isfinite(T)) {
    throw InvalidArgument("final time must be finite and nonnegative");
  }
  const Mollifier m = build_mollifier(epsilon, u0.dx());
  const GridSpec g = u0.spec();
  const std::size_t n = g.n;
  const double dx = g.dx;
  Trajectory tr;
  tr.epsilon = epsilon;
  tr.mode = Mode::Conservative;
  const double dt0 = cfg.fixed_dt > 0.0 ? cfg.fixed_dt
                                        : cfg.cfl * dx / std::max(sup_norm(u0), 1e-12);
  tr.dt = dt0;
  const double store_every = cfg.stride > 0 ? 0.0 : T / static_cast<double>(cfg.max_snapshots - 1);

  std::vector<double> u(u0.values().begin(), u0.values().end());
  std::vector<double> v(n);
  std::vector<double> flux(n + 1);
  tr.times.push_back(0.0);
  tr.states.emplace_back(g, u);
  record_step(tr, u, g);

  double t = 0.0;
  double next_store = store_every;
  std::size_t k = 0;
  while (t < T) {
    convolve_into(m, u, v);
    double vmax = 0.0;
    for (double x : v) {
      vmax = std::max(vmax, std::abs(x));
    }
    if (!std::isfinite(vmax)) {
      throw CflViolation("velocity became non-finite");
    }
    double dt = std::min(dt0, cfg.cfl * dx / std::max(vmax, 1e-12));
    if (t + dt >= T * (1.0 - 1e-12)) {
      dt = T - t;
    }
    if (dt < 1e-14 * std::max(T, 1.0)) {
      throw CflViolation("time step collapsed");
    }
    // Interface velocities; the ghost cells repeat the end values.
    for (std::size_t i = 0; i <= n; ++i) {
      const std::size_t l = i == 0 ? 0 : i - 1;
      const std::size_t r = i == n ? n - 1 : i;
      const double a = 0.5 * (v[l] + v[r]);
      flux[i] = a > 0.0 ? a * u[l] : a * u[r];
    }
    for (std::size_t i = 0; i < n; ++i) {
      u[i] -= dt / dx * (flux[i + 1] - flux[i]);
    }
    t = (dt == T - t) ? T : t + dt;
    ++k;
    record_step(tr, u, g);
    const bool store = cfg.stride > 0 ? (k % cfg.stride == 0) : (t >= next_store - 1e-15);
    if (store || t >= T) {
      tr.times.push_back(t);
      tr.states.emplace_back(g, u);
      while (next_store <= t + 1e-15) {
        next_store += store_every > 0.0 ? store_every : T + 1.0;
      }
    }
  }
  return tr;
}

CharacteristicTracer::CharacteristicTracer(const Trajectory& traj, const Mollifier& m)
    : times_(traj.times), x0_(traj.initial().x0()), dx_(traj.initial().dx()) {
  check_grid(m, dx_);
  velocities_.reserve(traj.states.size());
  for (const auto& s : traj.states) {
    std::vector<double> v(s.size());
    convolve_into(m, s.values(), v);
    velocities_.push_back(std::move(v));
  }
}

double CharacteristicTracer::velocity(double s, double y) const {
  const auto it = std::upper_bound(times_.begin(), times_.end(), s);
  std::size_t k = it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
  if (k + 1 >= times_.size()) {
    return interpolate_monotone_cubic(velocities_.back(), x0_, dx_, y, Extension::Constant);
  }
  const double span = times_[k + 1] - times_[k];
  const double theta = span > 0.0 ? std::clamp((s - times_[k]) / span, 0.0, 1.0) : 0.0;
  const double a = interpolate_monotone_cubic(velocities_[k], x0_, dx_, y, Extension::Constant);
  const double b =
      interpolate_monotone_cubic(velocities_[k + 1], x0_, dx_, y, Extension::Constant);
  return (1.0 - theta) * a + theta * b;
}

double CharacteristicTracer::foot_at_zero(double t, double x, std::size_t substeps) const {
  if (substeps == 0) {
    substeps = std::max<std::size_t>(200, times_.size());
  }
  const double h = t / static_cast<double>(substeps);
  double y = x;
  double s = t;
  for (std::size_t k = 0; k < substeps; ++k) {
    const double ym = y - 0.5 * h * velocity(s, y);
    y -= h * velocity(s - 0.5 * h, ym);
    s -= h;
  }
  return y;
}

double backward_characteristic(const Trajectory& traj, const Mollifier& m, double t, double x) {
  return CharacteristicTracer(traj, m).foot_at_zero(t, x);
}

} // namespace nlclaw
