#include "nlclaw/multidim.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "nlclaw/errors.hpp"
#include "nlclaw/kernel.hpp"

namespace nlclaw {

GridSpec2D GridSpec2D::from_domain(double ax, double bx, double ay, double by, double dx,
                                   double dy) {
  const GridSpec gx = GridSpec::from_domain(ax, bx, dx);
  const GridSpec gy = GridSpec::from_domain(ay, by, dy);
  return {gx.x0, gy.x0, gx.dx, gy.dx, gx.n, gy.n};
}

GridFunction2D::GridFunction2D(const GridSpec2D& spec, std::vector<double> values)
    : spec_(spec), values_(std::move(values)) {
  if (!(spec_.dx > 0.0) || !(spec_.dy > 0.0) || !std::isfinite(spec_.dx) ||
      !std::isfinite(spec_.dy)) {
    throw InvalidArgument("grid spacings must be positive");
  }
  if (spec_.nx < 2 || spec_.ny < 2) {
    throw InvalidArgument("2D grid needs at least two nodes per direction");
  }
  if (values_.size() != spec_.size()) {
    throw GridMismatch("value count does not match grid size");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw InvalidArgument("grid function values must be finite");
    }
  }
}

GridFunction2D::GridFunction2D(const GridSpec2D& spec, double constant)
    : GridFunction2D(spec, std::vector<double>(spec.size(), constant)) {}

double GridFunction2D::min() const { return *std::min_element(values_.begin(), values_.end()); }
double GridFunction2D::max() const { return *std::max_element(values_.begin(), values_.end()); }

GridFunction1D GridFunction2D::row(std::size_t j) const {
  const auto first = values_.begin() + static_cast<std::ptrdiff_t>(j * spec_.nx);
  return {spec_.x_axis(), std::vector<double>(first, first + static_cast<std::ptrdiff_t>(spec_.nx))};
}

bool GridFunction2D::same_grid(const GridFunction2D& other) const {
  const auto& a = spec_;
  const auto& b = other.spec_;
  const auto close = [](double p, double q, double scale) {
    return std::abs(p - q) <= 1e-12 * std::max(1.0, std::abs(scale));
  };
  return a.nx == b.nx && a.ny == b.ny && close(a.dx, b.dx, a.dx) && close(a.dy, b.dy, a.dy) &&
         close(a.x0, b.x0, a.x0) && close(a.y0, b.y0, a.y0);
}

GridFunction2D sample(const ScalarFn2& f, const GridSpec2D& grid) {
  std::vector<double> v(grid.size());
  for (std::size_t j = 0; j < grid.ny; ++j) {
    for (std::size_t i = 0; i < grid.nx; ++i) {
      v[j * grid.nx + i] = f(grid.x(i), grid.y(j));
    }
  }
  return {grid, std::move(v)};
}

double tv_2d(const GridFunction2D& u) {
  const std::size_t nx = u.nx();
  const std::size_t ny = u.ny();
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i + 1 < nx; ++i) {
      sx += std::abs(u(i + 1, j) - u(i, j));
    }
  }
  for (std::size_t j = 0; j + 1 < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      sy += std::abs(u(i, j + 1) - u(i, j));
    }
  }
  return sx * u.dy() + sy * u.dx();
}

double InitialData2D::operator()(double x, double y) const {
  const GridSpec2D& g = samples.spec();
  x = std::clamp(x, g.x0, g.x(g.nx - 1));
  y = std::clamp(y, g.y0, g.y(g.ny - 1));
  if (exact) {
    return exact(x, y);
  }
  const double sx = std::min((x - g.x0) / g.dx, static_cast<double>(g.nx - 1));
  const double sy = std::min((y - g.y0) / g.dy, static_cast<double>(g.ny - 1));
  const auto i = std::min(static_cast<std::size_t>(sx), g.nx - 2);
  const auto j = std::min(static_cast<std::size_t>(sy), g.ny - 2);
  const double tx = sx - static_cast<double>(i);
  const double ty = sy - static_cast<double>(j);
  const double a = samples(i, j) + tx * (samples(i + 1, j) - samples(i, j));
  const double b = samples(i, j + 1) + tx * (samples(i + 1, j + 1) - samples(i, j + 1));
  const double r = a + ty * (b - a);
  const double lo = std::min({samples(i, j), samples(i + 1, j), samples(i, j + 1), samples(i + 1, j + 1)});
  const double hi = std::max({samples(i, j), samples(i + 1, j), samples(i, j + 1), samples(i + 1, j + 1)});
  return std::clamp(r, lo, hi);
}

namespace {

struct Fields {
  std::vector<double> Y1, Y2, u, v1, v2;
};

/// Separable monotone cubic interpolation of a row-major field, averaged over
/// the two orders (x then y, y then x) so the result is symmetric in the axes.
class Interp2 {
public:
  explicit Interp2(const GridSpec2D& g) : g_(g) {}

  double operator()(const std::vector<double>& f, double x, double y, Extension ex,
                    Extension ey) {
    const double sx = (x - g_.x0) / g_.dx;
    const double sy = (y - g_.y0) / g_.dy;
    const std::size_t nx = g_.nx;
    if (sx >= 1.0 && sx < static_cast<double>(nx - 2) && sy >= 1.0 &&
        sy < static_cast<double>(g_.ny - 2)) {
      const auto i = static_cast<std::size_t>(sx);
      const auto j = static_cast<std::size_t>(sy);
      const double tx = sx - static_cast<double>(i);
      const double ty = sy - static_cast<double>(j);
      const double* p = f.data() + (j - 1) * nx + (i - 1);
      double r[4];
      double c[4];
      for (std::size_t k = 0; k < 4; ++k) {
        const double* row = p + k * nx;
        r[k] = monotone_cubic_segment(row[0], row[1], row[2], row[3], tx);
        c[k] = monotone_cubic_segment(p[k], p[nx + k], p[2 * nx + k], p[3 * nx + k], ty);
      }
      return 0.5 * (monotone_cubic_segment(r[0], r[1], r[2], r[3], ty) +
                    monotone_cubic_segment(c[0], c[1], c[2], c[3], tx));
    }
    // Near the boundary: the cubic stencil reaches two cells either way, so a
    // window of at most six nodes per direction reproduces the full-line result.
    const auto [ia, ib] = window(sx, nx);
    const auto [ja, jb] = window(sy, g_.ny);
    const double xa = g_.x0 + static_cast<double>(ia) * g_.dx;
    const double ya = g_.y0 + static_cast<double>(ja) * g_.dy;
    std::array<double, 6> line{};
    std::array<double, 6> outer{};
    for (std::size_t j = ja; j <= jb; ++j) {
      for (std::size_t i = ia; i <= ib; ++i) {
        line[i - ia] = f[j * nx + i];
      }
      outer[j - ja] = interpolate_monotone_cubic(std::span(line.data(), ib - ia + 1), xa, g_.dx, x, ex);
    }
    const double xy = interpolate_monotone_cubic(std::span(outer.data(), jb - ja + 1), ya, g_.dy, y, ey);
    for (std::size_t i = ia; i <= ib; ++i) {
      for (std::size_t j = ja; j <= jb; ++j) {
        line[j - ja] = f[j * nx + i];
      }
      outer[i - ia] = interpolate_monotone_cubic(std::span(line.data(), jb - ja + 1), ya, g_.dy, y, ey);
    }
    const double yx = interpolate_monotone_cubic(std::span(outer.data(), ib - ia + 1), xa, g_.dx, x, ex);
    return 0.5 * (xy + yx);
  }

private:
  static std::pair<std::size_t, std::size_t> window(double s, std::size_t n) {
    const double c = std::clamp(std::floor(s), 0.0, static_cast<double>(n - 2));
    const auto k = static_cast<std::size_t>(c);
    return {k >= 2 ? k - 2 : 0, std::min(n - 1, k + 3)};
  }

  GridSpec2D g_;
};

class MapStepper2D {
public:
  using Velocity = std::function<void(const std::vector<double>&, std::vector<double>&,
                                      std::vector<double>&)>;

  MapStepper2D(const GridSpec2D& g, const InitialData2D& u0, Velocity vel,
               const SolverConfig& cfg)
      : g_(g), u0_(u0), vel_(std::move(vel)), cfg_(cfg), interp_(g) {
    const std::size_t n = g.size();
    for (auto* v : {&f1_, &f2_, &n1_, &n2_, &y1_, &y2_, &unew_, &uprev_, &uprev2_, &w1_, &w2_,
                    &wp1_, &wp2_, &a1_, &a2_}) {
      v->assign(n, 0.0);
    }
  }

  Fields initial_state() {
    Fields s;
    const std::size_t n = g_.size();
    s.Y1.resize(n);
    s.Y2.resize(n);
    s.u.assign(u0_.samples.values().begin(), u0_.samples.values().end());
    for (std::size_t j = 0; j < g_.ny; ++j) {
      for (std::size_t i = 0; i < g_.nx; ++i) {
        s.Y1[j * g_.nx + i] = g_.x(i);
        s.Y2[j * g_.nx + i] = g_.y(j);
      }
    }
    s.v1.resize(n);
    s.v2.resize(n);
    vel_(s.u, s.v1, s.v2);
    return s;
  }

  std::pair<int, bool> step(Fields& s, double dt) {
    const std::size_t n = g_.size();
    for (std::size_t j = 0; j < g_.ny; ++j) {
      for (std::size_t i = 0; i < g_.nx; ++i) {
        const std::size_t q = j * g_.nx + i;
        f1_[q] = g_.x(i) - dt * s.v1[q];
        f2_[q] = g_.y(j) - dt * s.v2[q];
      }
    }
    uprev_ = s.u;
    bool have_prev2 = false;
    for (int it = 1; it <= cfg_.picard_max_iters; ++it) {
      evaluate(s);
      vel_(unew_, w1_, w2_);
      advance(dt, w1_, w2_);
      double du = 0.0;
      double df = 0.0;
      for (std::size_t q = 0; q < n; ++q) {
        du = std::max(du, std::abs(unew_[q] - uprev_[q]));
        df = std::max({df, std::abs(n1_[q] - f1_[q]), std::abs(n2_[q] - f2_[q])});
      }
      if (!std::isfinite(du) || !std::isfinite(df)) {
        throw PicardDivergence("fixed-point iteration produced non-finite values");
      }
      if (du <= cfg_.picard_tol && df <= cfg_.picard_tol) {
        accept(s);
        return {it, false};
      }
      if (have_prev2 && du > 0.0 && std::equal(unew_.begin(), unew_.end(), uprev2_.begin())) {
        settle(s, dt);
        return {it, true};
      }
      uprev2_ = uprev_;
      uprev_ = unew_;
      wp1_ = w1_;
      wp2_ = w2_;
      have_prev2 = it >= 2;
      f1_.swap(n1_);
      f2_.swap(n2_);
    }
    throw PicardDivergence("fixed-point iteration did not converge in " +
                           std::to_string(cfg_.picard_max_iters) + " iterations");
  }

private:
  void evaluate(const Fields& s) {
    for (std::size_t q = 0; q < g_.size(); ++q) {
      const double x = f1_[q];
      const double y = f2_[q];
      y1_[q] = interp_(s.Y1, x, y, Extension::UnitSlope, Extension::Constant);
      y2_[q] = interp_(s.Y2, x, y, Extension::Constant, Extension::UnitSlope);
      a1_[q] = interp_(s.v1, x, y, Extension::Constant, Extension::Constant);
      a2_[q] = interp_(s.v2, x, y, Extension::Constant, Extension::Constant);
      unew_[q] = u0_(y1_[q], y2_[q]);
    }
  }

  void advance(double dt, const std::vector<double>& w1, const std::vector<double>& w2) {
    for (std::size_t j = 0; j < g_.ny; ++j) {
      for (std::size_t i = 0; i < g_.nx; ++i) {
        const std::size_t q = j * g_.nx + i;
        n1_[q] = g_.x(i) - 0.5 * dt * (w1[q] + a1_[q]);
        n2_[q] = g_.y(j) - 0.5 * dt * (w2[q] + a2_[q]);
      }
    }
  }

  void accept(Fields& s) {
    s.Y1 = y1_;
    s.Y2 = y2_;
    s.u = unew_;
    s.v1 = w1_;
    s.v2 = w2_;
  }

  // Two-cycle between discrete states: freeze the averaged velocity.
  void settle(Fields& s, double dt) {
    std::vector<double> m1(g_.size());
    std::vector<double> m2(g_.size());
    for (std::size_t q = 0; q < g_.size(); ++q) {
      m1[q] = 0.5 * (w1_[q] + wp1_[q]);
      m2[q] = 0.5 * (w2_[q] + wp2_[q]);
    }
    for (int k = 0; k < cfg_.picard_max_iters; ++k) {
      evaluate(s);
      advance(dt, m1, m2);
      double df = 0.0;
      for (std::size_t q = 0; q < g_.size(); ++q) {
        df = std::max({df, std::abs(n1_[q] - f1_[q]), std::abs(n2_[q] - f2_[q])});
      }
      f1_.swap(n1_);
      f2_.swap(n2_);
      if (df <= cfg_.picard_tol) {
        break;
      }
    }
    evaluate(s);
    vel_(unew_, w1_, w2_);
    accept(s);
  }

  GridSpec2D g_;
  const InitialData2D& u0_;
  Velocity vel_;
  const SolverConfig& cfg_;
  Interp2 interp_;
  std::vector<double> f1_, f2_, n1_, n2_, y1_, y2_, unew_, uprev_, uprev2_, w1_, w2_, wp1_, wp2_,
      a1_, a2_;
};

void record(Trajectory2D& tr, const GridFunction2D& u) {
  tr.step_tv.push_back(tv_2d(u));
  tr.step_min.push_back(u.min());
  tr.step_max.push_back(u.max());
}

} // namespace

Trajectory2D solve_velocity_reg_2d(const InitialData2D& u0, const FluxSpec& f1,
                                   const FluxSpec& f2, double epsilon, double T,
                                   const SolverConfig& cfg) {
  cfg.validate();
  if (!(T >= 0.0) || !std::isfinite(T)) {
    throw InvalidArgument("final time must be finite and nonnegative");
  }
  const GridSpec2D g = u0.samples.spec();
  if (std::abs(cfg.dx - g.dx) > 1e-12 * g.dx) {
    throw GridMismatch("configured dx differs from the grid spacing");
  }
  const Mollifier mx = build_mollifier(epsilon, g.dx);
  const Mollifier my = build_mollifier(epsilon, g.dy);
  const double lo = u0.samples.min();
  const double hi = u0.samples.max();
  const FluxSpec p1 = f1.on_range(lo, hi);
  const FluxSpec p2 = f2.on_range(lo, hi);
  const ScalarFn d1 = p1.fprime_fn();
  const ScalarFn d2 = p2.fprime_fn();
  const std::size_t nx = g.nx;
  const std::size_t ny = g.ny;

  std::vector<double> tmp(g.size());
  std::vector<double> tmp2(g.size());
  const auto smooth = [&](const ScalarFn& d, const std::vector<double>& u, std::vector<double>& out) {
    for (std::size_t q = 0; q < u.size(); ++q) {
      tmp[q] = d(u[q]);
    }
    convolve_axis_into(mx, tmp, tmp2, nx, ny, 0);
    convolve_axis_into(my, tmp2, out, nx, ny, 1);
  };
  MapStepper2D::Velocity vel = [&](const std::vector<double>& u, std::vector<double>& v1,
                                   std::vector<double>& v2) {
    smooth(d1, u, v1);
    smooth(d2, u, v2);
  };

  const double s1 = p1.max_speed();
  const double s2 = p2.max_speed();
  double limit;
  if (s2 == 0.0) {
    limit = cfg.cfl * g.dx / std::max(s1, 1e-12);
  } else if (s1 == 0.0) {
    limit = cfg.cfl * g.dy / s2;
  } else {
    limit = cfg.cfl / (s1 / g.dx + s2 / g.dy);
  }
  Trajectory2D tr;
  tr.epsilon = epsilon;
  if (cfg.fixed_dt > 0.0) {
    if (cfg.fixed_dt > limit * (1.0 + 1e-12)) {
      throw CflViolation("fixed time step exceeds the CFL bound");
    }
    tr.dt = cfg.fixed_dt;
  } else {
    tr.dt = limit;
  }
  const std::size_t steps =
      T > 0.0 ? static_cast<std::size_t>(std::ceil(T / tr.dt - 1e-9)) : std::size_t{0};
  const std::size_t stride =
      cfg.stride > 0 ? cfg.stride
                     : std::max<std::size_t>(1, (steps + cfg.max_snapshots - 2) / (cfg.max_snapshots - 1));

  MapStepper2D stepper(g, u0, vel, cfg);
  Fields s = stepper.initial_state();
  tr.times.push_back(0.0);
  tr.states.push_back(u0.samples);
  record(tr, u0.samples);
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t_prev = static_cast<double>(k - 1) * tr.dt;
    const double t = k == steps ? T : static_cast<double>(k) * tr.dt;
    const auto [iters, ambiguous] = stepper.step(s, t - t_prev);
    tr.picard_iterations.push_back(iters);
    tr.ambiguous_steps += ambiguous ? 1 : 0;
    GridFunction2D state(g, s.u);
    record(tr, state);
    if (k % stride == 0 || k == steps) {
      tr.times.push_back(t);
      tr.states.push_back(std::move(state));
    }
  }
  return tr;
}

} // namespace nlclaw
