#include "nlclaw/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlclaw/errors.hpp"

namespace nlclaw {

double burgers_riemann_exact(const RiemannData& d, double xi) {
  if (d.uL > d.uR) {
    const double sigma = 0.5 * (d.uL + d.uR);
    return xi < sigma ? d.uL : d.uR;
  }
  if (xi < d.uL) {
    return d.uL;
  }
  if (xi > d.uR) {
    return d.uR;
  }
  return xi;
}

namespace {

struct Candidate {
  double phi;
  double y;
};

class LaxOleinik {
public:
  LaxOleinik(const GridFunction1D& u0, double t) : u_(u0.values()), y0_(u0.x0()), h_(u0.dx()), t_(t) {
    U_.resize(u_.size());
    U_[0] = 0.0;
    for (std::size_t k = 1; k < u_.size(); ++k) {
      U_[k] = U_[k - 1] + 0.5 * h_ * (u_[k - 1] + u_[k]);
    }
  }

  // Candidate index c: 0 is the left extension, 1..n-1 are cells, n is the
  // right extension.
  std::size_t candidates() const { return u_.size() + 1; }

  Candidate best_in(std::size_t c, double x) const {
    const std::size_t n = u_.size();
    if (c == 0) {
      const double y = std::min(x - t_ * u_[0], y0_);
      return {U_[0] + u_[0] * (y - y0_) + sq(x - y) / (2.0 * t_), y};
    }
    if (c == n) {
      const double yl = y0_ + static_cast<double>(n - 1) * h_;
      const double y = std::max(x - t_ * u_[n - 1], yl);
      return {U_[n - 1] + u_[n - 1] * (y - yl) + sq(x - y) / (2.0 * t_), y};
    }
    const std::size_t k = c - 1;
    const double yk = y0_ + static_cast<double>(k) * h_;
    const double m = (u_[k + 1] - u_[k]) / h_;
    const auto phi = [&](double s) {
      return U_[k] + u_[k] * s + 0.5 * m * s * s + sq(x - yk - s) / (2.0 * t_);
    };
    const double curv = m + 1.0 / t_;
    if (curv > 0.0) {
      const double s = std::clamp(((x - yk) / t_ - u_[k]) / curv, 0.0, h_);
      return {phi(s), yk + s};
    }
    const double a = phi(0.0);
    const double b = phi(h_);
    return b < a ? Candidate{b, yk + h_} : Candidate{a, yk};
  }

private:
  static double sq(double v) { return v * v; }

  std::span<const double> u_;
  double y0_;
  double h_;
  double t_;
  std::vector<double> U_;
};

void solve_range(const LaxOleinik& lo, const GridSpec& g, std::ptrdiff_t a, std::ptrdiff_t b,
                 std::size_t ca, std::size_t cb, std::vector<double>& ystar,
                 std::vector<std::size_t>& cstar) {
  if (a > b) {
    return;
  }
  const std::ptrdiff_t mid = a + (b - a) / 2;
  const double x = g.x(static_cast<std::size_t>(mid));
  Candidate best{std::numeric_limits<double>::infinity(), 0.0};
  std::size_t bc = ca;
  for (std::size_t c = ca; c <= cb; ++c) {
    const Candidate cand = lo.best_in(c, x);
    if (cand.phi < best.phi) {
      best = cand;
      bc = c;
    }
  }
  ystar[static_cast<std::size_t>(mid)] = best.y;
  cstar[static_cast<std::size_t>(mid)] = bc;
  solve_range(lo, g, a, mid - 1, ca, bc, ystar, cstar);
  solve_range(lo, g, mid + 1, b, bc, cb, ystar, cstar);
}

} // namespace

GridFunction1D lax_oleinik_solve(const GridFunction1D& u0, double t, const GridSpec& grid) {
  if (!(t > 0.0)) {
    throw InvalidArgument("Lax-Oleinik time must be positive");
  }
  const LaxOleinik lo(u0, t);
  std::vector<double> ystar(grid.n);
  std::vector<std::size_t> cstar(grid.n);
  solve_range(lo, grid, 0, static_cast<std::ptrdiff_t>(grid.n) - 1, 0, lo.candidates() - 1, ystar,
              cstar);
  std::vector<double> out(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    out[i] = (grid.x(i) - ystar[i]) / t;
  }
  return {grid, std::move(out)};
}

Trajectory godunov_solve(const GridFunction1D& u0, const FluxSpec& flux, double T, double cfl,
                         std::size_t max_snapshots) {
  if (!(cfl > 0.0) || cfl > 0.9) {
    throw InvalidArgument("Godunov cfl must lie in (0, 0.9]");
  }
  if (!(T >= 0.0) || !std::isfinite(T)) {
    throw InvalidArgument("final time must be finite and nonnegative");
  }
  const FluxSpec f = flux.on_range(u0.min(), u0.max());
  if (!f.is_convex()) {
    throw InvalidFlux("Godunov reference requires a convex flux");
  }
  const GridSpec g = u0.spec();
  const std::size_t n = g.n;
  Trajectory tr;
  tr.epsilon = 0.0;
  tr.mode = Mode::Conservative;
  tr.dt = cfl * g.dx / std::max(f.max_speed(), 1e-12);
  const std::size_t steps =
      T > 0.0 ? static_cast<std::size_t>(std::ceil(T / tr.dt - 1e-9)) : std::size_t{0};
  const std::size_t slots = std::max<std::size_t>(1, max_snapshots - 1);
  const std::size_t stride = std::max<std::size_t>(1, (steps + slots - 1) / slots);

  std::vector<double> u(u0.values().begin(), u0.values().end());
  std::vector<double> F(n + 1);
  auto record = [&](double t) {
    tr.times.push_back(t);
    tr.states.emplace_back(g, u);
  };
  auto stats = [&] {
    tr.step_tv.push_back(total_variation(GridFunction1D(g, u)));
    tr.step_min.push_back(*std::min_element(u.begin(), u.end()));
    tr.step_max.push_back(*std::max_element(u.begin(), u.end()));
  };
  record(0.0);
  stats();
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t_prev = static_cast<double>(k - 1) * tr.dt;
    const double t = k == steps ? T : static_cast<double>(k) * tr.dt;
    const double lambda = (t - t_prev) / g.dx;
    for (std::size_t i = 0; i <= n; ++i) {
      const double a = u[i == 0 ? 0 : i - 1];
      const double b = u[i == n ? n - 1 : i];
      F[i] = a == b ? f.f(a) : f.godunov_flux(a, b);
    }
    for (std::size_t i = 0; i < n; ++i) {
      u[i] -= lambda * (F[i + 1] - F[i]);
    }
    stats();
    if (k % stride == 0 || k == steps) {
      record(t);
    }
  }
  return tr;
}

} // namespace nlclaw
