#include "nlclaw/euler.hpp"

#include <algorithm>
#include <cmath>

#include "nlclaw/errors.hpp"
#include "nlclaw/parallel.hpp"

namespace nlclaw {

namespace {

GridFunction1D combine(const GridFunction1D& a, const GridFunction1D& b, double sa, double sb) {
  if (!a.same_grid(b)) {
    throw GridMismatch("fields are defined on different grids");
  }
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    v[i] = sa * a[i] + sb * b[i];
  }
  return {a.spec(), std::move(v)};
}

} // namespace

GridFunction1D EulerState::rho() const { return combine(mu, lam, 0.5, 0.5); }
GridFunction1D EulerState::vel() const { return combine(mu, lam, 0.5, -0.5); }

void EulerState::validate() const {
  if (!mu.same_grid(lam)) {
    throw GridMismatch("invariants are defined on different grids");
  }
}

EulerState to_invariants(const GridFunction1D& rho, const GridFunction1D& vel) {
  return {combine(rho, vel, 1.0, 1.0), combine(rho, vel, 1.0, -1.0)};
}

std::pair<GridFunction1D, GridFunction1D> from_invariants(const EulerState& s) {
  s.validate();
  return {s.rho(), s.vel()};
}

namespace {

EulerTrajectory run(const InitialData1D& mu0, const InitialData1D& lam0, double epsilon, double T,
                    const SolverConfig& cfg, const EulerOptions& opt) {
  cfg.validate();
  const double speed = std::max(sup_norm(mu0.grid()), sup_norm(lam0.grid()));
  SolverConfig c = cfg;
  const double limit = cfg.cfl * mu0.grid().dx() / std::max(speed, 1e-12);
  if (cfg.fixed_dt > 0.0) {
    if (cfg.fixed_dt > limit * (1.0 + 1e-12)) {
      throw CflViolation("fixed time step exceeds the CFL bound");
    }
  } else {
    c.fixed_dt = limit;
  }
  EulerTrajectory out;
  const double lam_orientation = opt.flip_lambda ? 1.0 : -1.0;
  parallel_for(2, [&](std::size_t k) {
    if (k == 0) {
      out.mu = solve_nn(mu0, epsilon, T, c, 1.0);
    } else {
      out.lam = solve_nn(lam0, epsilon, T, c, lam_orientation);
    }
  });
  out.epsilon = epsilon;
  out.dt = c.fixed_dt;
  out.times = out.mu.times;
  for (std::size_t k = 0; k < out.times.size(); ++k) {
    EulerState s{out.mu.states[k], out.lam.states[k]};
    const auto rho = s.rho();
    out.negative_density = out.negative_density || rho.min() < 0.0;
    out.states.push_back(std::move(s));
  }
  return out;
}

} // namespace

EulerTrajectory solve_isentropic(const ScalarFn& rho0, const ScalarFn& vel0, const GridSpec& grid,
                                 double epsilon, double T, const SolverConfig& cfg,
                                 const EulerOptions& opt) {
  const ScalarFn mu = [rho0, vel0](double x) { return rho0(x) + vel0(x); };
  const ScalarFn lam = [rho0, vel0](double x) { return rho0(x) - vel0(x); };
  return run(InitialData1D::from(mu, grid), InitialData1D::from(lam, grid), epsilon, T, cfg, opt);
}

EulerTrajectory solve_isentropic(const GridFunction1D& rho0, const GridFunction1D& vel0,
                                 double epsilon, double T, const SolverConfig& cfg,
                                 const EulerOptions& opt) {
  const EulerState s = to_invariants(rho0, vel0);
  return run(InitialData1D(s.mu), InitialData1D(s.lam), epsilon, T, cfg, opt);
}

namespace {

// B(s) = exp(-1/(1 - s^2)) on |s| < 1.
double bump(double s) { return std::abs(s) < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0; }
struct Bump {
  double tc, tau, xc, w;
};

} // namespace

std::pair<double, double> conservative_residual(const std::vector<EulerState>& states,
                                                const std::vector<double>& times,
                                                const ResidualBank& bank) {
  if (states.size() < 3 || states.size() != times.size()) {
    throw InvalidArgument("residual needs at least three time levels");
  }
  const GridFunction1D& g = states.front().mu;
  for (const auto& s : states) {
    s.validate();
    if (!s.mu.same_grid(g)) {
      throw GridMismatch("time levels are defined on different grids");
    }
  }
  double a = bank.a;
  double b = bank.b;
  if (!(b > a)) {
    const double len = g.x_last() - g.x0();
    a = g.x0() + 0.25 * len;
    b = g.x0() + 0.75 * len;
  }
  const double t0 = times.front();
  const double t1 = times.back();
  const int nb = std::max(1, bank.space_bumps);
  const double h = (b - a) / (nb + 1);
  std::vector<Bump> bumps;
  const double half = 0.5 * (t1 - t0);
  const std::vector<std::pair<double, double>> time_bumps{
      {t0 + half, half}, {t0 + 0.5 * half, 0.5 * half}, {t0 + 1.5 * half, 0.5 * half}};
  for (const auto& [tc, tau] : time_bumps) {
    for (int k = 1; k <= nb; ++k) {
      bumps.push_back({tc, tau, a + k * h, h});
    }
  }

  // Derivatives of phi are central differences of phi over neighbouring time
  // levels and nodes (summation by parts), so a constant state gives exactly
  // zero: sum_k rho (phi_{k+1} - phi_{k-1}) / 2 telescopes.
  const std::size_t nt = times.size();
  const std::size_t nx = g.size();
  const double dx = g.dx();
  std::vector<double> r1(bumps.size(), 0.0);
  std::vector<double> r2(bumps.size(), 0.0);
  std::vector<double> bt(nt);
  std::vector<double> bx(nx);
  std::vector<std::vector<double>> rho(nt);
  std::vector<std::vector<double>> vel(nt);
  for (std::size_t k = 0; k < nt; ++k) {
    const GridFunction1D r = states[k].rho();
    const GridFunction1D v = states[k].vel();
    rho[k].assign(r.values().begin(), r.values().end());
    vel[k].assign(v.values().begin(), v.values().end());
  }
  for (std::size_t q = 0; q < bumps.size(); ++q) {
    const Bump& bp = bumps[q];
    for (std::size_t k = 0; k < nt; ++k) {
      bt[k] = bump((times[k] - bp.tc) / bp.tau);
    }
    for (std::size_t i = 0; i < nx; ++i) {
      bx[i] = bump((g.x(i) - bp.xc) / bp.w);
    }
    double s1 = 0.0;
    double s2 = 0.0;
    for (std::size_t k = 0; k < nt; ++k) {
      const double tp = k + 1 < nt ? times[k + 1] : times[k];
      const double tm = k > 0 ? times[k - 1] : times[k];
      const double dphi_t = 0.5 * ((k + 1 < nt ? bt[k + 1] : bt[k]) - (k > 0 ? bt[k - 1] : bt[k]));
      const double wt = 0.5 * (tp - tm);
      if (dphi_t == 0.0 && bt[k] == 0.0) {
        continue;
      }
      const auto& rk = rho[k];
      const auto& vk = vel[k];
      for (std::size_t i = 1; i + 1 < nx; ++i) {
        const double dphi_x = 0.5 * (bx[i + 1] - bx[i - 1]);
        if (bx[i] == 0.0 && dphi_x == 0.0) {
          continue;
        }
        const double m = rk[i] * vk[i];
        // int rho phi_t dt dx ~ rho * dphi_t * dx; int m phi_x dx dt ~ m * dphi_x * bt * wt
        s1 += rk[i] * bx[i] * dphi_t * dx + m * dphi_x * bt[k] * wt;
        s2 += m * bx[i] * dphi_t * dx +
              (m * vk[i] + rk[i] * rk[i] * rk[i] / 3.0) * dphi_x * bt[k] * wt;
      }
    }
    r1[q] = s1;
    r2[q] = s2;
  }
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::size_t q = 0; q < bumps.size(); ++q) {
    m1 = std::max(m1, std::abs(r1[q]));
    m2 = std::max(m2, std::abs(r2[q]));
  }
  return {m1, m2};
}

} // namespace nlclaw
