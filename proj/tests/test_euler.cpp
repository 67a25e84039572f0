#include <cmath>

#include "doctest.h"
#include "nlclaw/errors.hpp"
#include "nlclaw/euler.hpp"

using namespace nlclaw;

TEST_CASE("invariant transform round trip") {
  const GridSpec g = GridSpec::from_domain(-1.0, 1.0, 0.1);
  const auto rho = sample([](double x) { return 1.0 + 0.2 * x * x; }, g);
  const auto vel = sample([](double x) { return 0.3 * std::sin(x); }, g);
  const auto s = to_invariants(rho, vel);
  const auto [r, v] = from_invariants(s);
  CHECK(sup_distance(r, rho) <= 1e-15);
  CHECK(sup_distance(v, vel) <= 1e-15);

  const auto one = to_invariants(GridFunction1D(g, 1.0), GridFunction1D(g, 0.0));
  CHECK(one.mu[3] == 1.0);
  CHECK(one.lam[3] == 1.0);
  const auto vac = to_invariants(GridFunction1D(g, 0.0), GridFunction1D(g, 0.7));
  CHECK(vac.mu[0] == doctest::Approx(0.7));
  CHECK(vac.lam[0] == doctest::Approx(-0.7));

  CHECK_THROWS_AS(to_invariants(rho, GridFunction1D(GridSpec::from_domain(-1.0, 1.0, 0.05), 0.0)),
                  GridMismatch);
}

TEST_CASE("constant gas at rest stays put and has zero residual") {
  SolverConfig cfg;
  cfg.dx = 0.01;
  const GridSpec g = GridSpec::from_domain(-2.0, 2.0, 0.01);
  const auto tr = solve_isentropic([](double) { return 1.0; }, [](double) { return 0.0; }, g, 0.2,
                                   0.3, cfg);
  for (const auto& s : tr.states) {
    CHECK(sup_distance(s.rho(), GridFunction1D(g, 1.0)) == 0.0);
    CHECK(sup_norm(s.vel()) == 0.0);
  }
  CHECK_FALSE(tr.negative_density);
  const auto [r1, r2] = conservative_residual(tr.states, tr.times);
  CHECK(r1 <= 1e-14);
  CHECK(r2 <= 1e-14);
}

TEST_CASE("even density and odd velocity keep their parity") {
  SolverConfig cfg;
  cfg.dx = 0.01;
  const GridSpec g = GridSpec::from_domain(-3.0, 3.0, 0.01);
  const auto tr = solve_isentropic([](double x) { return 1.0 + 0.2 * std::exp(-x * x); },
                                   [](double x) { return 0.1 * std::tanh(x); }, g, 0.2, 0.4, cfg);
  const auto rho = tr.states.back().rho();
  const auto vel = tr.states.back().vel();
  const std::size_t n = g.n;
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    worst = std::max(worst, std::abs(rho[i] - rho[n - 1 - i]));
    worst = std::max(worst, std::abs(vel[i] + vel[n - 1 - i]));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("the two invariants evolve independently") {
  SolverConfig cfg;
  cfg.dx = 0.01;
  const GridSpec g = GridSpec::from_domain(-3.0, 3.0, 0.01);
  const auto rho0 = [](double x) { return 1.0 + 0.1 * std::exp(-x * x); };
  const auto vel0 = [](double x) { return 0.05 * std::sin(x); };
  const auto tr = solve_isentropic(rho0, vel0, g, 0.2, 0.3, cfg);
  SolverConfig c = cfg;
  c.fixed_dt = tr.dt;
  const auto mu = solve_nn(InitialData1D::from([&](double x) { return rho0(x) + vel0(x); }, g), 0.2,
                           0.3, c, 1.0);
  const auto lam = solve_nn(InitialData1D::from([&](double x) { return rho0(x) - vel0(x); }, g),
                            0.2, 0.3, c, -1.0);
  REQUIRE(mu.times.size() == tr.times.size());
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    CHECK(sup_distance(tr.states[k].mu, mu.states[k]) == 0.0);
    CHECK(sup_distance(tr.states[k].lam, lam.states[k]) == 0.0);
  }
}

TEST_CASE("residual shrinks under refinement and flags a wrong sign") {
  const auto rho0 = [](double x) { return 1.0 + 0.1 * std::exp(-x * x); };
  const auto vel0 = [](double) { return 0.0; };
  const ResidualBank bank{-3.0, 3.0, 5};
  std::pair<double, double> prev{0.0, 0.0};
  for (auto [dx, eps] : {std::pair{8e-3, 0.4}, std::pair{4e-3, 0.2}}) {
    SolverConfig cfg;
    cfg.dx = dx;
    const GridSpec g = padded_grid(-4.0, 4.0, 1.1, 0.3, eps, cfg);
    const auto tr = solve_isentropic(rho0, vel0, g, eps, 0.3, cfg);
    const auto r = conservative_residual(tr.states, tr.times, bank);
    if (prev.first > 0.0) {
      CHECK(prev.first / r.first >= 1.8);
      CHECK(prev.second / r.second >= 1.8);
    }
    prev = r;
    EulerOptions bad;
    bad.flip_lambda = true;
    const auto tm = solve_isentropic(rho0, vel0, g, eps, 0.3, cfg, bad);
    const auto m = conservative_residual(tm.states, tm.times, bank);
    CHECK(std::max(m.first, m.second) >= 10.0 * std::max(r.first, r.second));
  }
}

TEST_CASE("residual input checks") {
  const GridSpec g = GridSpec::from_domain(-1.0, 1.0, 0.1);
  const EulerState s{GridFunction1D(g, 1.0), GridFunction1D(g, 1.0)};
  CHECK_THROWS_AS(conservative_residual({s, s}, {0.0, 0.1}), InvalidArgument);
  CHECK_THROWS_AS(conservative_residual({s, s, s}, {0.0, 0.1}), InvalidArgument);
}
