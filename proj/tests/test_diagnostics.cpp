#include <cmath>
#include <cstdlib>
#include <limits>
#include <vector>

#include "doctest.h"
#include "nlclaw/diagnostics.hpp"
#include "nlclaw/errors.hpp"
#include "nlclaw/parallel.hpp"
#include "nlclaw/reference.hpp"

using namespace nlclaw;

namespace {

Trajectory synthetic(const std::vector<double>& times, const std::function<double(double, double)>& u,
                     const GridSpec& g) {
  Trajectory tr;
  for (double t : times) {
    tr.times.push_back(t);
    tr.states.push_back(sample([&](double x) { return u(t, x); }, g));
  }
  return tr;
}

PiecewiseInitialData counterexample() {
  PiecewiseInitialData d;
  d.breakpoints = {0.0};
  d.pieces = {[](double x) { return std::clamp(x + 2.0, 0.0, 1.0); },
              [](double x) { return -std::clamp(2.0 - x, 0.0, 1.0); }};
  d.lipschitz_C = 1.0;
  return d;
}

} // namespace

TEST_CASE("catastrophe time") {
  const GridSpec g = GridSpec::from_domain(-10.0, 10.0, 1e-3);
  CHECK(std::abs(catastrophe_time(sample([](double x) { return -std::tanh(x); }, g)) - 1.0) < 1e-3);
  CHECK(std::isinf(catastrophe_time(sample([](double x) { return std::tanh(x); }, g))));
  CHECK(std::isinf(catastrophe_time(GridFunction1D(g, 2.0))));
  const auto kink = sample([](double x) { return x < 0.0 ? -2.0 * x : -0.5 * x; }, g);
  CHECK(catastrophe_time(kink) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("secondary horizon") {
  CHECK(secondary_horizon(1.0, 1.2) == doctest::Approx(1.0 / 2.4));
  CHECK(std::isinf(secondary_horizon(1.0, 0.0)));
  CHECK_THROWS_AS(secondary_horizon(0.0, 1.0), InvalidArgument);
}

TEST_CASE("front speed on a translated profile is exact") {
  const GridSpec g = GridSpec::from_domain(-2.0, 2.0, 1e-2);
  std::vector<double> ts;
  for (int k = 0; k <= 20; ++k) {
    ts.push_back(0.05 * k);
  }
  // ramp of width 0.5: linear between nodes, so interpolation is exact
  const auto tr = synthetic(ts, [](double t, double x) {
    return std::clamp(0.5 - (x - 0.3 * t) / 0.5, 0.0, 1.0);
  }, g);
  const auto fs = measure_front_speed(tr, 0.5, 0.0, 1.0);
  CHECK(std::abs(fs.speed - 0.3) < 1e-6);
  CHECK(fs.samples == 21);
  CHECK(fs.standard_error < 1e-6);
  CHECK_THROWS_AS(measure_front_speed(tr, 0.5, 0.0, 0.06), InvalidArgument);
}

TEST_CASE("level crossing errors") {
  const GridSpec g = GridSpec::from_domain(-1.0, 1.0, 0.1);
  CHECK_THROWS_AS(level_crossing(GridFunction1D(g, 0.0), 0.5), NoCrossing);
  CHECK_THROWS_AS(level_crossing(sample([](double x) { return std::cos(4.0 * x); }, g), 0.0),
                  MultipleCrossings);
  CHECK(level_crossing(sample([](double x) { return x; }, g), 0.25) == doctest::Approx(0.25));
}

TEST_CASE("front speed of the NN Burgers shock") {
  SolverConfig cfg;
  const double eps = 0.1;
  const GridSpec g = padded_grid(-1.0, 1.0, 1.0, 1.0, eps, cfg);
  const auto tr = solve_nn(InitialData1D::from(RiemannData{1.0, 0.0}, g), eps, 1.0, cfg);
  const auto fs = measure_front_speed(tr, 0.5, 0.2, 1.0);
  CHECK(std::abs(fs.speed - 0.5) < 0.01);
}

TEST_CASE("front speed of the cubic velocity-regularised shock differs from Rankine-Hugoniot") {
  SolverConfig cfg;
  cfg.dx = 2e-3;
  const double eps = 0.1;
  const GridSpec g = padded_grid(-1.0, 1.0, 2.0, 1.0, eps, cfg);
  const auto tr = solve_general(InitialData1D::from(RiemannData{2.0, 0.0}, g),
                                FluxSpec::cubic(0.0, 2.0), eps, 1.0, cfg, Mode::VelocityReg);
  const auto fs = measure_front_speed(tr, 1.0, 0.2, 1.0);
  CHECK(std::abs(fs.speed - 2.0) < 0.04);
  CHECK(std::abs(fs.speed - 4.0 / 3.0) > 10.0 * fs.standard_error);
}

TEST_CASE("invariants: constant trajectory") {
  SolverConfig cfg;
  const GridSpec g = GridSpec::from_domain(-2.0, 2.0, 1e-2);
  cfg.dx = g.dx;
  const auto tr = solve_nn(InitialData1D(GridFunction1D(g, 0.3)), 0.1, 0.5, cfg);
  const auto rep = check_invariants(tr);
  CHECK(rep.contract == "nn");
  CHECK(rep.all_required_pass());
  for (const auto& c : rep.checks) {
    CHECK(c.measured == 0.0);
  }
}

TEST_CASE("invariants: NN on -tanh") {
  SolverConfig cfg;
  const double eps = 0.1;
  const GridSpec g = padded_grid(-3.0, 3.0, 1.0, 0.5, eps, cfg);
  const auto tr =
      solve_nn(InitialData1D::from([](double x) { return -std::tanh(x); }, g), eps, 0.5, cfg);
  const auto rep = check_invariants(tr);
  CHECK(rep.all_required_pass());
  REQUIRE(rep.find("l1_lipschitz") != nullptr);
  CHECK(rep.find("l1_lipschitz")->measured > 0.0);
  CHECK(rep.find("mass") == nullptr);
}

TEST_CASE("invariants: conservative run waives the max principle") {
  SolverConfig cfg;
  cfg.dx = 2e-3;
  const double eps = 0.1;
  const GridSpec g = padded_grid(-2.0, 2.0, 1.0, 1.0, eps, cfg);
  const auto u0 = InitialData1D::from(counterexample(), g);
  const auto tr = solve_conservative_nonlocal(u0.grid(), eps, 1.0, cfg);
  const auto rep = check_invariants(tr);
  CHECK(rep.contract == "conservative");
  const auto* mp = rep.find("max_principle");
  REQUIRE(mp != nullptr);
  CHECK_FALSE(mp->passed);
  CHECK_FALSE(mp->required);
  REQUIRE(rep.find("mass") != nullptr);
  CHECK(rep.find("mass")->passed);
  CHECK(rep.all_required_pass());
}

TEST_CASE("stability envelope") {
  SolverConfig cfg;
  const double eps = 0.1;
  const GridSpec g = padded_grid(-2.0, 2.0, 1.0, 1.0, eps, cfg);
  const Mollifier m = build_mollifier(eps, g.dx);
  cfg.fixed_dt = 0.4 * g.dx; // common step so both runs store the same times
  const auto f = [](double x) { return -std::tanh(x); };
  const auto u = solve_nn(InitialData1D::from(f, g), eps, 1.0, cfg);
  const auto same = stability_envelope(u, u, m);
  CHECK(same.check.passed);
  for (double d : same.distances) {
    CHECK(d == 0.0);
  }
  const double h = g.dx;
  const auto v = solve_nn(InitialData1D::from([f, h](double x) { return f(x - h); }, g), eps, 1.0, cfg);
  const auto rep = stability_envelope(u, v, m);
  CHECK(rep.check.passed);
  CHECK(rep.constant > 0.0);
  for (std::size_t k = 1; k < rep.bounds.size(); ++k) {
    CHECK(rep.bounds[k] > rep.bounds[k - 1]);
  }
}

TEST_CASE("Oleinik check") {
  const GridSpec g = GridSpec::from_domain(-1.0, 1.0, 1e-3);
  CHECK(oleinik_check(sample([](double x) { return x; }, g), 1.0, {}).passed);
  CHECK_FALSE(oleinik_check(sample([](double x) { return 2.0 * x; }, g), 1.0, {}).passed);
  const auto step = sample(RiemannData{1.0, 0.0}, g);
  CHECK(oleinik_check(step, 0.0, {{-0.01, 0.01}}).passed);
  const auto up = sample(RiemannData{0.0, 1.0}, g);
  CHECK(oleinik_check(up, 1.0, {{-0.01, 0.01}}).passed);
  CHECK_FALSE(oleinik_check(up, 1.0, {}).passed);
}

TEST_CASE("shock location and excluded distances") {
  const GridSpec g = GridSpec::from_domain(-2.0, 2.0, 1e-2);
  const auto u = sample([](double x) { return x < -0.5 ? 1.0 : (x < 0.5 ? 0.0 : -1.0); }, g);
  const auto s = find_shocks(u, 0.5);
  REQUIRE(s.size() == 2);
  CHECK(std::abs(s[0] + 0.5) < 0.01);
  CHECK(std::abs(s[1] - 0.5) < 0.01);
  const GridFunction1D z(g, 0.0);
  CHECK(l1_distance_excluding(u, z, -2.0, 2.0, {}) == doctest::Approx(l1_distance(u, z)));
  CHECK(l1_distance_excluding(u, z, -2.0, 2.0, {{-3.0, -0.5}, {0.5, 3.0}}) == 0.0);
  CHECK(sup_distance_excluding(u, z, -0.4, 0.4, {}) == 0.0);
}

TEST_CASE("log-log slope") {
  CHECK(log_log_slope({1.0, 2.0, 4.0}, {3.0, 12.0, 48.0}) == doctest::Approx(2.0));
  CHECK(log_log_slope({1.0, 2.0}, {5.0, 5.0}) == doctest::Approx(0.0));
  CHECK(log_log_slope({1.0}, {1.0}) == 0.0);
}

TEST_CASE("convergence study on smooth data and on a shock") {
  SolverConfig cfg;
  ConvergenceOptions opt;
  opt.dx_max = 2e-3;
  ConvergenceProblem p;
  p.a = -3.0;
  p.b = 3.0;
  p.T = 0.5;
  p.setup = [](const GridSpec& g) {
    return InitialData1D::from([](double x) { return -std::tanh(x); }, g);
  };
  p.reference = [](const GridFunction1D& u0, const GridSpec& g) {
    return lax_oleinik_solve(u0, 0.5, g);
  };
  const auto tab = convergence_study(p, {0.05, 0.2, 0.1}, "lax_oleinik", cfg, opt);
  REQUIRE(tab.rows.size() == 3);
  CHECK(tab.rows[0].epsilon == 0.2);
  CHECK(tab.rows[2].epsilon == 0.05);
  CHECK(tab.rows[2].dx == 2e-3);
  CHECK(tab.rate_reported);
  CHECK(tab.fitted_rate >= 0.8);
  CHECK(tab.reference == "lax_oleinik");

  ConvergenceProblem s = p;
  s.T = 1.0;
  s.floor_l1_per_dx = 10.0;
  s.setup = [](const GridSpec& g) { return InitialData1D::from(RiemannData{1.0, 0.0}, g); };
  s.reference = [](const GridFunction1D&, const GridSpec& g) {
    return sample([](double x) { return burgers_riemann_exact({1.0, 0.0}, x); }, g);
  };
  opt.metric = ErrorMetric::L1;
  const auto shock = convergence_study(s, {0.1, 0.05}, "exact_riemann", cfg, opt);
  for (const auto& r : shock.rows) {
    CHECK(r.error_l1 <= 10.0 * r.dx);
    CHECK(r.floor_dominated);
  }
  CHECK_FALSE(shock.rate_reported);
}

TEST_CASE("parallel_for fills every slot once") {
  std::vector<int> hits(100, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += static_cast<int>(i); }, 4);
  for (std::size_t i = 0; i < hits.size(); ++i) {
    CHECK(hits[i] == static_cast<int>(i));
  }
  CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                    if (i == 7) {
                      throw InvalidArgument("boom");
                    }
                  }, 3),
                  InvalidArgument);
  ::setenv("NLCLAW_THREADS", "3", 1);
  CHECK(thread_budget() == 3);
  ::setenv("NLCLAW_THREADS", "zero", 1);
  CHECK(thread_budget() >= 1);
  ::unsetenv("NLCLAW_THREADS");
}
