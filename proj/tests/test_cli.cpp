#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "doctest.h"
#include "nlclaw/expr.hpp"
#include "nlclaw/runner.hpp"
#include "nlclaw/scenario.hpp"

using namespace nlclaw;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("nlclaw_test_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(NLCLAW_CLI) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1) {
    return -1;
  }
  return WEXITSTATUS(status);
}

const char* kShock = R"(name: shock
mode: nn
initial: riemann
uL: 1
uR: 0
epsilon: 0.1
T: 0.5
dx: 4e-3
domain: -1.5, 1.5
)";

} // namespace

TEST_CASE("expression matches the closed form of -tanh") {
  const auto e = Expression::parse("-tanh(x)");
  for (int k = 0; k < 100; ++k) {
    const double x = -5.0 + 10.0 * k / 99.0;
    CHECK(std::abs(e(x) + std::tanh(x)) <= 1e-12);
  }
  CHECK(Expression::parse("-x^2")(3.0) == doctest::Approx(-9.0));
  CHECK(Expression::parse("2^-1")(0.0) == doctest::Approx(0.5));
  CHECK(Expression::parse("sgn(x) * abs(x)")(-2.5) == doctest::Approx(-2.5));
  CHECK(Expression::parse("1.5e-1 + exp(0)")(0.0) == doctest::Approx(1.15));
}

TEST_CASE("expression errors carry a column") {
  try {
    (void)Expression::parse("1 + * 2");
    FAIL("no error");
  } catch (const ExprError& e) {
    CHECK(e.column() == 5);
  }
  CHECK_THROWS_AS((void)Expression::parse("y + 1"), ExprError);
  CHECK_NOTHROW((void)Expression::parse("y + 1", true));
  CHECK_THROWS_AS((void)Expression::parse("tanh(x"), ExprError);
  CHECK_THROWS_AS((void)Expression::parse("cos(x)"), ExprError);
}

TEST_CASE("minimal riemann document parses with defaults") {
  const auto p = parse_scenario("name: r\ninitial: riemann\nuL: 1\nuR: 0\nepsilon: 0.1\nT: 1\ndomain: -1, 1\n");
  REQUIRE(p.ok());
  CHECK(p.spec.mode == RunMode::NN);
  CHECK(p.spec.flux == FluxKind::Burgers);
  CHECK(p.spec.epsilons.size() == 1);
  CHECK(p.spec.uL == 1.0);
}

TEST_CASE("parse errors report line and column") {
  const auto p = parse_scenario("name: bad\ninitial: riemann\nuL: 1\nuR: 0\nepsilon: 0.1\nT: -1\ndomain: -1, 1\n");
  REQUIRE(p.errors.size() == 1);
  CHECK(p.errors[0].line == 6);
  CHECK(p.errors[0].message.find("T must be positive") != std::string::npos);

  const auto q = parse_scenario("name: e\ninitial: expression\nu0: tanh(x) + \nepsilon: 0.1\n");
  REQUIRE_FALSE(q.ok());
  CHECK(q.errors[0].line == 3);
  CHECK(q.errors[0].column > 4);
}

TEST_CASE("every error is collected, in line order") {
  const auto p = parse_scenario("name: m\ncolour: red\ninitial riemann\nuL: 1\nuR: 0\nepsilon: 0\nT: 0\n");
  REQUIRE(p.errors.size() >= 4);
  for (std::size_t k = 1; k < p.errors.size(); ++k) {
    const auto& a = p.errors[k - 1];
    const auto& b = p.errors[k];
    CHECK((a.line == 0 ? 1u << 30 : a.line) <= (b.line == 0 ? 1u << 30 : b.line));
  }
  CHECK(p.errors[0].line == 2);
  CHECK(p.errors[1].line == 3);
}

TEST_CASE("duplicate keys are rejected except piece") {
  const auto p = parse_scenario("name: d\ninitial: riemann\nuL: 1\nuL: 2\nuR: 0\nepsilon: 0.1\n");
  REQUIRE_FALSE(p.ok());
  CHECK(p.errors[0].line == 4);
}

TEST_CASE("shock runner reports the Rankine-Hugoniot front speed") {
  const auto p = parse_scenario(kShock);
  REQUIRE(p.ok());
  const auto out = run_scenario(p.spec);
  CHECK(out.exit_code == kExitOk);
  const auto* c = out.report.find("front_speed");
  REQUIRE(c != nullptr);
  CHECK(c->passed);
  CHECK(std::abs(c->measured - 0.5) <= 0.01);
  CHECK(out.files.count("shock.csv") == 1);
  CHECK(out.files.count("shock_final.dat") == 1);
  CHECK(out.files.count("shock_report.json") == 1);
  CHECK(out.files.at("shock.csv").rfind("# nlclaw ", 0) == 0);
}

TEST_CASE("expected non-convergence passes with an L1 plateau") {
  const auto p = parse_scenario(R"(name: fan
initial: riemann
uL: -1
uR: 1
epsilons: 0.2, 0.1, 0.05
T: 0.5
dx: 4e-3
domain: -1.5, 1.5
expect: nonconvergence
)");
  REQUIRE(p.ok());
  RunOptions o;
  o.command = Command::Sweep;
  const auto out = run_scenario(p.spec, o);
  CHECK(out.exit_code == kExitOk);
  const auto* c = out.report.find("plateau_slope");
  REQUIRE(c != nullptr);
  CHECK(c->passed);
  REQUIRE(out.files.count("fan_sweep.dat") == 1);
  const std::string dat = out.files.at("fan_sweep.dat");
  CHECK(dat.find("0.05") != std::string::npos);
}

TEST_CASE("sweep with a single epsilon is an input error") {
  const auto p = parse_scenario(kShock);
  REQUIRE(p.ok());
  RunOptions o;
  o.command = Command::Sweep;
  CHECK_THROWS_AS((void)run_scenario(p.spec, o), Error);
}

TEST_CASE("repeated runs are byte-identical") {
  const auto p = parse_scenario(kShock);
  const auto a = run_scenario(p.spec);
  const auto b = run_scenario(p.spec);
  CHECK(a.files == b.files);
}

TEST_CASE("command line: malformed scenario exits 1 and writes nothing") {
  const fs::path dir = scratch("bad");
  {
    std::ofstream f(dir / "bad.scn");
    f << "name: bad\ninitial: riemann\nuL: one\nuR: 0\nepsilon: 0.1\n";
  }
  const fs::path out = dir / "out";
  const int code = run_cli("run " + (dir / "bad.scn").string() + " --out " + out.string(), dir / "log");
  CHECK(code == 1);
  CHECK_FALSE(fs::exists(out));
  const std::string log = slurp(dir / "log");
  CHECK(log.find("line 3") != std::string::npos);
}

TEST_CASE("command line: run writes identical files twice") {
  const fs::path dir = scratch("run");
  {
    std::ofstream f(dir / "shock.scn");
    f << kShock;
  }
  const fs::path o1 = dir / "o1";
  const fs::path o2 = dir / "o2";
  CHECK(run_cli("run " + (dir / "shock.scn").string() + " --out " + o1.string(), dir / "log1") == 0);
  CHECK(run_cli("run " + (dir / "shock.scn").string() + " --out " + o2.string(), dir / "log2") == 0);
  std::size_t count = 0;
  for (const auto& e : fs::directory_iterator(o1)) {
    ++count;
    CHECK(slurp(e.path()) == slurp(o2 / e.path().filename()));
  }
  CHECK(count >= 3);
  CHECK(run_cli("--version", dir / "log3") == 0);
  CHECK(slurp(dir / "log3").find("0.1.0") != std::string::npos);
}

TEST_CASE("command line: bundled scenarios parse") {
  const fs::path dir = NLCLAW_SCENARIOS;
  std::size_t count = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() != ".scn") {
      continue;
    }
    ++count;
    const auto p = parse_scenario(slurp(e.path()));
    INFO(e.path().string());
    CHECK(p.ok());
  }
  CHECK(count >= 8);
}
