#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "nlclaw/acceptance.hpp"
#include "nlclaw/errors.hpp"
#include "nlclaw/parallel.hpp"
#include "nlclaw/runner.hpp"
#include "nlclaw/scenario.hpp"

using namespace nlclaw;

namespace {

bool read_file(const std::string& path, std::string& text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return false;
  }
  std::ostringstream s;
  s << in.rdbuf();
  text = s.str();
  return true;
}

int execute(const ScenarioSpec& spec, Command cmd, const std::string& out_dir) {
  RunOptions opt;
  opt.command = cmd;
  const RunOutcome outcome = run_scenario(spec, opt);
  write_outcome(outcome, out_dir);
  for (const auto& line : outcome.summary) {
    std::cout << line << '\n';
  }
  for (const auto& [name, content] : outcome.files) {
    std::cout << "wrote " << out_dir << '/' << name << '\n';
  }
  return outcome.exit_code;
}

int scenario_command(const std::string& path, Command cmd, const std::string& out_dir) {
  std::string text;
  if (!read_file(path, text)) {
    std::cerr << "error: cannot read " << path << '\n';
    return kExitInputError;
  }
  const ScenarioParse parsed = parse_scenario(text);
  if (!parsed.ok()) {
    for (const auto& e : parsed.errors) {
      std::cerr << path << ": " << e.to_string() << '\n';
    }
    return kExitInputError;
  }
  return execute(parsed.spec, cmd, out_dir);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlocal regularisations of scalar conservation laws"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);
  std::string out_dir = "out";
  app.add_option("--out", out_dir, "Directory for result files")->capture_default_str();

  std::string scenario;
  auto add_scenario_cmd = [&](const char* name, const char* help) {
    auto* c = app.add_subcommand(name, help);
    c->add_option("scenario", scenario, "Scenario file")->required();
    c->add_option("--out", out_dir, "Directory for result files");
    return c;
  };
  auto* run = add_scenario_cmd("run", "Solve a scenario and write trajectories and a report");
  auto* sweep = add_scenario_cmd("sweep", "Convergence table over the scenario's epsilon list");
  auto* euler = add_scenario_cmd("euler", "Isentropic Euler scenario");
  auto* verify = add_scenario_cmd("verify", "Diagnostics report only");

  auto* riemann = app.add_subcommand("riemann", "Riemann problem from flags");
  double uL = 1.0;
  double uR = 0.0;
  std::string flux = "burgers";
  std::string mode = "nn";
  double eps = 0.1;
  double T = 1.0;
  double dx = 1e-3;
  std::pair<double, double> domain{-2.0, 2.0};
  riemann->add_option("--uL", uL, "Left state")->required();
  riemann->add_option("--uR", uR, "Right state")->required();
  riemann->add_option("--flux", flux, "burgers or cubic")->capture_default_str();
  riemann->add_option("--mode", mode, "nn, conservative, velocity_reg or flux_reg")->capture_default_str();
  riemann->add_option("--eps", eps, "Kernel width")->capture_default_str();
  riemann->add_option("--T", T, "Final time")->capture_default_str();
  riemann->add_option("--dx", dx, "Grid spacing")->capture_default_str();
  riemann->add_option("--domain", domain, "Output window a b")->expected(2);
  riemann->add_option("--out", out_dir, "Directory for result files");

  auto* selftest = app.add_subcommand("selftest", "Run the acceptance suite");
  bool no_repeat = false;
  selftest->add_flag("--no-repeat", no_repeat, "Skip the determinism repeat (criterion 14)");
  selftest->add_option("--out", out_dir, "Directory for result files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*run) {
      return scenario_command(scenario, Command::Run, out_dir);
    }
    if (*sweep) {
      return scenario_command(scenario, Command::Sweep, out_dir);
    }
    if (*euler) {
      return scenario_command(scenario, Command::Euler, out_dir);
    }
    if (*verify) {
      return scenario_command(scenario, Command::Verify, out_dir);
    }
    if (*riemann) {
      // Assembled as a scenario document so it goes through the same validation.
      std::ostringstream doc;
      doc.precision(17);
      doc << "name: riemann\nmode: " << mode << "\ninitial: riemann\nuL: " << uL << "\nuR: " << uR
          << "\nflux: " << flux << "\nepsilon: " << eps << "\nT: " << T << "\ndx: " << dx
          << "\ndomain: " << domain.first << ", " << domain.second << "\n";
      const ScenarioParse parsed = parse_scenario(doc.str());
      if (!parsed.ok()) {
        for (const auto& e : parsed.errors) {
          std::cerr << "riemann: " << e.message << '\n';
        }
        return kExitInputError;
      }
      return execute(parsed.spec, Command::Run, out_dir);
    }
    if (*selftest) {
      AcceptanceOptions opt;
      opt.check_determinism = !no_repeat;
      opt.on_result = [](const CriterionResult& r) { std::cout << r.line() << std::endl; };
      const AcceptanceRun res = run_acceptance(opt);
      RunOutcome files;
      files.files = res.files;
      write_outcome(files, out_dir);
      return res.all_passed() ? kExitOk : kExitCheckFailure;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}
