#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nlclaw/expr.hpp"

namespace nlclaw {

enum class InitialKind { None, Riemann, Piecewise, Expression };
enum class FluxKind { Burgers, Cubic, Zero, Expression };
enum class RunMode { NN, Conservative, VelocityReg, FluxReg, Euler, NN2D };
enum class OutputFormat { Csv, Json };
enum class Expectation { None, Convergence, Nonconvergence };

std::string to_string(RunMode m);
std::string to_string(FluxKind f);

/// A validated scenario document. The format is described in
/// docs/scenario-format.md.
struct ScenarioSpec {
  std::string name;
  RunMode mode = RunMode::NN;

  InitialKind initial = InitialKind::None;
  double uL = 0.0;
  double uR = 0.0;
  std::vector<double> breakpoints;
  std::vector<std::string> pieces;
  double lipschitz_C = 0.0;
  std::string u0; ///< expression in x (and y for nn2d)
  std::string rho0; ///< euler only
  std::string v0;

  FluxKind flux = FluxKind::Burgers;
  std::string f; ///< expression flux, variable x
  std::string fprime;
  FluxKind flux_y = FluxKind::Burgers; ///< nn2d, second direction

  std::vector<double> epsilons; ///< single entry unless sweeping
  double T = 1.0;
  double dx = 1e-3;
  double cfl = 0.5;
  double a = -1.0; ///< data and output window
  double b = 1.0;
  double ya = -1.0; ///< nn2d
  double yb = 1.0;
  OutputFormat output = OutputFormat::Csv;
  std::size_t stride = 0; ///< 0: automatic
  Expectation expect = Expectation::None;
  double min_rate = 0.0; ///< sweeps: required fitted rate when positive
};

struct ScenarioDiagnostic {
  std::size_t line = 0; ///< 0: the document as a whole
  std::size_t column = 0;
  std::string message;

  std::string to_string() const;
};

struct ScenarioParse {
  ScenarioSpec spec;
  std::vector<ScenarioDiagnostic> errors;

  bool ok() const { return errors.empty(); }
};

/// Parses and validates; collects every error rather than stopping at the first.
ScenarioParse parse_scenario(const std::string& text);

} // namespace nlclaw
