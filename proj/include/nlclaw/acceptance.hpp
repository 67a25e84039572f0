#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace nlclaw {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  /// Measured quantities in the order they were recorded.
  std::vector<std::pair<std::string, double>> values;
  std::string note;

  /// "[PASS] 1 title: k=v, ..." style line.
  std::string line() const;
};

struct AcceptanceOptions {
  std::size_t threads = 0; ///< 0: thread_budget()
  /// Repeat criteria 1-13 on one thread and compare the result files (criterion 14).
  bool check_determinism = true;
  /// Called as each criterion finishes.
  std::function<void(const CriterionResult&)> on_result;
};

struct AcceptanceRun {
  std::vector<CriterionResult> results; ///< sorted by id
  /// criterion_NN.json per criterion plus acceptance_summary.txt.
  std::map<std::string, std::string> files;

  bool all_passed() const;
};

AcceptanceRun run_acceptance(const AcceptanceOptions& opt = {});

} // namespace nlclaw
