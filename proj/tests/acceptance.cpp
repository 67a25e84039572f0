// Runs all acceptance criteria; one line per criterion, nonzero exit on any failure.
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "nlclaw/acceptance.hpp"

int main(int argc, char** argv) {
  nlclaw::AcceptanceOptions opt;
  const nlclaw::AcceptanceRun run = nlclaw::run_acceptance(opt);
  for (const auto& r : run.results) {
    std::printf("%s\n", r.line().c_str());
  }
  if (argc > 1) {
    const std::filesystem::path dir = argv[1];
    std::filesystem::create_directories(dir);
    for (const auto& [name, content] : run.files) {
      std::ofstream(dir / name, std::ios::binary) << content;
    }
  }
  const bool ok = run.all_passed() && run.results.size() == 14;
  std::printf("%s: %zu criteria\n", ok ? "ALL PASS" : "FAILURES", run.results.size());
  return ok ? 0 : 1;
}
