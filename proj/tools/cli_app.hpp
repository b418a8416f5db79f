#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cdeg::cli {

enum ExitCode : int { kPass = 0, kVerificationFailure = 1, kInputError = 2, kInconclusive = 3 };

struct RunConfig {
  std::string scenario;  // file path or bundled name
  std::string command = "verify";
  std::string out_dir = "out";
  std::optional<long long> seed;
  std::vector<std::string> overrides;
};

/// Executes one command; diagnostics go to err, summaries to out.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

void list_scenarios(std::ostream& out);

/// Full command-line entry point (argv[0] included).
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace cdeg::cli
