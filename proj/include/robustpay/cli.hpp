#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace robustpay::cli {

enum class Format { JSON, CSV };

struct RunConfig {
  std::string verb;
  std::string input_path;      // required for every verb except selftest
  std::string output_path;     // empty writes to stdout
  std::string dump_game_path;  // evaluate only
  std::optional<Format> format;
  std::uint64_t seed = 0;
  std::optional<double> grid_step;
  std::optional<int> refine;
  std::optional<int> n;
  std::optional<double> eps;
  std::optional<double> mu;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailedChecks = 1;  // selftest ran but some criterion failed
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNoConvergence = 3;

const char* version();

struct Artifact {
  std::string content;
  int status = kExitOk;
};

// Runs one verb on already-loaded input text. Throws ModelError or
// ConvergenceError; nlohmann parse errors are rethrown as ModelError.
Artifact execute(const RunConfig& cfg, const std::string& input_text);

// Reads input, executes, writes outputs atomically and maps errors to exit codes.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Full command-line entry point.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace robustpay::cli
