#pragma once

// The oehplan command line: validate, cluster, solve and sweep.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace oeh::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kInfeasible = 2, kIo = 3 };

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  double step = 1.0;
};

/// "lo:hi:step"; throws std::invalid_argument.
Range parse_range(const std::string& text);
std::string format_range(const Range& r);

/// Everything a command may use. Values come from defaults, then the config file, then flags.
struct RunConfig {
  std::optional<std::filesystem::path> system;
  std::optional<std::filesystem::path> profiles;
  std::optional<std::filesystem::path> fields;
  std::optional<std::filesystem::path> templates;
  std::optional<std::filesystem::path> sites;
  std::optional<std::filesystem::path> solution;
  std::filesystem::path out = "out";
  std::uint64_t seed = 0;
  std::string solver = "internal";
  std::string kind = "tax";
  Range tax{55.0, 500.0, 5.0};
  double budget_step_pct = 5.0;
  Range pfs{0.0, 1000.0, 10.0};
  double fixed_tax = 300.0;
  std::optional<double> co2_tax;
  std::optional<double> co2_cap;
  int k = 5;
  int min_size = 1;
  int slices = 4;
  int hours = 24;
  double gap = 1e-6;
  double sweep_gap = 1e-10;
  std::int64_t node_limit = 1'000'000;
  int threads = 0;
  int anchor_every = 10;
};

/// Reads a JSON config; relative paths resolve against the file's directory. Unknown keys
/// and wrong types throw io::ParseError.
void apply_config_file(const std::filesystem::path& path, RunConfig& config);

/// Runs one command line; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace oeh::cli
