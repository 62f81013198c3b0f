#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "aoi/config.hpp"

namespace aoi {

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;  // overrides the config seed where one applies
  int threads = 0;                    // 0: AOI_THREADS or hardware concurrency
};

struct RunResult {
  std::string summary;  // one line, printed by the CLI
  std::vector<std::filesystem::path> outputs;
};

// Executes a validated experiment and writes its artifacts under out_dir.
// Throws ValidationError / ConvergenceError / ResourceLimitError.
RunResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

// Reads the `price` column of a path CSV (as written by the single-zone and
// mean-field experiments). Requires exactly horizon + 1 rows.
std::vector<double> read_policy_csv(const std::filesystem::path& path, int horizon);

}  // namespace aoi
