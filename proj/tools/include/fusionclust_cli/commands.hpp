#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fusionclust_cli/serialize.hpp"

namespace fusionclust::cli {

enum class OutputFormat { json, csv };

struct CliConfig {
  /// path, bmt, cluster, population, table1, simulate-modality,
  /// simulate-k, simulate-scale or consistency.
  std::string subcommand;
  std::optional<std::string> input_path;
  std::optional<std::string> mixture_spec;
  double alpha = 0.1;
  std::uint64_t seed = 0;
  std::size_t replicates = 20;
  std::optional<std::size_t> n;
  OutputFormat output_format = OutputFormat::json;
  std::optional<std::string> output_path;
  bool adjustment_enabled = true;
  std::optional<double> grid_step;
  std::vector<std::size_t> n_list;
  std::size_t threads = 0;
  /// Emit wall-clock runtimes (off by default so output is reproducible).
  bool timing = false;

  /// Throws std::invalid_argument describing the first violated requirement.
  void validate() const;
};

const std::vector<std::string>& subcommands();

/// Overlays the keys of a JSON config object onto `config`. Accepted keys:
/// subcommand, input, mixture, alpha, seed, replicates, n, format, output,
/// adjustment, grid_step, n_list, threads, timing.
void apply_config(CliConfig& config, const Json& j);

struct CommandResult {
  int exit_code = 0;
  std::string output;
  std::string diagnostics;
};

/// Validates, dispatches and serializes; never throws. Errors give a
/// nonzero exit code and a message in `diagnostics`.
CommandResult run_command(const CliConfig& config);

}  // namespace fusionclust::cli
