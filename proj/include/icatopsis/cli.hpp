#pragma once

// Subcommands of the `icatopsis` tool. Each returns the process exit status:
// 0 when the requested files were fully written and nothing was flagged,
// 1 on errors (nothing trustworthy written), 2 when ICA did not converge and
// the best iterate was written with a flagged header.

#include "icatopsis/ica.hpp"
#include "icatopsis/pipeline.hpp"
#include "icatopsis/simulation.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace icatopsis::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotConverged = 2;

/// First line of every file written from a non-converged separation.
inline constexpr const char* kNotConvergedFlag = "# status=not_converged";

enum class LogLevel { Quiet, Warn, Info };

/// Reads ICATOPSIS_LOG (quiet | warn | info); defaults to warn.
LogLevel log_level_from_env();

struct RankOptions {
  std::filesystem::path input;
  std::filesystem::path output;
  /// Inline list or path; empty means uniform weights.
  std::string weights;
  Method method = Method::TopsisE;
  IcaOptions ica;
};

struct SeparateOptions {
  std::filesystem::path input;
  std::string output_prefix;
  IcaAlgorithm algorithm = IcaAlgorithm::FastICA;
  IcaOptions ica;
  /// Skips ICA and factors the observations with this mixing estimate.
  std::optional<std::filesystem::path> estimated_mixing;
};

struct ExperimentOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> realizations;
  std::optional<std::vector<double>> snr_grid;
  std::optional<unsigned> threads;
  std::filesystem::path output;
};

int cmd_rank(const RankOptions& options, std::ostream& log, LogLevel level = LogLevel::Warn);
int cmd_separate(const SeparateOptions& options, std::ostream& log, LogLevel level = LogLevel::Warn);
int cmd_experiment(const ExperimentOptions& options, std::ostream& log, LogLevel level = LogLevel::Warn);

/// Defaults, then the JSON config file, then command-line overrides.
ExperimentConfig resolve_experiment_config(const ExperimentOptions& options);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// method,snr_db,mean_tau,std_tau,realizations,failures
std::string format_experiment_csv(const ExperimentResult& result);

std::vector<double> parse_number_list(const std::string& text);

/// Parses argv and dispatches; never throws.
int run(int argc, char** argv);

}  // namespace icatopsis::cli
