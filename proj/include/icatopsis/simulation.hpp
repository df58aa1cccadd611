#pragma once

// Synthetic decision problems built from uniform latent variables, a fixed
// linear mixing and additive white Gaussian noise, plus the Monte-Carlo sweep
// comparing TOPSIS-E, TOPSIS-M and ICA-TOPSIS against the latent ground truth.

#include "icatopsis/decision.hpp"
#include "icatopsis/ica.hpp"
#include "icatopsis/pipeline.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace icatopsis {

/// Square mixing matrix whose diagonal is positive and strictly dominates its
/// row in absolute value.
class MixingSpec {
 public:
  explicit MixingSpec(Eigen::MatrixXd matrix, std::string description = {});
  /// [[1.00, -0.15], [0.30, 1.00]]
  static MixingSpec reference();

  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  Eigen::Index latent_count() const noexcept { return matrix_.rows(); }
  const std::string& description() const noexcept { return description_; }

 private:
  Eigen::MatrixXd matrix_;
  std::string description_;
};

/// Per-channel signal-to-noise ratio in dB, within (0, 50].
class NoiseSpec {
 public:
  explicit NoiseSpec(double snr_db);
  double snr_db() const noexcept { return snr_db_; }
  /// sigma_noise^2 / sigma_signal^2
  double noise_to_signal() const noexcept;

 private:
  double snr_db_;
};

struct ExperimentConfig {
  std::size_t alternatives = 100;
  MixingSpec mixing = MixingSpec::reference();
  WeightVector weights = WeightVector({0.5, 0.5});
  std::vector<double> snr_grid_db{5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
  std::size_t realizations = 1000;
  std::uint64_t seed = 2018;
  std::vector<Method> methods{kAllMethods.begin(), kAllMethods.end()};
  IcaOptions ica;
  /// Worker threads; 0 picks hardware concurrency.
  unsigned threads = 0;

  /// Throws InvalidInput when a field is out of range.
  void validate() const;
};

struct MethodOutcome {
  double tau = 0.0;
  bool failed = false;
  std::string failure;
};

struct RealizationRecord {
  std::array<std::optional<MethodOutcome>, kMethodCount> outcomes;
  /// Ground truth scored against itself; always zero.
  double ground_truth_tau = 0.0;

  const std::optional<MethodOutcome>& operator[](Method m) const { return outcomes[static_cast<std::size_t>(m)]; }
};

struct CellSummary {
  Method method;
  double snr_db;
  double mean_tau;
  double std_tau;
  std::size_t realizations;
  std::size_t failures;
};

struct ExperimentResult {
  /// Ordered by method (config order), then SNR (grid order).
  std::vector<CellSummary> cells;
  /// Per-realization records, indexed [snr_index * realizations + realization].
  std::vector<RealizationRecord> records;

  const CellSummary& at(Method method, double snr_db) const;
};

/// N x K i.i.d. Uniform[0, 1].
Eigen::MatrixXd generate_latents(std::size_t alternatives, std::size_t latents, std::uint64_t seed);

/// A * L
Eigen::MatrixXd mix(const Eigen::MatrixXd& latents, const MixingSpec& spec);

/// N x K i.i.d. standard normal draws.
Eigen::MatrixXd unit_noise(Eigen::Index channels, Eigen::Index samples, std::uint64_t seed);

/// Adds zero-mean Gaussian noise to every channel with variance
/// var(channel) / 10^(snr/10). The same seed reuses the same unit draws
/// regardless of the SNR.
Eigen::MatrixXd add_noise(const Eigen::MatrixXd& signal, const NoiseSpec& noise, std::uint64_t seed);

/// One Monte-Carlo draw. `noise` empty means noiseless observations.
RealizationRecord run_realization(const ExperimentConfig& config, const std::optional<NoiseSpec>& noise,
                                  std::size_t realization_index);

ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace icatopsis
