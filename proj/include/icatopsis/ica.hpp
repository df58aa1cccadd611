#pragma once

// Independent component analysis for the determined case (as many sources as
// observed channels): centering, eigen-whitening, symmetric FastICA and
// natural-gradient (extended) Infomax.

#include "icatopsis/errors.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace icatopsis {

/// Observations arranged channels x samples.
class MixedData {
 public:
  explicit MixedData(Eigen::MatrixXd samples);

  const Eigen::MatrixXd& samples() const noexcept { return samples_; }
  Eigen::Index channels() const noexcept { return samples_.rows(); }
  Eigen::Index count() const noexcept { return samples_.cols(); }

 private:
  Eigen::MatrixXd samples_;
};

struct WhiteningResult {
  Eigen::MatrixXd whitened;
  Eigen::MatrixXd whitening_matrix;
  Eigen::VectorXd mean;
};

enum class IcaAlgorithm { FastICA, InfomaxExtended, InfomaxLogistic };

std::string_view to_string(IcaAlgorithm algorithm);
IcaAlgorithm parse_algorithm(std::string_view name);

struct IcaOptions {
  std::uint64_t seed = 0;
  /// Iteration cap per attempt; defaults to 1000 (FastICA) or 2000 epochs (Infomax).
  std::optional<int> max_iter;
  /// Stopping threshold; defaults to 1e-8 on 1 - min|<w_new, w_old>| (FastICA)
  /// or 1e-7 on the Frobenius norm of the update (Infomax).
  std::optional<double> tolerance;
  /// Extra attempts from a fresh random start after a failed one.
  int restarts = 5;
  /// Infomax step size on the sample-averaged natural gradient.
  double learning_rate = 0.1;
  /// Infomax step-size factor applied after a divergent attempt.
  double anneal = 0.9;
};

struct SeparationResult {
  /// B: maps centered observations to sources.
  Eigen::MatrixXd separating;
  /// B^-1: maps sources back to centered observations.
  Eigen::MatrixXd estimated_mixing;
  /// N x K, zero mean and unit variance per row.
  Eigen::MatrixXd sources;
  Eigen::VectorXd mean;
  int iterations = 0;
  bool converged = false;
  IcaAlgorithm algorithm = IcaAlgorithm::FastICA;
};

/// Raised when no attempt met the stopping rule; carries the best iterate.
class NotConverged : public Error {
 public:
  explicit NotConverged(SeparationResult best)
      : Error("NotConverged: " + std::string(to_string(best.algorithm)) + " stopped after " +
              std::to_string(best.iterations) + " iterations"),
        best_(std::move(best)) {}
  const SeparationResult& best() const noexcept { return best_; }

 private:
  SeparationResult best_;
};

/// Minimum samples per channel accepted by the separators.
inline constexpr Eigen::Index kMinSamplesPerChannel = 10;

WhiteningResult center_whiten(const MixedData& data);

SeparationResult fastica(const MixedData& data, const IcaOptions& options = {});

/// `variant` selects extended (kurtosis-adaptive) or plain logistic Infomax.
SeparationResult infomax(const MixedData& data, const IcaOptions& options = {},
                         IcaAlgorithm variant = IcaAlgorithm::InfomaxExtended);

/// Dispatches on `algorithm`.
SeparationResult separate(const MixedData& data, IcaAlgorithm algorithm, const IcaOptions& options = {});

/// Inverse of a square separating matrix.
Eigen::MatrixXd estimated_mixing(const Eigen::MatrixXd& separating);

}  // namespace icatopsis
