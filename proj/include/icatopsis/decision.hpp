#pragma once

// TOPSIS ranking with Euclidean (TOPSIS-E) and Mahalanobis (TOPSIS-M) distances.
// Every criterion is treated as a benefit criterion (larger is better).

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace icatopsis {

/// K alternatives (rows) evaluated on M criteria (columns).
class DecisionMatrix {
 public:
  /// Labels default to A1..AK and C1..CM.
  explicit DecisionMatrix(Eigen::MatrixXd values);
  DecisionMatrix(Eigen::MatrixXd values, std::vector<std::string> alternative_labels,
                 std::vector<std::string> criterion_labels);

  const Eigen::MatrixXd& values() const noexcept { return values_; }
  const std::vector<std::string>& alternative_labels() const noexcept { return alternatives_; }
  const std::vector<std::string>& criterion_labels() const noexcept { return criteria_; }
  std::size_t alternatives() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  std::size_t criteria() const noexcept { return static_cast<std::size_t>(values_.cols()); }

  bool operator==(const DecisionMatrix& other) const;

 private:
  Eigen::MatrixXd values_;
  std::vector<std::string> alternatives_;
  std::vector<std::string> criteria_;
};

/// Non-negative criterion importances, stored normalized to sum to one.
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> weights);
  static WeightVector uniform(std::size_t criteria);

  const Eigen::VectorXd& values() const noexcept { return weights_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(weights_.size()); }
  double operator[](std::size_t j) const { return weights_(static_cast<Eigen::Index>(j)); }
  /// diag(w_1, ..., w_M)
  Eigen::MatrixXd diagonal() const { return weights_.asDiagonal(); }

 private:
  Eigen::VectorXd weights_;
};

/// Alternatives sorted by similarity, best first. Equal scores keep ascending
/// alternative index.
struct Ranking {
  std::vector<std::size_t> order;
  /// Similarity u_i indexed by alternative, not by position in `order`.
  Eigen::VectorXd scores;
  /// Alternatives whose D+ + D- was zero and were assigned u = 0.5.
  std::vector<std::size_t> degenerate;

  std::size_t size() const noexcept { return order.size(); }
  /// 1-based rank position of each alternative.
  std::vector<std::size_t> positions() const;
};

struct IdealSolutions {
  Eigen::VectorXd positive;
  Eigen::VectorXd negative;
};

struct Distances {
  Eigen::VectorXd to_positive;
  Eigen::VectorXd to_negative;
};

struct Similarity {
  Eigen::VectorXd scores;
  std::vector<std::size_t> degenerate;
};

Eigen::MatrixXd normalize(const DecisionMatrix& decision);
Eigen::MatrixXd apply_weights(const Eigen::MatrixXd& normalized, const WeightVector& weights);
IdealSolutions ideal_solutions(const Eigen::MatrixXd& matrix);
Distances euclidean_distances(const Eigen::MatrixXd& weighted, const IdealSolutions& ideals);

/// u_i = D-_i / (D+_i + D-_i); a zero denominator yields 0.5 and is reported.
Similarity similarity(const Eigen::VectorXd& to_positive, const Eigen::VectorXd& to_negative);

/// Sorts by descending score with ascending-index tie-break.
Ranking rank_by_score(const Similarity& similarity);

Ranking topsis_euclidean(const DecisionMatrix& decision, const WeightVector& weights);

/// Sample covariance of the rows (divisor K-1).
Eigen::MatrixXd covariance(const Eigen::MatrixXd& matrix);

/// Ridge added to the covariance before inversion, relative to trace/M.
inline constexpr double kCovarianceRidge = 1e-10;
/// Largest accepted condition number of the regularized covariance.
inline constexpr double kMaxCovarianceCondition = 1e12;

/// DM_i = sqrt(d^T D^T S^-1 D d) with d = r_i - r^+/- and D = diag(w).
/// The ideals must be built from the unweighted normalized matrix.
Distances mahalanobis_distances(const Eigen::MatrixXd& normalized, const IdealSolutions& ideals,
                                const WeightVector& weights, const Eigen::MatrixXd& covariance);

Ranking topsis_mahalanobis(const DecisionMatrix& decision, const WeightVector& weights);

}  // namespace icatopsis
