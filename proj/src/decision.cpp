#include "icatopsis/decision.hpp"

#include "icatopsis/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace icatopsis {

namespace {

std::vector<std::string> numbered_labels(char prefix, Eigen::Index count) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(count));
  for (Eigen::Index i = 0; i < count; ++i) labels.push_back(prefix + std::to_string(i + 1));
  return labels;
}

void require_same_shape(const Eigen::MatrixXd& matrix, Eigen::Index columns, const char* what) {
  if (matrix.cols() != columns) {
    throw DimensionMismatch(std::string(what) + ": expected " + std::to_string(columns) +
                            " columns, got " + std::to_string(matrix.cols()));
  }
}

}  // namespace

DecisionMatrix::DecisionMatrix(Eigen::MatrixXd values)
    : DecisionMatrix(values, numbered_labels('A', values.rows()), numbered_labels('C', values.cols())) {}

DecisionMatrix::DecisionMatrix(Eigen::MatrixXd values, std::vector<std::string> alternative_labels,
                               std::vector<std::string> criterion_labels)
    : values_(std::move(values)),
      alternatives_(std::move(alternative_labels)),
      criteria_(std::move(criterion_labels)) {
  if (values_.rows() < 2 || values_.cols() < 1) {
    throw InvalidInput("DecisionMatrix needs at least 2 alternatives and 1 criterion");
  }
  if (alternatives_.size() != static_cast<std::size_t>(values_.rows()) ||
      criteria_.size() != static_cast<std::size_t>(values_.cols())) {
    throw DimensionMismatch("DecisionMatrix label counts do not match the value shape");
  }
  if (!values_.allFinite()) throw InvalidInput("DecisionMatrix contains NaN or infinite entries");
}

bool DecisionMatrix::operator==(const DecisionMatrix& other) const {
  return values_.rows() == other.values_.rows() && values_.cols() == other.values_.cols() &&
         values_ == other.values_ && alternatives_ == other.alternatives_ && criteria_ == other.criteria_;
}

WeightVector::WeightVector(std::vector<double> weights) {
  if (weights.empty()) throw InvalidInput("WeightVector is empty");
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw InvalidInput("weights must be finite and non-negative");
    total += w;
  }
  if (total <= 0.0) throw InvalidInput("at least one weight must be positive");
  weights_ = Eigen::Map<const Eigen::VectorXd>(weights.data(), static_cast<Eigen::Index>(weights.size())) / total;
}

WeightVector WeightVector::uniform(std::size_t criteria) {
  return WeightVector(std::vector<double>(criteria, 1.0));
}

std::vector<std::size_t> Ranking::positions() const {
  std::vector<std::size_t> pos(order.size());
  for (std::size_t p = 0; p < order.size(); ++p) pos[order[p]] = p + 1;
  return pos;
}

Eigen::MatrixXd normalize(const DecisionMatrix& decision) {
  const Eigen::MatrixXd& v = decision.values();
  Eigen::MatrixXd r(v.rows(), v.cols());
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    const double norm = v.col(j).norm();
    if (norm == 0.0) throw ZeroColumn(decision.criterion_labels()[static_cast<std::size_t>(j)]);
    r.col(j) = v.col(j) / norm;
  }
  return r;
}

Eigen::MatrixXd apply_weights(const Eigen::MatrixXd& normalized, const WeightVector& weights) {
  require_same_shape(normalized, static_cast<Eigen::Index>(weights.size()), "apply_weights");
  return normalized * weights.values().asDiagonal();
}

IdealSolutions ideal_solutions(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() < 1 || matrix.cols() < 1) throw InvalidInput("ideal_solutions: empty matrix");
  return {matrix.colwise().maxCoeff().transpose(), matrix.colwise().minCoeff().transpose()};
}

Distances euclidean_distances(const Eigen::MatrixXd& weighted, const IdealSolutions& ideals) {
  require_same_shape(weighted, ideals.positive.size(), "euclidean_distances");
  require_same_shape(weighted, ideals.negative.size(), "euclidean_distances");
  Distances d{Eigen::VectorXd(weighted.rows()), Eigen::VectorXd(weighted.rows())};
  for (Eigen::Index i = 0; i < weighted.rows(); ++i) {
    d.to_positive(i) = (weighted.row(i).transpose() - ideals.positive).norm();
    d.to_negative(i) = (weighted.row(i).transpose() - ideals.negative).norm();
  }
  return d;
}

Similarity similarity(const Eigen::VectorXd& to_positive, const Eigen::VectorXd& to_negative) {
  if (to_positive.size() != to_negative.size()) throw DimensionMismatch("similarity: length mismatch");
  Similarity s{Eigen::VectorXd(to_positive.size()), {}};
  for (Eigen::Index i = 0; i < to_positive.size(); ++i) {
    const double total = to_positive(i) + to_negative(i);
    if (total > 0.0) {
      s.scores(i) = to_negative(i) / total;
    } else {
      s.scores(i) = 0.5;
      s.degenerate.push_back(static_cast<std::size_t>(i));
    }
  }
  return s;
}

Ranking rank_by_score(const Similarity& sim) {
  Ranking ranking;
  ranking.scores = sim.scores;
  ranking.degenerate = sim.degenerate;
  ranking.order.resize(static_cast<std::size_t>(sim.scores.size()));
  std::iota(ranking.order.begin(), ranking.order.end(), std::size_t{0});
  std::stable_sort(ranking.order.begin(), ranking.order.end(), [&](std::size_t a, std::size_t b) {
    return sim.scores(static_cast<Eigen::Index>(a)) > sim.scores(static_cast<Eigen::Index>(b));
  });
  return ranking;
}

Ranking topsis_euclidean(const DecisionMatrix& decision, const WeightVector& weights) {
  if (weights.size() != decision.criteria()) throw DimensionMismatch("weights do not match criteria");
  const Eigen::MatrixXd weighted = apply_weights(normalize(decision), weights);
  const Distances d = euclidean_distances(weighted, ideal_solutions(weighted));
  return rank_by_score(similarity(d.to_positive, d.to_negative));
}

Eigen::MatrixXd covariance(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() < 2) throw InvalidInput("covariance needs at least 2 rows");
  const Eigen::MatrixXd centered = matrix.rowwise() - matrix.colwise().mean();
  Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(matrix.rows() - 1);
  // exact symmetry
  return (cov + cov.transpose()) * 0.5;
}

Distances mahalanobis_distances(const Eigen::MatrixXd& normalized, const IdealSolutions& ideals,
                                const WeightVector& weights, const Eigen::MatrixXd& cov) {
  const Eigen::Index m = normalized.cols();
  require_same_shape(normalized, static_cast<Eigen::Index>(weights.size()), "mahalanobis_distances");
  require_same_shape(normalized, ideals.positive.size(), "mahalanobis_distances");
  if (cov.rows() != m || cov.cols() != m) throw DimensionMismatch("covariance must be MxM");

  const double ridge = kCovarianceRidge * cov.trace() / static_cast<double>(m);
  const Eigen::MatrixXd regularized = cov + ridge * Eigen::MatrixXd::Identity(m, m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(regularized);
  if (eig.info() != Eigen::Success) throw SingularCovariance("covariance eigendecomposition failed");
  const double smallest = eig.eigenvalues().minCoeff();
  const double largest = eig.eigenvalues().maxCoeff();
  if (!(smallest > 0.0) || largest / smallest > kMaxCovarianceCondition) {
    throw SingularCovariance("covariance is singular (condition number above 1e12 after ridge)");
  }
  const Eigen::MatrixXd inverse =
      eig.eigenvectors() * eig.eigenvalues().cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
  const Eigen::MatrixXd delta = weights.diagonal();
  const Eigen::MatrixXd metric = delta.transpose() * inverse * delta;

  auto quadratic = [&](const Eigen::VectorXd& d) { return std::sqrt(std::max(0.0, d.dot(metric * d))); };
  Distances out{Eigen::VectorXd(normalized.rows()), Eigen::VectorXd(normalized.rows())};
  for (Eigen::Index i = 0; i < normalized.rows(); ++i) {
    const Eigen::VectorXd r = normalized.row(i).transpose();
    out.to_positive(i) = quadratic(r - ideals.positive);
    out.to_negative(i) = quadratic(r - ideals.negative);
  }
  return out;
}

Ranking topsis_mahalanobis(const DecisionMatrix& decision, const WeightVector& weights) {
  if (weights.size() != decision.criteria()) throw DimensionMismatch("weights do not match criteria");
  const Eigen::MatrixXd normalized = normalize(decision);
  const Distances d =
      mahalanobis_distances(normalized, ideal_solutions(normalized), weights, covariance(normalized));
  return rank_by_score(similarity(d.to_positive, d.to_negative));
}

}  // namespace icatopsis
