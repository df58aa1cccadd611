#include "icatopsis/ambiguity.hpp"

#include "icatopsis/errors.hpp"

#include <cmath>
#include <numeric>
#include <utility>

namespace icatopsis {

PermutationStep correct_permutation(const Eigen::MatrixXd& mixing, const Eigen::MatrixXd& sources) {
  const Eigen::Index n = mixing.rows();
  if (n == 0 || mixing.cols() != n) throw DimensionMismatch("correct_permutation: mixing matrix must be square");
  if (sources.rows() != n) throw DimensionMismatch("correct_permutation: one source row per mixing column required");
  if (!mixing.allFinite() || !(std::abs(mixing.determinant()) > 0.0)) {
    throw SingularMatrix("correct_permutation: mixing matrix is singular");
  }

  PermutationStep step{mixing, sources, std::vector<std::size_t>(static_cast<std::size_t>(n)), {}};
  std::iota(step.permutation.begin(), step.permutation.end(), std::size_t{0});

  // Columns [0, row) are already claimed; pick among the rest.
  for (Eigen::Index row = 0; row < n; ++row) {
    Eigen::Index best = row;
    double best_abs = std::abs(step.mixing(row, row));
    bool tie = false;
    for (Eigen::Index col = row + 1; col < n; ++col) {
      const double a = std::abs(step.mixing(row, col));
      if (a > best_abs) {
        best = col;
        best_abs = a;
        tie = false;
      } else if (a == best_abs) {
        tie = true;
      }
    }
    if (tie) step.tied_rows.push_back(static_cast<std::size_t>(row));
    if (best != row) {
      step.mixing.col(row).swap(step.mixing.col(best));
      step.sources.row(row).swap(step.sources.row(best));
      std::swap(step.permutation[static_cast<std::size_t>(row)], step.permutation[static_cast<std::size_t>(best)]);
    }
  }
  return step;
}

AdjustedSeparation correct_sign(const PermutationStep& permuted) {
  const Eigen::Index n = permuted.mixing.rows();
  AdjustedSeparation out{permuted.mixing, permuted.sources, permuted.permutation,
                         std::vector<int>(static_cast<std::size_t>(n), 1), permuted.tied_rows};
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = out.mixing_adjusted(i, i);
    if (d == 0.0) {
      throw ZeroDiagonal("ZeroDiagonal: adjusted mixing entry (" + std::to_string(i + 1) + "," +
                         std::to_string(i + 1) + ") is zero");
    }
    if (d < 0.0) {
      out.mixing_adjusted.col(i) = -out.mixing_adjusted.col(i);
      out.sources_adjusted.row(i) = -out.sources_adjusted.row(i);
      out.signs_applied[static_cast<std::size_t>(i)] = -1;
    }
  }
  return out;
}

AdjustedSeparation resolve(const Eigen::MatrixXd& mixing, const Eigen::MatrixXd& sources) {
  return correct_sign(correct_permutation(mixing, sources));
}

AdjustedSeparation resolve(const SeparationResult& separation) {
  return resolve(separation.estimated_mixing, separation.sources);
}

}  // namespace icatopsis
