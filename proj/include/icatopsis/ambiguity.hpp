#pragma once

// Removes the permutation and sign ambiguity of an ICA factorization under the
// assumption that every latent variable has a positive, row-dominant influence
// on its own criterion (positive diagonal of the mixing matrix, largest in
// absolute value within its row).

#include "icatopsis/ica.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace icatopsis {

struct PermutationStep {
  Eigen::MatrixXd mixing;
  Eigen::MatrixXd sources;
  /// Adjusted column i is original column permutation[i].
  std::vector<std::size_t> permutation;
  /// Rows where two columns tied for the largest magnitude.
  std::vector<std::size_t> tied_rows;
};

struct AdjustedSeparation {
  Eigen::MatrixXd mixing_adjusted;
  Eigen::MatrixXd sources_adjusted;
  std::vector<std::size_t> permutation_applied;
  std::vector<int> signs_applied;
  std::vector<std::size_t> tied_rows;
};

/// Row by row, moves the largest-magnitude column among those not yet claimed
/// onto the diagonal, swapping source rows alongside.
PermutationStep correct_permutation(const Eigen::MatrixXd& mixing, const Eigen::MatrixXd& sources);

/// Negates every column with a negative diagonal entry and its source row.
AdjustedSeparation correct_sign(const PermutationStep& permuted);

AdjustedSeparation resolve(const Eigen::MatrixXd& mixing, const Eigen::MatrixXd& sources);
AdjustedSeparation resolve(const SeparationResult& separation);

}  // namespace icatopsis
