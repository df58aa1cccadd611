#pragma once

// Test-only oracles, independent of the library code paths they check.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace icatopsis::testing {

inline double correlation(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
  const Eigen::ArrayXd x = a.array() - a.mean();
  const Eigen::ArrayXd y = b.array() - b.mean();
  return (x * y).sum() / std::sqrt(x.square().sum() * y.square().sum());
}

/// For each true source, |corr| with its best-matching estimate, matching
/// greedily by largest |corr| without reusing an estimate.
inline std::vector<double> matched_abs_correlations(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& estimate) {
  const Eigen::Index n = truth.rows();
  Eigen::MatrixXd c(n, estimate.rows());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < estimate.rows(); ++j) c(i, j) = std::abs(correlation(truth.row(i), estimate.row(j)));
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  std::vector<bool> row_used(static_cast<std::size_t>(n)), col_used(static_cast<std::size_t>(estimate.rows()));
  for (Eigen::Index step = 0; step < n; ++step) {
    double best = -1.0;
    Eigen::Index bi = 0, bj = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < estimate.rows(); ++j)
        if (!row_used[i] && !col_used[j] && c(i, j) > best) best = c(i, j), bi = i, bj = j;
    row_used[bi] = col_used[bj] = true;
    out[static_cast<std::size_t>(bi)] = best;
  }
  return out;
}

inline Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& rows_are_channels) {
  const Eigen::MatrixXd c = rows_are_channels.colwise() - rows_are_channels.rowwise().mean();
  return c * c.transpose() / static_cast<double>(rows_are_channels.cols() - 1);
}

/// Brute-force normalized Kendall distance over all pairs.
inline double brute_force_tau(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  const std::size_t k = a.size();
  std::vector<std::size_t> pa(k), pb(k);
  for (std::size_t p = 0; p < k; ++p) pa[a[p]] = p, pb[b[p]] = p;
  std::size_t disagree = 0;
  for (std::size_t x = 0; x < k; ++x)
    for (std::size_t y = x + 1; y < k; ++y)
      if ((pa[x] < pa[y]) != (pb[x] < pb[y])) ++disagree;
  return static_cast<double>(disagree) / (static_cast<double>(k) * static_cast<double>(k - 1) / 2.0);
}

inline std::vector<std::size_t> random_permutation(std::size_t k, std::mt19937_64& rng) {
  std::vector<std::size_t> p(k);
  for (std::size_t i = 0; i < k; ++i) p[i] = i;
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

inline Eigen::MatrixXd uniform_sources(Eigen::Index n, Eigen::Index k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd s(n, k);
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index i = 0; i < n; ++i) s(i, j) = u(rng);
  return s;
}

inline Eigen::MatrixXd reference_mixing() {
  Eigen::MatrixXd a(2, 2);
  a << 1.00, -0.15, 0.30, 1.00;
  return a;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("icatopsis_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace icatopsis::testing
