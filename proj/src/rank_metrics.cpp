#include "icatopsis/rank_metrics.hpp"

#include "icatopsis/errors.hpp"

#include <algorithm>
#include <vector>

namespace icatopsis {

namespace {

std::vector<std::size_t> positions_of(std::span<const std::size_t> order) {
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> pos(order.size(), unset);
  for (std::size_t p = 0; p < order.size(); ++p) {
    const std::size_t a = order[p];
    if (a >= order.size() || pos[a] != unset) throw InvalidInput("ranking is not a permutation of 0..K-1");
    pos[a] = p;
  }
  return pos;
}

// Inversions counted by bottom-up merge sort.
std::uint64_t count_inversions(std::vector<std::size_t>& values) {
  std::vector<std::size_t> buffer(values.size());
  std::uint64_t inversions = 0;
  const std::size_t n = values.size();
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo < n; lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, n);
      const std::size_t hi = std::min(lo + 2 * width, n);
      std::size_t i = lo, j = mid, out = lo;
      while (i < mid && j < hi) {
        if (values[j] < values[i]) {
          inversions += mid - i;
          buffer[out++] = values[j++];
        } else {
          buffer[out++] = values[i++];
        }
      }
      while (i < mid) buffer[out++] = values[i++];
      while (j < hi) buffer[out++] = values[j++];
    }
    values.swap(buffer);
  }
  return inversions;
}

}  // namespace

std::uint64_t pairwise_disagreements(std::span<const std::size_t> reference, std::span<const std::size_t> candidate) {
  if (reference.size() != candidate.size()) throw DimensionMismatch("rankings cover different numbers of alternatives");
  const std::vector<std::size_t> candidate_pos = positions_of(candidate);
  positions_of(reference);
  // Candidate positions listed in reference order; every inversion is a disagreement.
  std::vector<std::size_t> sequence(reference.size());
  for (std::size_t p = 0; p < reference.size(); ++p) sequence[p] = candidate_pos[reference[p]];
  return count_inversions(sequence);
}

double kendall_tau(std::span<const std::size_t> reference, std::span<const std::size_t> candidate) {
  const std::size_t k = reference.size();
  if (k < 2) throw InvalidInput("kendall_tau needs at least 2 alternatives");
  const double pairs = static_cast<double>(k) * static_cast<double>(k - 1) / 2.0;
  return static_cast<double>(pairwise_disagreements(reference, candidate)) / pairs;
}

double kendall_tau(const Ranking& reference, const Ranking& candidate) {
  return kendall_tau(std::span<const std::size_t>(reference.order), std::span<const std::size_t>(candidate.order));
}

}  // namespace icatopsis
