#pragma once

#include "icatopsis/decision.hpp"

#include <cstddef>
#include <cstdint>
#include <span>

namespace icatopsis {

/// Number of unordered alternative pairs ordered differently by the two
/// rankings. Both must be permutations of the same K alternatives.
std::uint64_t pairwise_disagreements(std::span<const std::size_t> reference, std::span<const std::size_t> candidate);

/// Normalized Kendall tau distance: disagreements / (K(K-1)/2), in [0, 1].
double kendall_tau(std::span<const std::size_t> reference, std::span<const std::size_t> candidate);
double kendall_tau(const Ranking& reference, const Ranking& candidate);

}  // namespace icatopsis
