#pragma once

// The four ranking methods behind one entry point. ICA-TOPSIS separates the
// criteria into latent variables, removes the permutation/sign ambiguity and
// ranks the adjusted (zero-mean, unit-variance) latents with Euclidean TOPSIS.

#include "icatopsis/ambiguity.hpp"
#include "icatopsis/decision.hpp"
#include "icatopsis/ica.hpp"

#include <array>
#include <cstddef>
#include <string_view>

namespace icatopsis {

enum class Method : std::size_t { TopsisE = 0, TopsisM = 1, IcaFastIca = 2, IcaInfomax = 3 };
inline constexpr std::array<Method, 4> kAllMethods{Method::TopsisE, Method::TopsisM, Method::IcaFastIca,
                                                   Method::IcaInfomax};
inline constexpr std::size_t kMethodCount = kAllMethods.size();

/// topsis-e | topsis-m | ica-topsis-fastica | ica-topsis-infomax
std::string_view method_name(Method method);
Method parse_method(std::string_view name);

struct IcaTopsisOutcome {
  Ranking ranking;
  SeparationResult separation;
  AdjustedSeparation adjusted;
};

/// Non-convergence is not an error here: the best iterate is ranked and
/// `separation.converged` is false.
IcaTopsisOutcome ica_topsis(const DecisionMatrix& decision, const WeightVector& weights, IcaAlgorithm algorithm,
                            const IcaOptions& options = {});

struct MethodRanking {
  Ranking ranking;
  bool converged = true;
};

MethodRanking rank_with(Method method, const DecisionMatrix& decision, const WeightVector& weights,
                        const IcaOptions& options = {});

}  // namespace icatopsis
