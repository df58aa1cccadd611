#include "icatopsis/pipeline.hpp"

#include "icatopsis/errors.hpp"

#include <string>

namespace icatopsis {

std::string_view method_name(Method method) {
  switch (method) {
    case Method::TopsisE: return "topsis-e";
    case Method::TopsisM: return "topsis-m";
    case Method::IcaFastIca: return "ica-topsis-fastica";
    case Method::IcaInfomax: return "ica-topsis-infomax";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : kAllMethods)
    if (method_name(m) == name) return m;
  throw InvalidInput("unknown method '" + std::string(name) +
                     "' (expected topsis-e, topsis-m, ica-topsis-fastica or ica-topsis-infomax)");
}

IcaTopsisOutcome ica_topsis(const DecisionMatrix& decision, const WeightVector& weights, IcaAlgorithm algorithm,
                            const IcaOptions& options) {
  if (weights.size() != decision.criteria()) throw DimensionMismatch("weights do not match criteria");
  const MixedData observations(decision.values().transpose());
  SeparationResult separation;
  try {
    separation = separate(observations, algorithm, options);
  } catch (const NotConverged& e) {
    separation = e.best();
  }
  AdjustedSeparation adjusted = resolve(separation);
  const DecisionMatrix latent(adjusted.sources_adjusted.transpose(), decision.alternative_labels(),
                              decision.criterion_labels());
  Ranking ranking = topsis_euclidean(latent, weights);
  return {std::move(ranking), std::move(separation), std::move(adjusted)};
}

MethodRanking rank_with(Method method, const DecisionMatrix& decision, const WeightVector& weights,
                        const IcaOptions& options) {
  switch (method) {
    case Method::TopsisE: return {topsis_euclidean(decision, weights), true};
    case Method::TopsisM: return {topsis_mahalanobis(decision, weights), true};
    case Method::IcaFastIca:
    case Method::IcaInfomax: {
      const auto algorithm = method == Method::IcaFastIca ? IcaAlgorithm::FastICA : IcaAlgorithm::InfomaxExtended;
      IcaTopsisOutcome outcome = ica_topsis(decision, weights, algorithm, options);
      return {std::move(outcome.ranking), outcome.separation.converged};
    }
  }
  throw InvalidInput("unknown method");
}

}  // namespace icatopsis
