#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sabc/abc.hpp"

namespace sabc {

/// Adjustment could not be computed; `reason` says why.
struct NotPossible {
  std::string reason;
};

using ModelProbAdjustment = std::variant<std::vector<double>, NotPossible>;

/// Multinomial regression of accepted model labels on accepted summaries,
/// evaluated at the observed summary. Under the uniform scheme the fitted
/// probabilities are reweighted by `prior` (empty = uniform). Returns
/// NotPossible when the accepted summaries do not vary or all acceptances
/// are for one model.
ModelProbAdjustment adjust_model_probs(const SimBank& bank, const AbcResult& result,
                                       const SummaryVector& obs_summary,
                                       std::span<const double> prior = {});

/// Linear regression adjustment of the accepted parameters of one model:
/// fits theta = a + B s + e on the accepted pairs and returns
/// a + B s_obs + e_i for every accepted record (acceptance order). Throws
/// std::invalid_argument with fewer than dim(s) + 2 acceptances.
std::vector<ParamVector> adjust_params(const SimBank& bank, const AbcResult& result,
                                       int model_index, const SummaryVector& obs_summary);

}  // namespace sabc
