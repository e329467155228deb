#pragma once

#include <functional>
#include <span>
#include <vector>

#include "sabc/models.hpp"
#include "sabc/summaries.hpp"

namespace sabc {

struct ExactPosterior {
  std::vector<double> log_evidences;
  std::vector<double> probabilities;
};

/// Normalizes exp(log_evidence) * prior with a max shift. An empty prior
/// means uniform.
ExactPosterior posterior_from_log_evidences(std::vector<double> log_evidences,
                                            std::span<const double> prior = {});

/// Exact model posterior from closed-form / quadrature evidences. Throws
/// UnsupportedModelError if any model lacks an exact marginal.
ExactPosterior exact_posterior(const std::vector<ModelSpec>& models, const Dataset& data,
                               std::span<const double> prior = {});

/// Models over a finite data space: pmf[m][k] = Pr(outcomes[k] | model m).
struct DiscreteModelTable {
  std::vector<Dataset> outcomes;
  std::vector<std::vector<double>> pmf;

  std::size_t n_models() const { return pmf.size(); }
};

/// Single observations from Binomial(trials, p) for each p.
DiscreteModelTable binomial_toy(int trials, const std::vector<double>& success_probs);

using SummaryMap = std::function<SummaryVector(const Dataset&)>;

/// Pr(M | S(x) = S(x_obs)) by exact summation over the data space (ABC with
/// h = 0 and exact matching). Throws std::invalid_argument when no outcome
/// with positive probability matches S(x_obs).
std::vector<double> enumerated_abc_posterior(const DiscreteModelTable& table, const Dataset& x_obs,
                                             const SummaryMap& summary,
                                             std::span<const double> prior = {});

/// T(x): the first M - 1 posterior model probabilities under a uniform model
/// prior, Pr(x | M_i) / sum_j Pr(x | M_j).
SummaryVector sufficient_statistic(const DiscreteModelTable& table, const Dataset& x);

}  // namespace sabc
