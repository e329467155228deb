#include "sabc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "sabc/error.hpp"
#include "sabc/special.hpp"

namespace sabc {
namespace {

std::vector<double> prior_or_uniform(std::span<const double> prior, std::size_t n) {
  if (prior.empty()) return std::vector<double>(n, 1.0 / static_cast<double>(n));
  if (prior.size() != n) throw DimensionError("prior length does not match model count");
  return {prior.begin(), prior.end()};
}

std::size_t outcome_index(const DiscreteModelTable& table, const Dataset& x) {
  const auto it = std::find(table.outcomes.begin(), table.outcomes.end(), x);
  if (it == table.outcomes.end()) throw std::invalid_argument("observation not in the data space");
  return static_cast<std::size_t>(it - table.outcomes.begin());
}

}  // namespace

ExactPosterior posterior_from_log_evidences(std::vector<double> log_evidences,
                                            std::span<const double> prior_in) {
  const std::vector<double> prior = prior_or_uniform(prior_in, log_evidences.size());
  ExactPosterior out;
  out.probabilities.resize(log_evidences.size());
  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < log_evidences.size(); ++i) {
    if (prior[i] > 0) shift = std::max(shift, log_evidences[i]);
  }
  if (!std::isfinite(shift)) throw std::invalid_argument("no model has positive posterior weight");
  double total = 0.0;
  for (std::size_t i = 0; i < log_evidences.size(); ++i) {
    out.probabilities[i] = prior[i] > 0 ? prior[i] * std::exp(log_evidences[i] - shift) : 0.0;
    total += out.probabilities[i];
  }
  for (auto& p : out.probabilities) p /= total;
  out.log_evidences = std::move(log_evidences);
  return out;
}

ExactPosterior exact_posterior(const std::vector<ModelSpec>& models, const Dataset& data,
                               std::span<const double> prior) {
  std::vector<double> log_ev;
  log_ev.reserve(models.size());
  for (const auto& m : models) {
    if (!m.has_exact_marginal()) {
      throw UnsupportedModelError("no exact evidence for " + m.id);
    }
    log_ev.push_back(exact_log_marginal(m, data));
  }
  return posterior_from_log_evidences(std::move(log_ev), prior);
}

DiscreteModelTable binomial_toy(int trials, const std::vector<double>& success_probs) {
  DiscreteModelTable t;
  for (int x = 0; x <= trials; ++x) t.outcomes.push_back({static_cast<double>(x)});
  for (double p : success_probs) {
    std::vector<double> pmf;
    for (int x = 0; x <= trials; ++x) {
      pmf.push_back(std::exp(log_choose(trials, x) + x * std::log(p) +
                             (trials - x) * std::log1p(-p)));
    }
    t.pmf.push_back(std::move(pmf));
  }
  return t;
}

std::vector<double> enumerated_abc_posterior(const DiscreteModelTable& table, const Dataset& x_obs,
                                             const SummaryMap& summary,
                                             std::span<const double> prior_in) {
  const std::size_t m = table.n_models();
  const std::vector<double> prior = prior_or_uniform(prior_in, m);
  const SummaryVector target = summary(x_obs);

  std::vector<double> joint(m, 0.0);
  for (std::size_t k = 0; k < table.outcomes.size(); ++k) {
    if (summary(table.outcomes[k]) != target) continue;
    for (std::size_t i = 0; i < m; ++i) joint[i] += prior[i] * table.pmf[i][k];
  }
  const double total = std::accumulate(joint.begin(), joint.end(), 0.0);
  if (!(total > 0)) throw std::invalid_argument("S(x_obs) has zero probability");
  for (auto& p : joint) p /= total;
  return joint;
}

SummaryVector sufficient_statistic(const DiscreteModelTable& table, const Dataset& x) {
  const std::size_t k = outcome_index(table, x);
  double total = 0.0;
  for (const auto& pmf : table.pmf) total += pmf[k];
  if (!(total > 0)) throw std::invalid_argument("outcome has zero probability under every model");
  SummaryVector t;
  for (std::size_t i = 0; i + 1 < table.n_models(); ++i) t.push_back(table.pmf[i][k] / total);
  return t;
}

}  // namespace sabc
