#include "sabc/postprocess.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "sabc/error.hpp"
#include "sabc/regression.hpp"

namespace sabc {
namespace {

constexpr double kAdjustRidge = 1e-6;

}  // namespace

ModelProbAdjustment adjust_model_probs(const SimBank& bank, const AbcResult& result,
                                       const SummaryVector& obs_summary,
                                       std::span<const double> prior_in) {
  const auto n_models = static_cast<std::size_t>(bank.n_models);
  std::vector<double> prior(prior_in.begin(), prior_in.end());
  if (prior.empty()) prior.assign(n_models, 1.0 / static_cast<double>(n_models));
  if (prior.size() != n_models) throw DimensionError("prior length does not match model count");
  if (result.accepted.empty()) return NotPossible{"no accepted simulations"};

  // Classes that actually occur among the acceptances, remapped to 0..K-1.
  std::vector<int> class_of(n_models, -1);
  std::vector<int> model_of;
  for (std::size_t idx : result.accepted) {
    const auto m = static_cast<std::size_t>(bank.records[idx].model);
    if (class_of[m] < 0) {
      class_of[m] = static_cast<int>(model_of.size());
      model_of.push_back(static_cast<int>(m));
    }
  }
  if (model_of.size() < 2) return NotPossible{"all acceptances were for a single model"};

  const std::size_t dim = obs_summary.size();
  const std::size_t n = result.accepted.size();
  std::vector<std::size_t> varying;
  std::vector<double> mean(dim, 0.0);
  std::vector<double> sd(dim, 0.0);
  for (std::size_t c = 0; c < dim; ++c) {
    for (std::size_t idx : result.accepted) mean[c] += bank.records[idx].summary.at(c);
    mean[c] /= static_cast<double>(n);
    for (std::size_t idx : result.accepted) {
      const double d = bank.records[idx].summary[c] - mean[c];
      sd[c] += d * d;
    }
    sd[c] = n > 1 ? std::sqrt(sd[c] / static_cast<double>(n - 1)) : 0.0;
    if (sd[c] > 1e-12) varying.push_back(c);
  }
  if (varying.empty()) return NotPossible{"no variation in the accepted summaries"};

  const auto p = static_cast<Eigen::Index>(varying.size() + 1);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), p);
  std::vector<int> labels(n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto& rec = bank.records[result.accepted[r]];
    x(static_cast<Eigen::Index>(r), 0) = 1.0;
    for (std::size_t v = 0; v < varying.size(); ++v) {
      const std::size_t c = varying[v];
      x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(v + 1)) =
          (rec.summary[c] - mean[c]) / sd[c];
    }
    labels[r] = class_of[static_cast<std::size_t>(rec.model)];
  }
  Eigen::VectorXd obs_row(p);
  obs_row[0] = 1.0;
  for (std::size_t v = 0; v < varying.size(); ++v) {
    const std::size_t c = varying[v];
    obs_row[static_cast<Eigen::Index>(v + 1)] = (obs_summary[c] - mean[c]) / sd[c];
  }

  MultinomialFit fit;
  try {
    fit = fit_multinomial(x, labels, static_cast<int>(model_of.size()), kAdjustRidge);
  } catch (const DegenerateFitError& e) {
    return NotPossible{e.what()};
  }
  const Eigen::VectorXd g = fit.predict_row(obs_row);

  std::vector<double> probs(n_models, 0.0);
  for (std::size_t k = 0; k < model_of.size(); ++k) {
    const auto m = static_cast<std::size_t>(model_of[k]);
    probs[m] = g[static_cast<Eigen::Index>(k)];
    if (result.scheme == SamplingScheme::kUniformModels) probs[m] *= prior[m];
  }
  const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (!(total > 0)) return NotPossible{"adjusted probabilities have no mass"};
  for (auto& v : probs) v /= total;
  return probs;
}

std::vector<ParamVector> adjust_params(const SimBank& bank, const AbcResult& result,
                                       int model_index, const SummaryVector& obs_summary) {
  std::vector<const SimRecord*> recs;
  for (std::size_t idx : result.accepted) {
    if (bank.records[idx].model == model_index) recs.push_back(&bank.records[idx]);
  }
  const std::size_t dim = obs_summary.size();
  if (recs.size() < dim + 2) {
    throw std::invalid_argument("too few accepted simulations for regression adjustment (" +
                                std::to_string(recs.size()) + " < " + std::to_string(dim + 2) +
                                ")");
  }
  const std::size_t n = recs.size();
  const auto p = static_cast<Eigen::Index>(dim + 1);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), p);
  for (std::size_t r = 0; r < n; ++r) {
    x(static_cast<Eigen::Index>(r), 0) = 1.0;
    for (std::size_t c = 0; c < dim; ++c) {
      x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c + 1)) = recs[r]->summary.at(c);
    }
  }

  const std::size_t theta_dim = recs.front()->theta.size();
  std::vector<ParamVector> adjusted(n, ParamVector(theta_dim));
  for (std::size_t d = 0; d < theta_dim; ++d) {
    Eigen::VectorXd y(static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r) y[static_cast<Eigen::Index>(r)] = recs[r]->theta[d];
    const OlsFit fit = fit_ols(x, y);
    double fitted_obs = fit.beta[0];
    for (std::size_t c = 0; c < dim; ++c) {
      fitted_obs += fit.beta[static_cast<Eigen::Index>(c + 1)] * obs_summary[c];
    }
    for (std::size_t r = 0; r < n; ++r) {
      adjusted[r][d] = fitted_obs + fit.residuals[static_cast<Eigen::Index>(r)];
    }
  }
  return adjusted;
}

}  // namespace sabc
