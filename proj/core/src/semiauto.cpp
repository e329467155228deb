#include "sabc/semiauto.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "sabc/error.hpp"
#include "sabc/parallel.hpp"
#include "sabc/regression.hpp"

namespace sabc {
namespace {

constexpr std::uint64_t kMaxRejectionTries = 100'000'000;
constexpr double kDegenerateWidening = 1e-6;
constexpr double kMinColumnSd = 1e-12;

std::vector<TrainingRegion> full_support_regions(const std::vector<ModelSpec>& models) {
  std::vector<TrainingRegion> out;
  out.reserve(models.size());
  for (const auto& m : models) out.push_back(full_support_region(m));
  return out;
}

bool inside(const std::vector<Interval>& bounds, const ParamVector& theta) {
  for (std::size_t d = 0; d < bounds.size(); ++d) {
    if (!bounds[d].contains(theta[d])) return false;
  }
  return true;
}

ParamVector sample_region_inverse_cdf(const ModelSpec& model, const TrainingRegion& region,
                                      Rng& rng) {
  ParamVector theta(model.param_dim());
  for (std::size_t d = 0; d < theta.size(); ++d) {
    const auto& prior = model.priors[d];
    const double lo = prior.cdf(region.bounds[d].lo);
    const double hi = prior.cdf(region.bounds[d].hi);
    theta[d] = std::clamp(prior.quantile(lo + (hi - lo) * uniform_open(rng)),
                          region.bounds[d].lo, region.bounds[d].hi);
  }
  return theta;
}

ParamVector sample_region_rejection(const ModelSpec& model, const TrainingRegion& region,
                                    Rng& rng) {
  for (std::uint64_t tries = 0; tries < kMaxRejectionTries; ++tries) {
    ParamVector theta = sample_prior(model, rng);
    if (inside(region.bounds, theta)) return theta;
  }
  throw DomainError("rejection sampling of training region for " + model.id +
                    " exhausted its budget; inflate the region");
}

std::vector<double> normalized_prior(std::span<const double> prior, std::size_t n_models) {
  if (prior.empty()) return uniform_prior(static_cast<int>(n_models));
  if (prior.size() != n_models) throw DimensionError("prior length does not match model count");
  std::vector<double> p(prior.begin(), prior.end());
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  if (!(total > 0)) throw DomainError("model prior has no mass");
  for (auto& x : p) {
    if (x < 0) throw DomainError("negative model prior mass");
    x /= total;
  }
  return p;
}

nlohmann::json real_or_null(double x) {
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

nlohmann::json stage_json(const StageSummary& s) {
  return {{"h", real_or_null(s.h)}, {"counts", s.counts}, {"dropped_components", s.dropped_components}};
}

}  // namespace

TrainingRegion full_support_region(const ModelSpec& model) {
  return {model.support(), 1.0};
}

double region_prior_mass(const ModelSpec& model, const std::vector<Interval>& bounds) {
  if (bounds.size() != model.param_dim()) throw DimensionError("region dimension mismatch");
  double mass = 1.0;
  for (std::size_t d = 0; d < bounds.size(); ++d) mass *= model.priors[d].mass(bounds[d]);
  return mass;
}

SimBank simulate_truncated(const std::vector<ModelSpec>& models,
                           const std::vector<TrainingRegion>& regions, std::size_t n_sims,
                           std::size_t n_obs, std::uint64_t seed, Stage stage, unsigned threads,
                           TruncatedSampler sampler) {
  if (models.empty()) throw std::invalid_argument("no models to simulate");
  if (regions.size() != models.size()) throw DimensionError("one region per model required");
  std::vector<bool> use_inverse(models.size(), false);
  for (std::size_t m = 0; m < models.size(); ++m) {
    const auto& region = regions[m];
    if (region.bounds.size() != models[m].param_dim()) {
      throw DimensionError("region dimension mismatch for " + models[m].id);
    }
    const double mass = region_prior_mass(models[m], region.bounds);
    if (!(mass > 0)) throw DomainError("training region for " + models[m].id + " has zero prior mass");
    if (mass < kMinRejectionRate) {
      if (sampler == TruncatedSampler::kRejection) {
        throw DomainError("training region for " + models[m].id + " has prior mass " +
                          std::to_string(mass) + " (< 1e-4); inflate the region");
      }
      use_inverse[m] = true;
    }
  }

  SimBank bank;
  bank.scheme = SamplingScheme::kUniformModels;
  bank.seed = seed;
  bank.n_models = static_cast<int>(models.size());
  bank.records.resize(n_sims);
  parallel_for(n_sims, threads, [&](std::size_t i) {
    Rng rng = make_rng(seed, stage, i);
    const std::size_t m = i % models.size();
    SimRecord& r = bank.records[i];
    r.sim_index = i;
    r.model = static_cast<int>(m);
    r.theta = use_inverse[m] ? sample_region_inverse_cdf(models[m], regions[m], rng)
                             : sample_region_rejection(models[m], regions[m], rng);
    r.data = simulate(models[m], r.theta, n_obs, rng);
  });
  return bank;
}

// ---------------------------------------------------------------------------
// Config

std::size_t PipelineConfig::pilot_sims() const {
  if (!runs_pilot()) return 0;
  return static_cast<std::size_t>(std::llround(pilot_fraction * static_cast<double>(total_sims)));
}

std::size_t PipelineConfig::training_sims() const { return total_sims - pilot_sims(); }

void PipelineConfig::validate() const {
  if (total_sims == 0) throw ConfigError("total_sims must be positive");
  if (n_obs == 0) throw ConfigError("n_obs must be positive");
  if (n_accept_main == 0) throw ConfigError("n_accept_main must be positive");
  if (ridge < 0) throw ConfigError("ridge must be non-negative");
  if (runs_pilot()) {
    if (!(pilot_fraction > 0 && pilot_fraction < 1)) {
      throw ConfigError("pilot_fraction must lie in (0, 1)");
    }
    if (n_accept_pilot == 0 || n_accept_pilot > pilot_sims()) {
      throw ConfigError("n_accept_pilot must be in [1, pilot sims]");
    }
  }
  if (n_accept_main > training_sims()) {
    throw ConfigError("n_accept_main exceeds the number of main-analysis simulations");
  }
}

// ---------------------------------------------------------------------------
// Pilot

TrainingRegion region_from_accepted(const ModelSpec& model,
                                    const std::vector<ParamVector>& accepted) {
  if (accepted.empty()) return full_support_region(model);
  const auto support = model.support();
  TrainingRegion region;
  region.bounds.resize(model.param_dim());
  for (std::size_t d = 0; d < model.param_dim(); ++d) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& theta : accepted) {
      lo = std::min(lo, theta[d]);
      hi = std::max(hi, theta[d]);
    }
    if (lo == hi) {
      const double pad = kDegenerateWidening * std::max(1.0, std::fabs(lo));
      lo -= pad;
      hi += pad;
    }
    region.bounds[d] = {std::max(lo, support[d].lo), std::min(hi, support[d].hi)};
  }
  region.prior_mass = region_prior_mass(model, region.bounds);
  return region;
}

PilotResult run_pilot(const std::vector<ModelSpec>& models, const Dataset& obs,
                      const PipelineConfig& cfg, std::uint64_t seed) {
  PilotResult out;
  out.bank = simulate_truncated(models, full_support_regions(models), cfg.pilot_sims(), cfg.n_obs,
                                seed, Stage::kPilot, cfg.threads);
  out.bank.apply_summary(cfg.pilot_summary);
  out.abc = rejection_abc(out.bank, cfg.pilot_summary.evaluate(obs), cfg.n_accept_pilot);
  for (std::size_t c : out.abc.scaling.dropped) {
    out.warnings.push_back("pilot: dropped constant summary component " + std::to_string(c));
  }

  std::vector<std::vector<ParamVector>> accepted(models.size());
  for (std::size_t idx : out.abc.accepted) {
    const auto& r = out.bank.records[idx];
    accepted[static_cast<std::size_t>(r.model)].push_back(r.theta);
  }
  for (std::size_t m = 0; m < models.size(); ++m) {
    if (accepted[m].empty()) {
      out.warnings.push_back("pilot: no acceptances for " + models[m].id +
                             "; training on the full prior support");
    }
    out.regions.push_back(region_from_accepted(models[m], accepted[m]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Summary fitting

ModelChoiceFit fit_model_choice_summaries(const SimBank& bank, double ridge, std::size_t basis_n) {
  const int n_models = bank.n_models;
  std::vector<std::size_t> per_model(static_cast<std::size_t>(std::max(n_models, 0)), 0);
  for (const auto& r : bank.records) ++per_model.at(static_cast<std::size_t>(r.model));
  const auto present = std::count_if(per_model.begin(), per_model.end(),
                                     [](std::size_t c) { return c > 0; });
  if (present < 2) throw std::invalid_argument("summary fitting needs at least two models in the bank");

  const auto p = static_cast<Eigen::Index>(basis_n + 1);
  ModelChoiceFit out;
  out.summary.basis_n = basis_n;
  for (int i = 0; i < n_models; ++i) {
    for (int j = i + 1; j < n_models; ++j) out.summary.pairs.emplace_back(i, j);
  }
  out.summary.coefficients =
      Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(out.summary.pairs.size()), p);

  for (std::size_t row = 0; row < out.summary.pairs.size(); ++row) {
    const auto [mi, mj] = out.summary.pairs[row];
    PairFitReport report;
    report.pair = {mi, mj};

    std::vector<const SimRecord*> subset;
    for (const auto& r : bank.records) {
      if (r.model == mi || r.model == mj) subset.push_back(&r);
    }
    Eigen::MatrixXd x(static_cast<Eigen::Index>(subset.size()), p);
    Eigen::VectorXd y(static_cast<Eigen::Index>(subset.size()));
    for (std::size_t k = 0; k < subset.size(); ++k) {
      const auto f = basis_expand(subset[k]->data, basis_n);
      x.row(static_cast<Eigen::Index>(k)) =
          Eigen::Map<const Eigen::RowVectorXd>(f.data(), p);
      y[static_cast<Eigen::Index>(k)] = subset[k]->model == mi ? 1.0 : 0.0;
    }

    // Standardize the non-constant columns; the ridge acts on this scale.
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd sd = Eigen::VectorXd::Ones(p);
    std::vector<Eigen::Index> active = {0};
    for (Eigen::Index c = 1; c < p; ++c) {
      mean[c] = x.col(c).mean();
      const double var = (x.col(c).array() - mean[c]).square().sum() /
                         std::max<double>(1.0, static_cast<double>(x.rows() - 1));
      sd[c] = std::sqrt(var);
      if (sd[c] > kMinColumnSd) active.push_back(c);
    }
    Eigen::MatrixXd z(x.rows(), static_cast<Eigen::Index>(active.size()));
    for (std::size_t a = 0; a < active.size(); ++a) {
      const Eigen::Index c = active[a];
      if (c == 0) {
        z.col(0) = x.col(0);
      } else {
        z.col(static_cast<Eigen::Index>(a)) = (x.col(c).array() - mean[c]) / sd[c];
      }
    }

    try {
      const LogisticFit fit = fit_logistic(z, y, ridge);
      report.deviance = fit.deviance;
      report.converged = fit.converged;
      report.iterations = fit.iterations;
      if (!fit.converged) {
        out.warnings.push_back("pair (" + std::to_string(mi) + "," + std::to_string(mj) +
                               "): logistic fit stopped before the score tolerance");
      }
      double intercept = fit.beta[0];
      for (std::size_t a = 1; a < active.size(); ++a) {
        const Eigen::Index c = active[a];
        const double b = fit.beta[static_cast<Eigen::Index>(a)] / sd[c];
        out.summary.coefficients(static_cast<Eigen::Index>(row), c) = b;
        intercept -= b * mean[c];
      }
      out.summary.coefficients(static_cast<Eigen::Index>(row), 0) = intercept;
    } catch (const DegenerateFitError& e) {
      report.degenerate = true;
      out.warnings.push_back("pair (" + std::to_string(mi) + "," + std::to_string(mj) +
                             "): degenerate fit, coefficients zeroed: " + e.what());
    }
    out.reports.push_back(report);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Correction and pipeline

std::vector<double> truncation_correct(const AbcResult& main,
                                       const std::vector<TrainingRegion>& regions,
                                       std::span<const double> prior) {
  if (regions.size() != main.counts.size() || prior.size() != main.counts.size()) {
    throw DimensionError("counts, regions and prior must have one entry per model");
  }
  const double top = prior.empty() ? 1.0 : *std::max_element(prior.begin(), prior.end());
  std::vector<double> w(main.counts.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = static_cast<double>(main.counts[i]) * regions[i].prior_mass;
    if (main.scheme == SamplingScheme::kUniformModels && top > 0) w[i] *= prior[i] / top;
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(total > 0)) throw std::invalid_argument("all truncation-corrected weights are zero");
  for (auto& x : w) x /= total;
  return w;
}

PipelineOutput semiauto_pipeline(const std::vector<ModelSpec>& models, const Dataset& obs,
                                 const PipelineConfig& cfg, std::uint64_t seed,
                                 std::span<const double> prior_in) {
  cfg.validate();
  if (models.size() < 2) throw ConfigError("model choice needs at least two models");
  if (obs.size() != cfg.n_obs) {
    throw DimensionError("observed dataset has " + std::to_string(obs.size()) +
                         " values, configuration expects " + std::to_string(cfg.n_obs));
  }
  const std::vector<double> prior = normalized_prior(prior_in, models.size());

  PipelineOutput out;
  PipelineDiagnostics& diag = out.diagnostics;
  diag.algorithm = cfg.truncate ? 4 : 3;
  diag.seed = seed;
  for (const auto& m : models) diag.model_ids.push_back(m.id);

  std::vector<TrainingRegion> regions = full_support_regions(models);
  if (cfg.truncate && cfg.fixed_regions) {
    regions = *cfg.fixed_regions;
    if (regions.size() != models.size()) throw ConfigError("one fixed region per model required");
    for (std::size_t m = 0; m < models.size(); ++m) {
      regions[m].prior_mass = region_prior_mass(models[m], regions[m].bounds);
    }
  } else if (cfg.runs_pilot()) {
    PilotResult pilot = run_pilot(models, obs, cfg, seed);
    regions = std::move(pilot.regions);
    diag.pilot = StageSummary{pilot.abc.h, pilot.abc.counts, pilot.abc.scaling.dropped};
    diag.warnings.insert(diag.warnings.end(), pilot.warnings.begin(), pilot.warnings.end());
  }
  for (std::size_t m = 0; m < models.size(); ++m) {
    if (regions[m].prior_mass < kMinRejectionRate) {
      diag.warnings.push_back("region for " + models[m].id +
                              " below rejection-sampling rate; using inverse-CDF sampling");
    }
  }

  diag.training_sims = cfg.training_sims();
  SimBank training = simulate_truncated(models, regions, diag.training_sims, cfg.n_obs, seed,
                                        Stage::kTraining, cfg.threads, cfg.sampler);
  ModelChoiceFit fit = fit_model_choice_summaries(training, cfg.ridge, cfg.n_obs);
  diag.pair_fits = fit.reports;
  diag.warnings.insert(diag.warnings.end(), fit.warnings.begin(), fit.warnings.end());
  const SummaryDef summary = SummaryDef::fitted(fit.summary);

  out.main_bank = cfg.reuse_training_for_main
                      ? std::move(training)
                      : simulate_truncated(models, regions, diag.training_sims, cfg.n_obs, seed,
                                           Stage::kHoldout, cfg.threads, cfg.sampler);
  out.main_bank.apply_summary(summary);
  out.main = rejection_abc(out.main_bank, summary.evaluate(obs), cfg.n_accept_main);
  for (std::size_t c : out.main.scaling.dropped) {
    diag.warnings.push_back("main: dropped constant summary component " + std::to_string(c));
  }
  diag.main = StageSummary{out.main.h, out.main.counts, out.main.scaling.dropped};

  out.probabilities = truncation_correct(out.main, regions, prior);
  diag.regions = std::move(regions);
  diag.probabilities = out.probabilities;
  out.summary = fit.summary;
  return out;
}

std::string diagnostics_to_json(const PipelineDiagnostics& d) {
  nlohmann::json j;
  j["algorithm"] = d.algorithm;
  j["seed"] = d.seed;
  j["models"] = d.model_ids;
  j["training_sims"] = d.training_sims;
  j["regions"] = nlohmann::json::array();
  for (std::size_t m = 0; m < d.regions.size(); ++m) {
    nlohmann::json bounds = nlohmann::json::array();
    for (const auto& iv : d.regions[m].bounds) {
      bounds.push_back({real_or_null(iv.lo), real_or_null(iv.hi)});
    }
    j["regions"].push_back({{"model", m < d.model_ids.size() ? d.model_ids[m] : ""},
                            {"bounds", bounds},
                            {"r_hat", d.regions[m].prior_mass}});
  }
  j["pilot"] = d.pilot ? stage_json(*d.pilot) : nlohmann::json(nullptr);
  j["main"] = stage_json(d.main);
  j["pair_fits"] = nlohmann::json::array();
  for (const auto& p : d.pair_fits) {
    j["pair_fits"].push_back({{"pair", {p.pair.first, p.pair.second}},
                              {"deviance", real_or_null(p.deviance)},
                              {"converged", p.converged},
                              {"degenerate", p.degenerate},
                              {"iterations", p.iterations}});
  }
  j["probabilities"] = d.probabilities;
  j["warnings"] = d.warnings;
  return j.dump(2);
}

}  // namespace sabc
