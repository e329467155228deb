#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sabc/abc.hpp"
#include "sabc/models.hpp"
#include "sabc/random.hpp"
#include "sabc/summaries.hpp"

namespace sabc {

/// Hypercube of parameter values for one model plus its prior probability.
struct TrainingRegion {
  std::vector<Interval> bounds;
  double prior_mass = 1.0;
};

TrainingRegion full_support_region(const ModelSpec& model);

/// Product of per-parameter prior masses (priors are independent).
double region_prior_mass(const ModelSpec& model, const std::vector<Interval>& bounds);

/// Regions with prior mass below this cannot be sampled by rejection.
inline constexpr double kMinRejectionRate = 1e-4;

enum class TruncatedSampler {
  /// Draw from the prior until inside the region; error below kMinRejectionRate.
  kRejection,
  /// Rejection when feasible, otherwise per-coordinate inverse CDF.
  kAuto,
};

/// Simulates n_sims records with models assigned round-robin (sim_index mod M),
/// theta from each model's prior restricted to its region, and n_obs
/// observations per record. Record i uses the stream (seed, stage, i), so the
/// bank does not depend on `threads`.
SimBank simulate_truncated(const std::vector<ModelSpec>& models,
                           const std::vector<TrainingRegion>& regions, std::size_t n_sims,
                           std::size_t n_obs, std::uint64_t seed, Stage stage,
                           unsigned threads = 1,
                           TruncatedSampler sampler = TruncatedSampler::kRejection);

struct PipelineConfig {
  std::size_t total_sims = 20000;
  double pilot_fraction = 0.25;
  std::size_t n_accept_pilot = 100;
  std::size_t n_accept_main = 100;
  std::size_t n_obs = 100;
  SummaryDef pilot_summary = SummaryDef::order_stats_10();
  /// false runs the simple variant: no pilot, full-support training.
  bool truncate = true;
  /// When set, these regions are used and no pilot is run.
  std::optional<std::vector<TrainingRegion>> fixed_regions;
  /// Main analysis reuses the training bank record-for-record; otherwise a
  /// fresh bank of the same size is simulated for it.
  bool reuse_training_for_main = true;
  double ridge = 1e-6;
  unsigned threads = 1;
  TruncatedSampler sampler = TruncatedSampler::kAuto;

  bool runs_pilot() const { return truncate && !fixed_regions.has_value(); }
  std::size_t pilot_sims() const;
  std::size_t training_sims() const;
  /// Throws ConfigError.
  void validate() const;
};

struct PilotResult {
  SimBank bank;
  AbcResult abc;
  std::vector<TrainingRegion> regions;
  std::vector<std::string> warnings;
};

/// Rejection ABC with the pilot summary on an untruncated bank, then
/// per-model hypercubes spanning the accepted parameters.
PilotResult run_pilot(const std::vector<ModelSpec>& models, const Dataset& obs,
                      const PipelineConfig& cfg, std::uint64_t seed);

/// Per-model region from accepted parameter vectors. Empty input gives the
/// full support; zero-width intervals are widened by 1e-6 * max(1, |c|).
TrainingRegion region_from_accepted(const ModelSpec& model,
                                    const std::vector<ParamVector>& accepted);

struct PairFitReport {
  std::pair<int, int> pair;
  double deviance = 0.0;
  bool converged = false;
  bool degenerate = false;
  int iterations = 0;
};

struct ModelChoiceFit {
  FittedSummary summary;
  std::vector<PairFitReport> reports;
  std::vector<std::string> warnings;
};

/// One ridge-stabilized logistic regression of I[model == i] on the order
/// statistic basis for every pair i < j, using only that pair's records.
/// A pair whose fit is degenerate gets zero coefficients and a warning.
ModelChoiceFit fit_model_choice_summaries(const SimBank& bank, double ridge = 1e-6,
                                          std::size_t basis_n = 100);

/// Probabilities proportional to n_i * r_i * p_i (uniform scheme) or
/// n_i * r_i (prior-weight scheme), with r_i the region prior mass.
std::vector<double> truncation_correct(const AbcResult& main,
                                       const std::vector<TrainingRegion>& regions,
                                       std::span<const double> prior);

struct StageSummary {
  double h = 0.0;
  std::vector<int> counts;
  std::vector<std::size_t> dropped_components;
};

struct PipelineDiagnostics {
  int algorithm = 4;
  std::uint64_t seed = 0;
  std::vector<std::string> model_ids;
  std::vector<TrainingRegion> regions;
  std::optional<StageSummary> pilot;
  StageSummary main;
  std::vector<PairFitReport> pair_fits;
  std::size_t training_sims = 0;
  std::vector<double> probabilities;
  std::vector<std::string> warnings;
};

std::string diagnostics_to_json(const PipelineDiagnostics& diagnostics);

struct PipelineOutput {
  std::vector<double> probabilities;
  PipelineDiagnostics diagnostics;
  FittedSummary summary;
  SimBank main_bank;
  AbcResult main;
};

/// Semi-automatic ABC for model choice. With cfg.truncate: pilot, training
/// regions, truncated training simulations, pairwise logistic summaries,
/// main rejection analysis, truncation correction. Without: the same stages
/// on full-support regions and no pilot.
PipelineOutput semiauto_pipeline(const std::vector<ModelSpec>& models, const Dataset& obs,
                                 const PipelineConfig& cfg, std::uint64_t seed,
                                 std::span<const double> prior = {});

}  // namespace sabc
