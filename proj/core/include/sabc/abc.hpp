#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "sabc/models.hpp"
#include "sabc/summaries.hpp"

namespace sabc {

/// How models were assigned to simulations.
///   kPriorWeights  - model drawn from the model prior (plain rejection ABC)
///   kUniformModels - models equally represented; estimates reweight by the prior
enum class SamplingScheme { kPriorWeights, kUniformModels };

struct SimRecord {
  std::size_t sim_index = 0;
  int model = 0;
  ParamVector theta;
  /// Raw simulated data; may be dropped once summaries are computed.
  Dataset data;
  SummaryVector summary;
};

struct SimBank {
  std::vector<SimRecord> records;
  SamplingScheme scheme = SamplingScheme::kUniformModels;
  std::uint64_t seed = 0;
  int n_models = 0;

  std::size_t size() const { return records.size(); }
  /// Recomputes every record's summary from its raw data.
  void apply_summary(const SummaryDef& summary);
};

struct SdEstimate {
  /// Sample (n - 1 denominator) standard deviations of kept components.
  std::vector<double> sd;
  /// Component indices with sd >= kMinSd, ascending.
  std::vector<std::size_t> kept;
  std::vector<std::size_t> dropped;
};

inline constexpr double kMinSd = 1e-12;

/// Throws std::invalid_argument if the bank is empty or every component is
/// degenerate.
SdEstimate estimate_sds(const SimBank& bank);

/// sqrt(sum_i (a_i - b_i)^2 / sd_i^2).
double scaled_distance(std::span<const double> a, std::span<const double> b,
                       std::span<const double> sd);

struct AbcResult {
  /// Indices into the bank's record vector, ordered by (distance, sim_index).
  std::vector<std::size_t> accepted;
  double h = 0.0;
  std::vector<int> counts;
  SamplingScheme scheme = SamplingScheme::kUniformModels;
  /// Distance of every bank record to the observation (bank order).
  std::vector<double> distances;
  SdEstimate scaling;
};

/// Accepts exactly n_accept records with smallest scaled distance; ties are
/// broken by sim_index. Scales are estimated from the bank.
AbcResult rejection_abc(const SimBank& bank, const SummaryVector& obs_summary,
                        std::size_t n_accept);

/// As above with caller-supplied scaling.
AbcResult rejection_abc(const SimBank& bank, const SummaryVector& obs_summary,
                        std::size_t n_accept, const SdEstimate& scaling);

/// Model probabilities. Uniform scheme: n_i p_i / sum_j n_j p_j. Prior-weight
/// scheme: n_i / sum_j n_j.
std::vector<double> posterior_estimates(const AbcResult& result, std::span<const double> prior);

/// n_i / n_j, or nullopt when n_j == 0. Requires the uniform scheme.
std::optional<double> bayes_factor(const AbcResult& result, int i, int j);

/// Writes sim_index,model,theta_1..theta_d,distance,accepted for every record.
void write_abc_csv(std::ostream& out, const SimBank& bank, const AbcResult& result);

std::vector<double> uniform_prior(int n_models);

}  // namespace sabc
