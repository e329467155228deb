#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sabc/models.hpp"

namespace sabc {

enum class Method { kS10, kLiterature, kAlg3, kAlg4, kExact };

Method parse_method(std::string_view name);
std::string_view method_name(Method m);

struct ExperimentConfig {
  Example example = Example::kABinary;
  std::size_t n_datasets = 100;
  std::size_t n_obs = 100;
  std::size_t total_sims = 20000;
  std::size_t n_accept = 100;
  std::vector<Method> methods = {Method::kS10, Method::kAlg3, Method::kAlg4};
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = "results";
  unsigned threads = 1;

  /// Throws ConfigError.
  void validate() const;
};

/// Parses a JSON document with the ExperimentConfig fields. Unknown keys and
/// ill-typed values raise ConfigError.
ExperimentConfig experiment_config_from_json(const std::string& text);

struct ReplicateResult {
  int true_model = 0;
  ParamVector theta;
  /// Probability vector per method, in cfg.methods order.
  std::vector<std::vector<double>> probabilities;
  std::vector<std::string> warnings;
};

struct MethodMetrics {
  Method method;
  double entropic_loss = 0.0;
  double misallocation_rate = 0.0;
  std::size_t ties = 0;
  /// Datasets whose true model received probability 0.
  std::size_t zero_probability = 0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<std::string> model_ids;
  std::vector<ReplicateResult> replicates;
  std::vector<MethodMetrics> metrics;
};

/// Replicates: draw the true model uniformly, theta from its prior, and an
/// observed dataset; then run every configured method. Replicate r uses seeds
/// derived from (cfg.seed, r) only, so results do not depend on cfg.threads.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// dataset_id,true_model,method,model,probability (6 decimals).
std::string probabilities_csv(const ExperimentResult& result);
/// Table layout: method,<example> with "loss (rate%)" cells.
std::string summary_csv(const ExperimentResult& result);
/// method,entropic_loss,misallocation_rate,ties,zero_probability.
std::string metrics_csv(const ExperimentResult& result);

/// Writes probabilities.csv, summary.csv and metrics.csv into `dir`.
void write_experiment_outputs(const ExperimentResult& result, const std::filesystem::path& dir);

}  // namespace sabc
