#include "sabc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sabc/abc.hpp"
#include "sabc/csv.hpp"
#include "sabc/error.hpp"
#include "sabc/metrics.hpp"
#include "sabc/oracle.hpp"
#include "sabc/parallel.hpp"
#include "sabc/semiauto.hpp"

namespace sabc {
namespace {

constexpr double kPilotFraction = 0.25;

bool uses(const ExperimentConfig& cfg, Method m) {
  return std::find(cfg.methods.begin(), cfg.methods.end(), m) != cfg.methods.end();
}

SummaryDef literature_def(Example ex) {
  return SummaryDef::literature(ex == Example::kB ? LiteratureExample::kB : LiteratureExample::kC);
}

PipelineConfig pipeline_config(const ExperimentConfig& cfg, bool truncate) {
  PipelineConfig p;
  p.total_sims = cfg.total_sims;
  p.pilot_fraction = kPilotFraction;
  p.n_accept_pilot = cfg.n_accept;
  p.n_accept_main = cfg.n_accept;
  p.n_obs = cfg.n_obs;
  p.truncate = truncate;
  p.threads = 1;
  return p;
}

ReplicateResult run_replicate(const ExperimentConfig& cfg, const std::vector<ModelSpec>& models,
                              std::size_t replicate) {
  const std::uint64_t seed = derive_seed(cfg.seed, Stage::kReplicate, replicate);
  const auto n_models = static_cast<int>(models.size());
  const std::vector<double> prior = uniform_prior(n_models);

  ReplicateResult out;
  Rng rng = make_rng(seed, Stage::kObservation, 0);
  out.true_model = std::min(n_models - 1, static_cast<int>(uniform_open(rng) * n_models));
  const ModelSpec& truth = models[static_cast<std::size_t>(out.true_model)];
  out.theta = sample_prior(truth, rng);
  const Dataset obs = simulate(truth, out.theta, cfg.n_obs, rng);

  std::optional<SimBank> standard_bank;
  auto standard_abc = [&](const SummaryDef& summary) {
    if (!standard_bank) {
      std::vector<TrainingRegion> full;
      for (const auto& m : models) full.push_back(full_support_region(m));
      standard_bank = simulate_truncated(models, full, cfg.total_sims, cfg.n_obs, seed,
                                         Stage::kStandard);
    }
    standard_bank->apply_summary(summary);
    const AbcResult abc = rejection_abc(*standard_bank, summary.evaluate(obs), cfg.n_accept);
    return posterior_estimates(abc, prior);
  };

  for (Method method : cfg.methods) {
    switch (method) {
      case Method::kS10:
        out.probabilities.push_back(standard_abc(SummaryDef::order_stats_10()));
        break;
      case Method::kLiterature:
        out.probabilities.push_back(standard_abc(literature_def(cfg.example)));
        break;
      case Method::kAlg3:
      case Method::kAlg4: {
        const bool truncate = method == Method::kAlg4;
        PipelineOutput res = semiauto_pipeline(models, obs, pipeline_config(cfg, truncate), seed, prior);
        for (auto& w : res.diagnostics.warnings) {
          out.warnings.push_back(std::string(method_name(method)) + ": " + w);
        }
        out.probabilities.push_back(std::move(res.probabilities));
        break;
      }
      case Method::kExact:
        out.probabilities.push_back(exact_posterior(models, obs, prior).probabilities);
        break;
    }
  }
  return out;
}

template <typename T>
T get_field(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

std::size_t get_count(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(std::string("config field '") + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

}  // namespace

Method parse_method(std::string_view name) {
  if (name == "s10") return Method::kS10;
  if (name == "literature") return Method::kLiterature;
  if (name == "alg3") return Method::kAlg3;
  if (name == "alg4") return Method::kAlg4;
  if (name == "exact") return Method::kExact;
  throw ConfigError("unknown method: " + std::string(name));
}

std::string_view method_name(Method m) {
  switch (m) {
    case Method::kS10: return "s10";
    case Method::kLiterature: return "literature";
    case Method::kAlg3: return "alg3";
    case Method::kAlg4: return "alg4";
    case Method::kExact: return "exact";
  }
  return "";
}

void ExperimentConfig::validate() const {
  if (n_datasets == 0) throw ConfigError("n_datasets must be positive");
  if (n_obs == 0) throw ConfigError("n_obs must be positive");
  if (total_sims == 0) throw ConfigError("total_sims must be positive");
  if (n_accept == 0) throw ConfigError("n_accept must be positive");
  if (threads == 0) throw ConfigError("threads must be positive");
  if (methods.empty()) throw ConfigError("methods must be nonempty");
  for (std::size_t i = 0; i < methods.size(); ++i) {
    for (std::size_t j = i + 1; j < methods.size(); ++j) {
      if (methods[i] == methods[j]) {
        throw ConfigError("duplicate method " + std::string(method_name(methods[i])));
      }
    }
  }
  if (uses(*this, Method::kLiterature) && example != Example::kB && example != Example::kC) {
    throw ConfigError("literature summaries exist only for examples B and C");
  }
  if (uses(*this, Method::kLiterature) && n_obs < 10) {
    throw ConfigError("literature summaries need n_obs >= 10");
  }
  if (uses(*this, Method::kExact) && example == Example::kC) {
    throw ConfigError("exact posteriors are unavailable for example C");
  }
  if ((uses(*this, Method::kS10) || uses(*this, Method::kAlg4)) && n_obs != 100) {
    throw ConfigError("s10 and alg4 (s10 pilot) require n_obs = 100");
  }
  const bool standard = uses(*this, Method::kS10) || uses(*this, Method::kLiterature);
  if (standard || uses(*this, Method::kAlg3)) {
    if (n_accept > total_sims) throw ConfigError("n_accept exceeds total_sims");
  }
  if (uses(*this, Method::kAlg4)) {
    PipelineConfig p;
    p.total_sims = total_sims;
    p.pilot_fraction = kPilotFraction;
    p.n_accept_pilot = n_accept;
    p.n_accept_main = n_accept;
    p.n_obs = n_obs;
    p.validate();
  }
}

ExperimentConfig experiment_config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  static const std::vector<std::string> known = {"example", "n_datasets", "n_obs", "total_sims",
                                                 "n_accept", "methods", "seed", "output_dir",
                                                 "threads"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("unknown config field '" + key + "'");
    }
  }

  ExperimentConfig cfg;
  if (!j.contains("example")) throw ConfigError("config field 'example' is required");
  cfg.example = parse_example(get_field<std::string>(j, "example"));
  if (j.contains("n_datasets")) cfg.n_datasets = get_count(j, "n_datasets");
  if (j.contains("n_obs")) cfg.n_obs = get_count(j, "n_obs");
  if (j.contains("total_sims")) cfg.total_sims = get_count(j, "total_sims");
  if (j.contains("n_accept")) cfg.n_accept = get_count(j, "n_accept");
  if (j.contains("seed")) cfg.seed = get_field<std::uint64_t>(j, "seed");
  if (j.contains("threads")) cfg.threads = static_cast<unsigned>(get_count(j, "threads"));
  if (j.contains("output_dir")) cfg.output_dir = get_field<std::string>(j, "output_dir");
  if (j.contains("methods")) {
    cfg.methods.clear();
    for (const auto& name : get_field<std::vector<std::string>>(j, "methods")) {
      cfg.methods.push_back(parse_method(name));
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::vector<ModelSpec> models = example_models(cfg.example);

  ExperimentResult result;
  result.config = cfg;
  for (const auto& m : models) result.model_ids.push_back(m.id);
  result.replicates.resize(cfg.n_datasets);
  parallel_for(cfg.n_datasets, cfg.threads, [&](std::size_t r) {
    result.replicates[r] = run_replicate(cfg, models, r);
  });

  std::vector<int> truth;
  for (const auto& rep : result.replicates) truth.push_back(rep.true_model);
  for (std::size_t k = 0; k < cfg.methods.size(); ++k) {
    std::vector<std::vector<double>> est;
    MethodMetrics mm{cfg.methods[k]};
    for (const auto& rep : result.replicates) {
      est.push_back(rep.probabilities[k]);
      if (!(rep.probabilities[k][static_cast<std::size_t>(rep.true_model)] > 0)) {
        ++mm.zero_probability;
      }
    }
    mm.entropic_loss = entropic_loss(est, truth);
    const Misallocation mis = misallocation(est, truth);
    mm.misallocation_rate = mis.rate;
    mm.ties = mis.ties;
    result.metrics.push_back(mm);
  }
  return result;
}

std::string probabilities_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "dataset_id,true_model,method,model,probability\n";
  for (std::size_t r = 0; r < result.replicates.size(); ++r) {
    const auto& rep = result.replicates[r];
    for (std::size_t k = 0; k < result.config.methods.size(); ++k) {
      for (std::size_t m = 0; m < result.model_ids.size(); ++m) {
        out << r << ',' << result.model_ids[static_cast<std::size_t>(rep.true_model)] << ','
            << method_name(result.config.methods[k]) << ',' << result.model_ids[m] << ','
            << format_fixed(rep.probabilities[k][m], 6) << '\n';
      }
    }
  }
  return out.str();
}

std::string summary_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "method," << example_name(result.config.example) << '\n';
  for (const auto& mm : result.metrics) {
    out << method_name(mm.method) << ','
        << format_metric_cell(mm.entropic_loss, mm.misallocation_rate) << '\n';
  }
  return out.str();
}

std::string metrics_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "method,entropic_loss,misallocation_rate,ties,zero_probability\n";
  for (const auto& mm : result.metrics) {
    out << method_name(mm.method) << ',' << format_fixed(mm.entropic_loss, 6) << ','
        << format_fixed(mm.misallocation_rate, 6) << ',' << mm.ties << ',' << mm.zero_probability
        << '\n';
  }
  return out.str();
}

void write_experiment_outputs(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text_file(dir / "probabilities.csv", probabilities_csv(result));
  write_text_file(dir / "summary.csv", summary_csv(result));
  write_text_file(dir / "metrics.csv", metrics_csv(result));
}

}  // namespace sabc
