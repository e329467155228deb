// Batch runner for semi-automatic ABC model choice.
//
//   sabc experiment --config cfg.json [--seed N] [--threads T] [--output-dir DIR]
//   sabc pipeline   --example B --obs obs.csv --method alg4 [--seed N] ...
//   sabc oracle     --example B --obs obs.csv
//   sabc simulate   --model B1 --theta 0.3 [--n 100] [--seed N]
//
// Exit status: 0 success, 2 configuration error, 1 runtime error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sabc/abc.hpp"
#include "sabc/csv.hpp"
#include "sabc/error.hpp"
#include "sabc/experiment.hpp"
#include "sabc/oracle.hpp"
#include "sabc/semiauto.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw sabc::ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

sabc::Example example_arg(const std::string& name) { return sabc::parse_example(name); }

void print_probabilities(const std::vector<sabc::ModelSpec>& models, const std::vector<double>& p) {
  std::cout << "model,probability\n";
  for (std::size_t m = 0; m < models.size(); ++m) {
    std::cout << models[m].id << ',' << sabc::format_fixed(p[m], 6) << '\n';
  }
}

struct ExperimentArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::string> output_dir;
};

int run_experiment_cmd(const ExperimentArgs& args) {
  sabc::ExperimentConfig cfg = sabc::experiment_config_from_json(read_file(args.config));
  if (args.seed) cfg.seed = *args.seed;
  if (args.threads) cfg.threads = *args.threads;
  if (args.output_dir) cfg.output_dir = *args.output_dir;
  cfg.validate();

  const sabc::ExperimentResult result = sabc::run_experiment(cfg);
  sabc::write_experiment_outputs(result, cfg.output_dir);
  std::cout << sabc::summary_csv(result);
  return 0;
}

struct PipelineArgs {
  std::string example;
  std::string obs;
  std::string method = "alg4";
  std::uint64_t seed = 1;
  std::size_t total_sims = 20000;
  std::size_t n_accept = 100;
  unsigned threads = 1;
  std::string diagnostics;
  std::string abc_csv;
  std::string summary_json;
};

int run_pipeline_cmd(const PipelineArgs& args) {
  const auto models = sabc::example_models(example_arg(args.example));
  const sabc::Method method = sabc::parse_method(args.method);
  if (method == sabc::Method::kExact) {
    throw sabc::ConfigError("use the 'oracle' subcommand for exact posteriors");
  }
  if (method == sabc::Method::kLiterature && models.front().id[0] != 'B' &&
      models.front().id[0] != 'C') {
    throw sabc::ConfigError("literature summaries exist only for examples B and C");
  }
  const sabc::Dataset obs = sabc::read_observations_csv(args.obs);
  if ((method == sabc::Method::kS10 || method == sabc::Method::kAlg4) && obs.size() != 100) {
    throw sabc::ConfigError("s10 and alg4 need exactly 100 observations");
  }
  if (args.n_accept == 0 || args.n_accept > args.total_sims) {
    throw sabc::ConfigError("n-accept must be in [1, total-sims]");
  }
  const auto prior = sabc::uniform_prior(static_cast<int>(models.size()));

  if (method == sabc::Method::kS10 || method == sabc::Method::kLiterature) {
    std::vector<sabc::TrainingRegion> full;
    for (const auto& m : models) full.push_back(sabc::full_support_region(m));
    sabc::SimBank bank = sabc::simulate_truncated(models, full, args.total_sims, obs.size(),
                                                  args.seed, sabc::Stage::kStandard, args.threads);
    const sabc::SummaryDef summary =
        method == sabc::Method::kS10
            ? sabc::SummaryDef::order_stats_10()
            : sabc::SummaryDef::literature(models.front().id[0] == 'B' ? sabc::LiteratureExample::kB
                                                                       : sabc::LiteratureExample::kC);
    bank.apply_summary(summary);
    const sabc::AbcResult abc = sabc::rejection_abc(bank, summary.evaluate(obs), args.n_accept);
    if (!args.abc_csv.empty()) {
      std::ofstream out(args.abc_csv);
      sabc::write_abc_csv(out, bank, abc);
    }
    print_probabilities(models, sabc::posterior_estimates(abc, prior));
    return 0;
  }

  sabc::PipelineConfig cfg;
  cfg.total_sims = args.total_sims;
  cfg.n_accept_pilot = args.n_accept;
  cfg.n_accept_main = args.n_accept;
  cfg.n_obs = obs.size();
  cfg.truncate = method == sabc::Method::kAlg4;
  cfg.threads = args.threads;
  cfg.validate();

  const sabc::PipelineOutput out = sabc::semiauto_pipeline(models, obs, cfg, args.seed, prior);
  if (!args.diagnostics.empty()) {
    sabc::write_text_file(args.diagnostics, sabc::diagnostics_to_json(out.diagnostics) + "\n");
  }
  if (!args.summary_json.empty()) {
    sabc::write_text_file(args.summary_json, sabc::fitted_summary_to_json(out.summary) + "\n");
  }
  if (!args.abc_csv.empty()) {
    std::ofstream csv(args.abc_csv);
    sabc::write_abc_csv(csv, out.main_bank, out.main);
  }
  for (const auto& w : out.diagnostics.warnings) std::cerr << "warning: " << w << '\n';
  print_probabilities(models, out.probabilities);
  return 0;
}

int run_oracle_cmd(const std::string& example, const std::string& obs_path) {
  const auto ex = example_arg(example);
  if (ex == sabc::Example::kC) throw sabc::ConfigError("no exact posterior for example C");
  const auto models = sabc::example_models(ex);
  const sabc::Dataset obs = sabc::read_observations_csv(obs_path);
  const sabc::ExactPosterior post = sabc::exact_posterior(models, obs);
  std::cout << "model,log_evidence,probability\n";
  for (std::size_t m = 0; m < models.size(); ++m) {
    std::cout << models[m].id << ',' << sabc::format_real(post.log_evidences[m]) << ','
              << sabc::format_fixed(post.probabilities[m], 6) << '\n';
  }
  return 0;
}

int run_simulate_cmd(const std::string& model_id, const std::vector<double>& theta,
                     std::size_t n, std::uint64_t seed) {
  const sabc::ModelSpec& model = sabc::model_by_id(model_id);
  sabc::Rng rng = sabc::make_rng(seed, sabc::Stage::kObservation, 0);
  const sabc::Dataset data = sabc::simulate(model, theta, n, rng);
  std::cout << "x\n";
  for (double x : data) std::cout << sabc::format_real(x) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-automatic ABC for model choice"};
  app.require_subcommand(1);

  ExperimentArgs exp_args;
  auto* experiment = app.add_subcommand("experiment", "Replicated simulation study");
  experiment->add_option("--config", exp_args.config, "JSON experiment config")->required();
  experiment->add_option("--seed", exp_args.seed, "Override the config seed");
  experiment->add_option("--threads", exp_args.threads, "Replicates run concurrently");
  experiment->add_option("--output-dir", exp_args.output_dir, "Override the output directory");

  PipelineArgs pipe_args;
  auto* pipeline = app.add_subcommand("pipeline", "Single ABC model-choice analysis");
  pipeline->add_option("--example", pipe_args.example, "A_binary, B, C or A_three")->required();
  pipeline->add_option("--obs", pipe_args.obs, "CSV of observations (first column)")->required();
  pipeline->add_option("--method", pipe_args.method, "s10, literature, alg3 or alg4");
  pipeline->add_option("--seed", pipe_args.seed);
  pipeline->add_option("--total-sims", pipe_args.total_sims);
  pipeline->add_option("--n-accept", pipe_args.n_accept);
  pipeline->add_option("--threads", pipe_args.threads);
  pipeline->add_option("--diagnostics", pipe_args.diagnostics, "Write diagnostics JSON here");
  pipeline->add_option("--abc-csv", pipe_args.abc_csv, "Write the main ABC bank as CSV here");
  pipeline->add_option("--summary-json", pipe_args.summary_json,
                       "Write the fitted summary statistic as JSON here");

  std::string oracle_example;
  std::string oracle_obs;
  auto* oracle = app.add_subcommand("oracle", "Exact posterior model probabilities");
  oracle->add_option("--example", oracle_example)->required();
  oracle->add_option("--obs", oracle_obs)->required();

  std::string sim_model;
  std::vector<double> sim_theta;
  std::size_t sim_n = 100;
  std::uint64_t sim_seed = 1;
  auto* simulate = app.add_subcommand("simulate", "Simulate a dataset from one model");
  simulate->add_option("--model", sim_model, "A1, A2, A3, B1, B2, C1 or C2")->required();
  simulate->add_option("--theta", sim_theta, "Parameter values")->required();
  simulate->add_option("--n", sim_n);
  simulate->add_option("--seed", sim_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (experiment->parsed()) return run_experiment_cmd(exp_args);
    if (pipeline->parsed()) return run_pipeline_cmd(pipe_args);
    if (oracle->parsed()) return run_oracle_cmd(oracle_example, oracle_obs);
    if (simulate->parsed()) return run_simulate_cmd(sim_model, sim_theta, sim_n, sim_seed);
  } catch (const sabc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}
