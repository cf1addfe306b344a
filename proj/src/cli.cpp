#include "cbandit/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cbandit/errors.hpp"
#include "cbandit/experiment.hpp"

namespace cbandit {

namespace {

constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigInvalid("cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  f << text;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Causal bandit experiments: structure learning, UCB intervention selection, change detection"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "Write a random bandit fixture as JSON");
  int gen_n = 6;
  std::uint64_t gen_seed = 1;
  double gen_edge_prob = 0.5;
  std::string gen_out;
  gen->add_option("--n", gen_n, "Number of nodes (reward node is the last)")->check(CLI::Range(2, 64));
  gen->add_option("--seed", gen_seed, "Root seed");
  gen->add_option("--edge-prob", gen_edge_prob, "Edge probability")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--out", gen_out, "Output file (default stdout)");

  auto* run = app.add_subcommand("run", "Run an experiment config");
  std::string config_path;
  std::optional<std::uint64_t> run_seed;
  std::string run_out;
  std::string run_policies;
  bool quiet = false;
  int run_threads = -1;
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--seed", run_seed, "Override the root seed");
  run->add_option("--out", run_out, "Override the output directory");
  run->add_option("--policies", run_policies, "Comma-separated policy list override");
  run->add_option("--threads", run_threads, "Worker threads (0: all cores)");
  run->add_flag("--quiet", quiet, "Suppress the summary on stdout");

  auto* metrics = app.add_subcommand("metrics", "Recompute summary.json from a stored per_run.csv");
  std::string metrics_in;
  std::string metrics_out;
  metrics->add_option("--input", metrics_in, "Result directory or per_run.csv path")->required();
  metrics->add_option("--out", metrics_out, "Output file (default stdout)");

  auto* trace = app.add_subcommand("trace", "Dump the edge-rejection trace of structure learning on a fixture");
  std::string fixture_path;
  int trace_samples = 400;
  std::uint64_t trace_seed = 1;
  std::string trace_out;
  int trace_k = kDefaultMiNeighbors;
  trace->add_option("--fixture", fixture_path, "Bandit fixture JSON")->required();
  trace->add_option("--samples", trace_samples, "Observational samples")->check(CLI::PositiveNumber);
  trace->add_option("--seed", trace_seed, "Sampling seed");
  trace->add_option("--k", trace_k, "Neighbors for the MI estimator")->check(CLI::PositiveNumber);
  trace->add_option("--out", trace_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (*gen) {
      GeneratorOptions opts;
      opts.edge_prob = gen_edge_prob;
      Rng rng = make_rng(gen_seed, 0, Stream::environment);
      emit(generate_bandit(gen_n, opts, rng).to_json().dump(2) + "\n", gen_out, out);
    } else if (*run) {
      ExperimentConfig cfg = ExperimentConfig::load(config_path);
      if (run_seed) cfg.seed = *run_seed;
      if (!run_out.empty()) cfg.output = run_out;
      if (!run_policies.empty()) {
        cfg.policies.clear();
        for (const auto& p : split_list(run_policies)) cfg.policies.push_back(parse_policy(p));
      }
      if (run_threads >= 0) cfg.threads = run_threads;
      cfg.validate();
      const ExperimentResult result = run_experiment(cfg);
      write_results(cfg, result, cfg.output);
      if (!quiet) out << dump_summary(summarize(result.runs));
    } else if (*metrics) {
      std::filesystem::path p = metrics_in;
      if (std::filesystem::is_directory(p)) p /= "per_run.csv";
      emit(dump_summary(summarize(parse_per_run_csv(read_file(p)))), metrics_out, out);
    } else if (*trace) {
      nlohmann::json fixture;
      try {
        fixture = nlohmann::json::parse(read_file(fixture_path));
      } catch (const nlohmann::json::exception& e) {
        throw ConfigInvalid(std::string("fixture is not valid JSON: ") + e.what());
      }
      const CausalBandit b = CausalBandit::from_json(fixture);
      Rng rng = make_rng(trace_seed, 0, Stream::noise);
      const Intervention none(b.n());
      Matrix x(b.n(), trace_samples);
      for (int s = 0; s < trace_samples; ++s) x.col(s) = sample(b, none, rng);
      std::ostringstream lines;
      CslConfig csl;
      csl.mi_k = trace_k;
      learn_graph(x, b.noise_mean(), csl, [&](const RejectionStep& step) {
        nlohmann::json j = step.to_json();
        j["format_version"] = kFormatVersion;
        lines << j.dump() << "\n";
      });
      emit(lines.str(), trace_out, out);
    }
  } catch (const ConfigInvalid& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return 0;
}

}  // namespace cbandit
