#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cbandit/cli.hpp"
#include "cbandit/errors.hpp"
#include "cbandit/experiment.hpp"
#include "cbandit/metrics.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cbandit;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "cbandit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("cbandit-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.n_nodes = 3;
  cfg.horizon = 80;
  cfg.mc_runs = 3;
  cfg.seed = 17;
  cfg.final_window = 20;
  cfg.ucb = UcbConfig::defaults(3);
  return cfg;
}

}  // namespace

TEST_CASE("graph metrics on hand-built supports") {
  Matrix truth = Matrix::Zero(4, 4);
  truth(0, 1) = 1.0;
  truth(1, 2) = 1.0;
  truth(2, 3) = 1.0;
  Matrix est = Matrix::Zero(4, 4);
  est(0, 1) = 0.3;
  est(1, 2) = -2.0;
  est(0, 3) = 1.0;
  est(1, 3) = 1.0;
  const PrecisionRecall pr = precision_recall(truth, est);
  CHECK(*pr.precision == doctest::Approx(0.5));
  CHECK(*pr.recall == doctest::Approx(2.0 / 3.0));
  CHECK(graph_fn_indicator(truth, est));
  CHECK_FALSE(graph_fn_indicator(truth, truth));

  Matrix reversed = Matrix::Zero(4, 4);
  reversed(1, 0) = 1.0;
  Matrix single = Matrix::Zero(4, 4);
  single(0, 1) = 1.0;
  CHECK(nshd(single, reversed) == doctest::Approx(1.0 / 16.0));
  CHECK(nshd(truth, Matrix::Zero(4, 4)) == doctest::Approx(3.0 / 16.0));
  CHECK(nshd(truth, truth) == 0.0);

  const PrecisionRecall empty = precision_recall(truth, Matrix::Zero(4, 4));
  CHECK_FALSE(empty.precision);
  CHECK(*empty.recall == 0.0);
}

TEST_CASE("nshd matches its definition on random graphs") {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const CausalBandit a = generate_bandit(6, {}, rng);
    const CausalBandit b = generate_bandit(6, {}, rng);
    const Matrix est = trial % 2 ? Matrix(b.b_obs() + a.b_obs().transpose()) : b.b_obs();
    CHECK(std::abs(nshd(a.b_obs(), est) - oracle::nshd_by_definition(a.b_obs(), est)) <= 1e-12);
  }
}

TEST_CASE("config parsing") {
  const auto j = tiny_config().to_json();
  const ExperimentConfig back = ExperimentConfig::from_json(j);
  CHECK(back.to_json() == j);

  auto bad = j;
  bad["horizn"] = 10;
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad), ConfigInvalid);
  bad = j;
  bad["ucb"]["alpah"] = 1.0;
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad), ConfigInvalid);
  bad = j;
  bad["horizon"] = "long";
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad), ConfigInvalid);
  bad = j;
  bad["n_nodes"] = 15;
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad), ConfigInvalid);
  CHECK_THROWS_AS(parse_policy("thompson"), ConfigInvalid);
}

TEST_CASE("experiments are reproducible and thread-count independent") {
  ExperimentConfig cfg = tiny_config();
  cfg.threads = 1;
  const ExperimentResult a = run_experiment(cfg);
  cfg.threads = 3;
  const ExperimentResult b = run_experiment(cfg);
  CHECK(per_run_csv(a.runs) == per_run_csv(b.runs));
  CHECK(per_step_csv(a.steps) == per_step_csv(b.steps));
  cfg.seed = 18;
  CHECK(per_run_csv(run_experiment(cfg).runs) != per_run_csv(a.runs));
}

TEST_CASE("summary recomputes byte for byte from the per-run table") {
  ExperimentConfig cfg = tiny_config();
  const fs::path dir = scratch("summary");
  const ExperimentResult r = run_experiment(cfg);
  write_results(cfg, r, dir);
  const CliResult m = cli({"metrics", "--input", dir.string()});
  CHECK(m.code == 0);
  CHECK(m.out == slurp(dir / "summary.json"));
  CHECK(per_run_csv(parse_per_run_csv(slurp(dir / "per_run.csv"))) == slurp(dir / "per_run.csv"));
  fs::remove_all(dir);
}

TEST_CASE("undefined precision is skipped and counted") {
  std::vector<RunMetrics> runs(2);
  runs[0].policy = runs[1].policy = "csl_ucb";
  runs[0].precision = 0.5;
  runs[1].run = 1;
  const auto s = summarize(runs);
  CHECK(s["policies"]["csl_ucb"]["precision_mean"].get<double>() == 0.5);
  CHECK(s["policies"]["csl_ucb"]["precision_undefined"].get<int>() == 1);
}

TEST_CASE("detection bookkeeping") {
  Rng rng(9);
  const Environment env = Environment::piecewise(generate_bandit(4, {}, rng), {100, 200}, 1.0, {}, rng);
  REQUIRE(!env.changed_nodes()[0].empty());
  const int node = env.changed_nodes()[0].front();
  std::vector<ChangeEvent> events;
  events.push_back({130, node, 0, 110, 50.0});
  RunMetrics m;
  fill_detection_metrics(m, env, events, 300);
  CHECK(*m.detections == 1);
  CHECK(*m.detected_changes == 1);
  CHECK(*m.mean_delay == doctest::Approx(30.0));
  CHECK(*m.false_alarms == 0);
  CHECK(*m.true_changes == static_cast<int>(env.changed_nodes()[0].size() + env.changed_nodes()[1].size()));
  events.push_back({50, node, 1, 40, 20.0});
  fill_detection_metrics(m, env, events, 300);
  CHECK(*m.false_alarms == 1);
}

TEST_CASE("command line") {
  CHECK(cli({"run"}).code == 2);
  CHECK(cli({"run", "--config", "/nonexistent/config.json"}).code == 2);
  CHECK(cli({"bogus"}).code == 2);

  const CliResult g1 = cli({"gen", "--n", "5", "--seed", "4"});
  const CliResult g2 = cli({"gen", "--n", "5", "--seed", "4"});
  CHECK(g1.code == 0);
  CHECK(g1.out == g2.out);
  const CausalBandit b = CausalBandit::from_json(nlohmann::json::parse(g1.out));
  CHECK(b.n() == 5);

  const fs::path dir = scratch("cli");
  {
    std::ofstream f(dir / "fixture.json");
    f << g1.out;
  }
  const CliResult t = cli({"trace", "--fixture", (dir / "fixture.json").string(), "--samples", "100"});
  CHECK(t.code == 0);
  std::istringstream lines(t.out);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j["format_version"] == kFormatVersion);
    ++count;
  }
  CHECK(count > 0);

  {
    std::ofstream f(dir / "bad.json");
    f << R"({"n_nodes": 3, "surprise": true})";
  }
  CHECK(cli({"run", "--config", (dir / "bad.json").string()}).code == 2);

  auto cfg = tiny_config().to_json();
  cfg["output"] = (dir / "out").string();
  {
    std::ofstream f(dir / "good.json");
    f << cfg.dump();
  }
  const CliResult r = cli({"run", "--config", (dir / "good.json").string(), "--quiet"});
  CHECK(r.code == 0);
  for (const char* name : {"per_run.csv", "per_step.csv", "summary.json", "config.json"}) {
    CHECK(fs::exists(dir / "out" / name));
  }
  fs::remove_all(dir);
}
