#include "cbandit/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "cbandit/errors.hpp"
#include "cbandit/metrics.hpp"

namespace cbandit {

namespace {

using nlohmann::json;

const std::vector<std::pair<PolicyKind, std::string>> kPolicyNames = {
    {PolicyKind::csl_ucb, "csl_ucb"},
    {PolicyKind::csl_ucb_cd, "csl_ucb_cd"},
    {PolicyKind::vanilla_ucb, "vanilla_ucb"},
    {PolicyKind::oracle, "oracle"},
    {PolicyKind::oracle_stale, "oracle_stale"},
};

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigInvalid(where + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : j.items()) {
    if (!ok.count(key)) throw ConfigInvalid("unknown key '" + key + "' in " + where);
  }
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigInvalid(std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

std::string to_string(PolicyKind p) {
  for (const auto& [k, name] : kPolicyNames) {
    if (k == p) return name;
  }
  return "unknown";
}

PolicyKind parse_policy(const std::string& name) {
  for (const auto& [k, n] : kPolicyNames) {
    if (n == name) return k;
  }
  throw ConfigInvalid("unknown policy '" + name + "'");
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  check_keys(j, "config",
             {"format_version", "kind", "n_nodes", "horizon", "mc_runs", "seed", "edge_prob", "weight_range",
              "noise", "policies", "csl", "ucb", "changes", "detector", "final_window", "threads", "output"});
  ExperimentConfig c;
  int version = kFormatVersion;
  read(j, "format_version", version);
  if (version != kFormatVersion) throw ConfigInvalid("unsupported format_version");
  std::string kind = "bandit";
  read(j, "kind", kind);
  if (kind == "bandit") {
    c.kind = ExperimentKind::bandit;
  } else if (kind == "identification") {
    c.kind = ExperimentKind::identification;
  } else {
    throw ConfigInvalid("kind must be 'bandit' or 'identification'");
  }
  read(j, "n_nodes", c.n_nodes);
  read(j, "horizon", c.horizon);
  read(j, "mc_runs", c.mc_runs);
  read(j, "seed", c.seed);
  read(j, "edge_prob", c.generator.edge_prob);
  if (j.contains("weight_range")) {
    std::vector<double> wr;
    read(j, "weight_range", wr);
    if (wr.size() != 2) throw ConfigInvalid("weight_range must have two entries");
    c.generator.weight_lo = wr[0];
    c.generator.weight_hi = wr[1];
  }
  if (j.contains("noise")) {
    const json& n = j.at("noise");
    check_keys(n, "noise", {"mean", "var"});
    read(n, "mean", c.generator.noise_mean);
    read(n, "var", c.generator.noise_var);
  }
  if (j.contains("policies")) {
    std::vector<std::string> names;
    read(j, "policies", names);
    c.policies.clear();
    for (const auto& name : names) c.policies.push_back(parse_policy(name));
  }
  if (j.contains("csl")) {
    const json& s = j.at("csl");
    check_keys(s, "csl", {"k", "ridge"});
    read(s, "k", c.csl.mi_k);
    if (s.contains("ridge") && !s.at("ridge").is_null()) {
      double r = 0.0;
      read(s, "ridge", r);
      c.csl.ridge = r;
    }
  }
  c.ucb = UcbConfig::defaults(c.n_nodes);
  if (j.contains("ucb")) {
    const json& u = j.at("ucb");
    check_keys(u, "ucb", {"t_explore", "delta", "alpha", "update_period", "lambda_prior", "vanilla_alpha"});
    read(u, "t_explore", c.ucb.t_explore);
    read(u, "delta", c.ucb.delta);
    read(u, "alpha", c.ucb.alpha);
    read(u, "update_period", c.ucb.update_period);
    read(u, "lambda_prior", c.ucb.lambda_prior);
    read(u, "vanilla_alpha", c.vanilla_alpha);
  }
  if (j.contains("changes")) {
    const json& ch = j.at("changes");
    check_keys(ch, "changes", {"steps", "p_change"});
    read(ch, "steps", c.change_steps);
    read(ch, "p_change", c.p_change);
  }
  if (j.contains("detector")) {
    const json& d = j.at("detector");
    check_keys(d, "detector", {"zeta", "window", "min_segment"});
    read(d, "zeta", c.detector.zeta);
    read(d, "window", c.detector.window);
    read(d, "min_segment", c.detector.min_segment);
  }
  read(j, "final_window", c.final_window);
  read(j, "threads", c.threads);
  std::string out = c.output.string();
  read(j, "output", out);
  c.output = out;
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigInvalid("config is not valid JSON: " + std::string(e.what()));
  }
  return from_json(j);
}

json ExperimentConfig::to_json() const {
  json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = kind == ExperimentKind::bandit ? "bandit" : "identification";
  j["n_nodes"] = n_nodes;
  j["horizon"] = horizon;
  j["mc_runs"] = mc_runs;
  j["seed"] = seed;
  j["edge_prob"] = generator.edge_prob;
  j["weight_range"] = {generator.weight_lo, generator.weight_hi};
  j["noise"] = {{"mean", generator.noise_mean}, {"var", generator.noise_var}};
  json names = json::array();
  for (auto p : policies) names.push_back(cbandit::to_string(p));
  j["policies"] = names;
  j["csl"] = {{"k", csl.mi_k}, {"ridge", csl.ridge ? json(*csl.ridge) : json(nullptr)}};
  j["ucb"] = {{"t_explore", ucb.t_explore},         {"delta", ucb.delta},
              {"alpha", ucb.alpha},                 {"update_period", ucb.update_period},
              {"lambda_prior", ucb.lambda_prior},   {"vanilla_alpha", vanilla_alpha}};
  j["changes"] = {{"steps", change_steps}, {"p_change", p_change}};
  j["detector"] = {{"zeta", detector.zeta}, {"window", detector.window}, {"min_segment", detector.min_segment}};
  j["final_window"] = final_window;
  j["threads"] = threads;
  j["output"] = output.string();
  return j;
}

void ExperimentConfig::validate() const {
  if (n_nodes < 2) throw ConfigInvalid("n_nodes must be at least 2");
  if (kind == ExperimentKind::bandit && n_nodes > kEnumerationCap) {
    throw ConfigInvalid("bandit experiments need n_nodes <= 14");
  }
  if (mc_runs < 1) throw ConfigInvalid("mc_runs must be at least 1");
  if (horizon < 1) throw ConfigInvalid("horizon must be positive");
  if (!(generator.weight_lo < generator.weight_hi)) throw ConfigInvalid("weight_range must be nondegenerate");
  if (!(generator.edge_prob >= 0.0 && generator.edge_prob <= 1.0)) throw ConfigInvalid("edge_prob must lie in [0, 1]");
  if (!(generator.noise_var > 0.0)) throw ConfigInvalid("noise variance must be positive");
  if (csl.mi_k < 1) throw ConfigInvalid("csl.k must be positive");
  if (csl.ridge && !(*csl.ridge >= 0.0)) throw ConfigInvalid("csl.ridge must be non-negative");
  if (policies.empty() && kind == ExperimentKind::bandit) throw ConfigInvalid("no policies configured");
  ucb.validate();
  if (kind == ExperimentKind::bandit && horizon < ucb.t_explore) throw ConfigInvalid("horizon must cover t_explore");
  if (!(vanilla_alpha >= 0.0)) throw ConfigInvalid("vanilla_alpha must be non-negative");
  if (!(p_change >= 0.0 && p_change <= 1.0)) throw ConfigInvalid("p_change must lie in [0, 1]");
  for (std::size_t k = 0; k < change_steps.size(); ++k) {
    if (change_steps[k] < 1 || (k > 0 && change_steps[k] <= change_steps[k - 1])) {
      throw ConfigInvalid("change steps must be positive and increasing");
    }
  }
  detector.validate();
  if (final_window < 1) throw ConfigInvalid("final_window must be positive");
  if (threads < 0) throw ConfigInvalid("threads must be non-negative");
}

Environment make_environment(const ExperimentConfig& cfg, int run) {
  Rng env_rng = make_rng(cfg.seed, static_cast<std::uint64_t>(run), Stream::environment);
  CausalBandit initial = generate_bandit(cfg.n_nodes, cfg.generator, env_rng);
  if (cfg.change_steps.empty()) return Environment(std::move(initial));
  Rng schedule = make_rng(cfg.seed, static_cast<std::uint64_t>(run), Stream::schedule);
  return Environment::piecewise(std::move(initial), cfg.change_steps, cfg.p_change, cfg.generator, schedule);
}

void fill_graph_metrics(RunMetrics& m, const CausalBandit& truth, const EstimatedModel& model,
                        bool both_modes) {
  SupportCounts pooled;
  bool fn = false;
  double shd = 0.0;
  const int modes = both_modes ? 2 : 1;
  for (int mode = 0; mode < modes; ++mode) {
    const Matrix& t = truth.mode_matrix(mode);
    const Matrix& e = model.b_hat[static_cast<std::size_t>(mode)];
    const SupportCounts c = support_counts(t, e);
    pooled.true_edges += c.true_edges;
    pooled.estimated_edges += c.estimated_edges;
    pooled.shared_edges += c.shared_edges;
    fn = fn || graph_fn_indicator(t, e);
    shd += cbandit::nshd(t, e);
  }
  const PrecisionRecall pr = precision_recall(pooled);
  m.graph_fn = fn ? 1 : 0;
  m.precision = pr.precision;
  m.recall = pr.recall;
  m.nshd = shd / modes;
}

void fill_detection_metrics(RunMetrics& m, const Environment& env, const std::vector<ChangeEvent>& events,
                            int horizon) {
  const auto& changes = env.change_steps();
  int true_changes = 0;
  int detected = 0;
  double delay_sum = 0.0;
  for (std::size_t k = 0; k < changes.size(); ++k) {
    const int c = changes[k];
    if (c >= horizon) continue;
    const int end = k + 1 < changes.size() ? changes[k + 1] : horizon;
    for (int node : env.changed_nodes()[k]) {
      ++true_changes;
      for (const auto& e : events) {
        if (e.node == node && e.detected_at > c && e.detected_at <= end) {
          ++detected;
          delay_sum += e.detected_at - c;
          break;
        }
      }
    }
  }
  int false_alarms = 0;
  for (const auto& e : events) {
    // An event is explained when its node changed at the latest change before it.
    bool explained = false;
    for (std::size_t k = changes.size(); k-- > 0;) {
      if (changes[k] < e.detected_at) {
        const auto& nodes = env.changed_nodes()[k];
        explained = std::find(nodes.begin(), nodes.end(), e.node) != nodes.end();
        break;
      }
    }
    false_alarms += !explained;
  }
  m.detections = static_cast<int>(events.size());
  m.true_changes = true_changes;
  m.detected_changes = detected;
  if (detected > 0) m.mean_delay = delay_sum / detected;
  m.false_alarms = false_alarms;
}

namespace {

RunMetrics policy_metrics(const ExperimentConfig& cfg, const Environment& env, int run, PolicyKind p,
                          const RunResult& r) {
  RunMetrics m;
  m.run = run;
  m.policy = to_string(p);
  m.final_regret = r.cumulative_regret();
  const int window = std::min(cfg.final_window, static_cast<int>(r.steps.size()));
  int hits = 0;
  for (auto it = r.steps.end() - window; it != r.steps.end(); ++it) hits += it->optimal;
  m.optimal_rate = static_cast<double>(hits) / window;
  if (r.model) fill_graph_metrics(m, env.bandit_at(cfg.horizon), *r.model, true);
  if (p == PolicyKind::csl_ucb_cd) fill_detection_metrics(m, env, r.changes, cfg.horizon);
  return m;
}

struct RunOutput {
  std::vector<RunMetrics> metrics;
  // Per policy: cumulative regret and optimal flag per step.
  std::vector<std::vector<double>> cumulative;
  std::vector<std::vector<std::uint8_t>> optimal;
};

RunOutput execute_run(const ExperimentConfig& cfg, int run) {
  RunOutput out;
  const Environment env = make_environment(cfg, run);
  const std::uint64_t run_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(run));
  if (cfg.kind == ExperimentKind::identification) {
    const CausalBandit& b = env.segment(0);
    Rng noise = make_rng(run_seed, 0, Stream::noise);
    const Intervention none(b.n());
    Matrix x(b.n(), cfg.horizon);
    for (int s = 0; s < cfg.horizon; ++s) x.col(s) = sample(b, none, noise);
    const GraphEstimate g = learn_graph(x, b.noise_mean(), cfg.csl);
    EstimatedModel model = EstimatedModel::empty(b.n(), b.noise_mean());
    model.b_hat[0] = g.weights;
    RunMetrics m;
    m.run = run;
    m.policy = "csl";
    fill_graph_metrics(m, b, model, false);
    out.metrics.push_back(m);
    return out;
  }
  for (PolicyKind p : cfg.policies) {
    RunResult r;
    switch (p) {
      case PolicyKind::csl_ucb: r = run_csl_ucb(env, cfg.ucb, cfg.csl, cfg.horizon, run_seed); break;
      case PolicyKind::csl_ucb_cd:
        r = run_csl_ucb_cd(env, cfg.ucb, cfg.csl, cfg.detector, cfg.horizon, run_seed);
        break;
      case PolicyKind::vanilla_ucb: r = run_vanilla_ucb(env, cfg.vanilla_alpha, cfg.horizon, run_seed); break;
      case PolicyKind::oracle: r = run_oracle(env, cfg.horizon, run_seed, OracleKnowledge::current); break;
      case PolicyKind::oracle_stale: r = run_oracle(env, cfg.horizon, run_seed, OracleKnowledge::initial); break;
    }
    out.metrics.push_back(policy_metrics(cfg, env, run, p, r));
    std::vector<double> cum;
    std::vector<std::uint8_t> opt;
    double acc = 0.0;
    for (const auto& s : r.steps) {
      acc += s.regret;
      cum.push_back(acc);
      opt.push_back(s.optimal ? 1 : 0);
    }
    out.cumulative.push_back(std::move(cum));
    out.optimal.push_back(std::move(opt));
  }
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<RunOutput> outputs(static_cast<std::size_t>(cfg.mc_runs));
  std::vector<std::exception_ptr> errors(outputs.size());
  std::atomic<int> next{0};
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int workers = std::min(cfg.mc_runs, cfg.threads > 0 ? cfg.threads : static_cast<int>(hw));
  auto work = [&] {
    for (int run = next++; run < cfg.mc_runs; run = next++) {
      try {
        outputs[static_cast<std::size_t>(run)] = execute_run(cfg, run);
      } catch (...) {
        errors[static_cast<std::size_t>(run)] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ExperimentResult result;
  for (auto& o : outputs) {
    for (auto& m : o.metrics) result.runs.push_back(std::move(m));
  }
  if (cfg.kind == ExperimentKind::bandit) {
    const double runs = cfg.mc_runs;
    for (std::size_t p = 0; p < cfg.policies.size(); ++p) {
      for (int t = 0; t < cfg.horizon; ++t) {
        double sum = 0.0;
        double sq = 0.0;
        double hits = 0.0;
        for (const auto& o : outputs) {
          const double v = o.cumulative[p][static_cast<std::size_t>(t)];
          sum += v;
          sq += v * v;
          hits += o.optimal[p][static_cast<std::size_t>(t)];
        }
        StepAggregate a;
        a.policy = to_string(cfg.policies[p]);
        a.step = t + 1;
        a.regret_mean = sum / runs;
        a.regret_std = runs > 1 ? std::sqrt(std::max(0.0, (sq - sum * sum / runs) / (runs - 1))) : 0.0;
        a.optimal_rate = hits / runs;
        result.steps.push_back(a);
      }
    }
  }
  return result;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

const char* kPerRunHeader =
    "format_version,run,policy,final_regret,optimal_rate,graph_fn,precision,recall,nshd,detections,true_changes,"
    "detected_changes,mean_delay,false_alarms";

template <class T>
std::string cell(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_same_v<T, double>) {
    return format_double(*v);
  } else {
    return std::to_string(*v);
  }
}

template <class T>
std::optional<T> parse_cell(const std::string& s) {
  if (s.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    T v;
    if constexpr (std::is_same_v<T, double>) {
      v = std::stod(s, &used);
    } else {
      v = std::stoi(s, &used);
    }
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigInvalid("per_run.csv: bad cell '" + s + "'");
  }
}

}  // namespace

std::string per_run_csv(const std::vector<RunMetrics>& runs) {
  std::ostringstream out;
  out << kPerRunHeader << '\n';
  for (const auto& m : runs) {
    out << kFormatVersion << ',' << m.run << ',' << m.policy << ',' << cell(m.final_regret) << ',' << cell(m.optimal_rate) << ','
        << cell(m.graph_fn) << ',' << cell(m.precision) << ',' << cell(m.recall) << ',' << cell(m.nshd) << ','
        << cell(m.detections) << ',' << cell(m.true_changes) << ',' << cell(m.detected_changes) << ','
        << cell(m.mean_delay) << ',' << cell(m.false_alarms) << '\n';
  }
  return out.str();
}

std::vector<RunMetrics> parse_per_run_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kPerRunHeader) throw ConfigInvalid("per_run.csv: unexpected header");
  std::vector<RunMetrics> runs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) f.push_back(field);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 14) throw ConfigInvalid("per_run.csv: expected 14 columns");
    if (parse_cell<int>(f[0]) != kFormatVersion) throw ConfigInvalid("per_run.csv: unsupported format_version");
    f.erase(f.begin());
    RunMetrics m;
    m.run = parse_cell<int>(f[0]).value_or(0);
    m.policy = f[1];
    m.final_regret = parse_cell<double>(f[2]);
    m.optimal_rate = parse_cell<double>(f[3]);
    m.graph_fn = parse_cell<int>(f[4]);
    m.precision = parse_cell<double>(f[5]);
    m.recall = parse_cell<double>(f[6]);
    m.nshd = parse_cell<double>(f[7]);
    m.detections = parse_cell<int>(f[8]);
    m.true_changes = parse_cell<int>(f[9]);
    m.detected_changes = parse_cell<int>(f[10]);
    m.mean_delay = parse_cell<double>(f[11]);
    m.false_alarms = parse_cell<int>(f[12]);
    runs.push_back(std::move(m));
  }
  return runs;
}

std::string per_step_csv(const std::vector<StepAggregate>& steps) {
  std::ostringstream out;
  out << "format_version,policy,step,regret_mean,regret_std,optimal_rate\n";
  for (const auto& s : steps) {
    out << kFormatVersion << ',' << s.policy << ',' << s.step << ',' << format_double(s.regret_mean) << ',' << format_double(s.regret_std)
        << ',' << format_double(s.optimal_rate) << '\n';
  }
  return out.str();
}

namespace {

struct Mean {
  double sum = 0.0;
  double sq = 0.0;
  int count = 0;
  int undefined = 0;

  template <class T>
  void add(const std::optional<T>& v) {
    if (!v) {
      ++undefined;
      return;
    }
    sum += static_cast<double>(*v);
    sq += static_cast<double>(*v) * static_cast<double>(*v);
    ++count;
  }
  json mean() const { return count ? json(sum / count) : json(nullptr); }
  json stdev() const {
    if (count < 2) return json(nullptr);
    return json(std::sqrt(std::max(0.0, (sq - sum * sum / count) / (count - 1))));
  }
};

}  // namespace

json summarize(const std::vector<RunMetrics>& runs) {
  // Policies keep first-appearance order; sums run in ascending run index
  // so the result does not depend on how runs were scheduled.
  std::vector<std::string> order;
  std::map<std::string, std::vector<const RunMetrics*>> by_policy;
  for (const auto& m : runs) {
    if (!by_policy.count(m.policy)) order.push_back(m.policy);
    by_policy[m.policy].push_back(&m);
  }
  json policies = json::object();
  for (const auto& name : order) {
    auto rows = by_policy[name];
    std::stable_sort(rows.begin(), rows.end(), [](auto* a, auto* b) { return a->run < b->run; });
    Mean regret, optimal, fn, precision, recall, shd, delay, alarms;
    int true_changes = 0;
    int detected = 0;
    bool has_detection = false;
    for (const auto* m : rows) {
      regret.add(m->final_regret);
      optimal.add(m->optimal_rate);
      fn.add(m->graph_fn);
      precision.add(m->precision);
      recall.add(m->recall);
      shd.add(m->nshd);
      if (m->true_changes) {
        has_detection = true;
        true_changes += *m->true_changes;
        detected += m->detected_changes.value_or(0);
        if (m->mean_delay && m->detected_changes) {
          delay.sum += *m->mean_delay * *m->detected_changes;
          delay.count += *m->detected_changes;
        }
        alarms.add(m->false_alarms);
      }
    }
    json p;
    p["runs"] = rows.size();
    p["final_regret_mean"] = regret.mean();
    p["final_regret_std"] = regret.stdev();
    p["optimal_rate_mean"] = optimal.mean();
    p["graph_fn_rate"] = fn.mean();
    p["precision_mean"] = precision.mean();
    p["precision_undefined"] = precision.count ? precision.undefined : 0;
    p["recall_mean"] = recall.mean();
    p["nshd_mean"] = shd.mean();
    if (has_detection) {
      p["true_changes"] = true_changes;
      p["detected_changes"] = detected;
      p["detection_rate"] = true_changes ? json(static_cast<double>(detected) / true_changes) : json(nullptr);
      p["mean_delay"] = delay.mean();
      p["false_alarms_mean"] = alarms.mean();
    }
    policies[name] = p;
  }
  return json{{"format_version", kFormatVersion}, {"policies", policies}};
}

std::string dump_summary(const json& summary) { return summary.dump(2) + "\n"; }

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

void write_results(const ExperimentConfig& cfg, const ExperimentResult& result,
                   const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  write_file(dir / "per_run.csv", per_run_csv(result.runs));
  write_file(dir / "per_step.csv", per_step_csv(result.steps));
  write_file(dir / "summary.json", dump_summary(summarize(result.runs)));
  write_file(dir / "config.json", cfg.to_json().dump(2) + "\n");
}

}  // namespace cbandit
