#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "snd/analysis.hpp"
#include "snd/simgen.hpp"
#include "snd/snd.hpp"
#include "snd/util.hpp"

namespace snd::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct ModelOptions {
  std::string model = "agnostic";
  std::string model_config;
  std::optional<std::int64_t> bank_gamma;
  bool asymmetric = false;
};

struct Options {
  std::string config;
  std::string manifest;
  ModelOptions model;

  // distance / detect / predict
  std::string graph;
  std::string states;
  std::string measure = "snd";
  bool dense = false;
  bool fast = false;
  std::string out;

  // detect
  std::string distances;
  std::string truth;
  std::string roc_out;
  double threshold = 0.5;

  // predict
  std::size_t targets = 20;
  std::vector<std::string> methods;
  std::size_t samples = 100;
  std::size_t trials = 10;
  std::size_t history = 3;
  std::uint64_t seed = 1;

  // generate
  std::size_t n = 2000;
  double gamma = -2.3;
  double pnbr = 0.12;
  double pext = 0.01;
  double anomaly_pnbr = 0.08;
  double anomaly_pext = 0.05;
  std::size_t steps = 40;
  std::size_t anomaly_steps = 0;
  std::size_t adopters = 100;
  double activation_fraction = 0.1;

  // bench
  std::vector<std::size_t> sizes;
  std::size_t ndelta = 200;
  std::size_t active = 1000;
  std::size_t dense_max = 2000;
  std::size_t repeats = 3;
};

/// Everything recorded in the run manifest.
struct Record {
  std::string command;
  json config = json::object();
  json seeds = json::object();
  json inputs = json::object();
  json outputs = json::object();
  json results = json::object();
};

void add_model_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--model", o.model.model, "ground-distance model: agnostic, icc, ltc");
  cmd->add_option("--model-config", o.model.model_config, "JSON file with ground-model parameters");
  cmd->add_option("--bank-gamma", o.model.bank_gamma, "bank distance for EMD* (default: derived)");
  cmd->add_flag("--asymmetric", o.model.asymmetric, "only the forward terms of SND");
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "JSON file whose keys override flag defaults");
  cmd->add_option("--manifest", o.manifest, "manifest path (default: <out>.manifest.json)");
}

std::unique_ptr<CLI::App> build_app(Options& o) {
  auto app = std::make_unique<CLI::App>("Social network distance tools", "snd");
  app->require_subcommand(1);
  app->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  auto* distance = app->add_subcommand("distance", "distance series between consecutive states");
  add_common(distance, o);
  add_model_options(distance, o);
  distance->add_option("--graph", o.graph, "network JSON")->required();
  distance->add_option("--states", o.states, "state series CSV")->required();
  distance->add_option("--measure", o.measure, "snd, hamming, quadform, walkdist");
  distance->add_flag("--dense", o.dense, "dense SND path");
  distance->add_flag("--fast", o.fast, "fast SND path (default)");
  distance->add_option("--out", o.out, "distance CSV")->required();

  auto* detect = app->add_subcommand("detect", "anomaly scores and ROC");
  add_common(detect, o);
  add_model_options(detect, o);
  detect->add_option("--distances", o.distances, "distance CSV from the distance command");
  detect->add_option("--graph", o.graph, "network JSON (with --states)");
  detect->add_option("--states", o.states, "state series CSV (with --graph)");
  detect->add_option("--measure", o.measure, "measure when computing from states");
  detect->add_flag("--dense", o.dense, "dense SND path");
  detect->add_option("--truth", o.truth, "anomalous transitions: comma list or JSON file");
  detect->add_option("--roc-out", o.roc_out, "ROC points CSV (needs --truth)");
  detect->add_option("--threshold", o.threshold, "flag transitions with score above this");
  detect->add_option("--out", o.out, "score CSV")->required();

  auto* predict = app->add_subcommand("predict", "opinion prediction accuracy table");
  add_common(predict, o);
  add_model_options(predict, o);
  predict->add_option("--graph", o.graph, "network JSON")->required();
  predict->add_option("--states", o.states, "state series CSV; the last state is the truth")
      ->required();
  predict->add_option("--targets", o.targets, "targets per trial");
  predict->add_option("--methods", o.methods,
                      "snd, hamming, quad-form, walk-dist, nhood-voting, community-lp")
      ->expected(1, -1);
  predict->add_option("--samples", o.samples, "random assignments per prediction");
  predict->add_option("--trials", o.trials, "trials");
  predict->add_option("--history", o.history, "observed states before the current one");
  predict->add_option("--seed", o.seed, "seed");
  predict->add_flag("--dense", o.dense, "dense SND path");
  predict->add_option("--out", o.out, "accuracy CSV")->required();

  auto* generate = app->add_subcommand("generate", "synthetic network and state series");
  add_common(generate, o);
  generate->add_option("--n", o.n, "users");
  generate->add_option("--gamma", o.gamma, "scale-free exponent in [-2.9, -2.1]");
  generate->add_option("--pnbr", o.pnbr, "neighbor adoption probability");
  generate->add_option("--pext", o.pext, "external adoption probability");
  generate->add_option("--anomaly-pnbr", o.anomaly_pnbr, "neighbor adoption at anomalies");
  generate->add_option("--anomaly-pext", o.anomaly_pext, "external adoption at anomalies");
  generate->add_option("--steps", o.steps, "transitions (the series has steps + 1 states)");
  generate->add_option("--anomaly-steps", o.anomaly_steps, "number of anomalous transitions");
  generate->add_option("--adopters", o.adopters, "initial adopters");
  generate->add_option("--activation-fraction", o.activation_fraction,
                       "share of neutral users given a chance per step");
  generate->add_option("--seed", o.seed, "seed");
  generate->add_option("--out", o.out, "output directory")->required();

  auto* bench = app->add_subcommand("bench", "SND wall time against network size");
  add_common(bench, o);
  add_model_options(bench, o);
  bench->add_option("--sizes", o.sizes, "network sizes")->expected(0, -1)->required();
  bench->add_option("--ndelta", o.ndelta, "changed users per transition");
  bench->add_option("--active", o.active, "active users in the earlier state");
  bench->add_option("--dense-max", o.dense_max, "largest n timed on the dense path");
  bench->add_option("--repeats", o.repeats, "timings per point (minimum is reported)");
  bench->add_option("--seed", o.seed, "seed");
  bench->add_option("--out", o.out, "timing CSV")->required();
  return app;
}

CLI::App* chosen(CLI::App& app) {
  auto subs = app.get_subcommands();
  return subs.empty() ? nullptr : subs.front();
}

/// Command-line tokens for config keys the user did not pass explicitly.
std::vector<std::string> config_tokens(const CLI::App& cmd, const std::string& path,
                                       const std::set<std::string>& explicit_keys) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  if (!cfg.is_object()) throw ConfigError("config file must hold a JSON object");
  std::vector<std::string> tokens;
  auto scalar = [](const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number() || v.is_boolean()) return v.dump();
    throw ConfigError("config values must be strings, numbers, booleans, or arrays of these");
  };
  for (const auto& [key, value] : cfg.items()) {
    if (key == "config" || key == "manifest") continue;
    const CLI::Option* opt = cmd.get_option_no_throw("--" + key);
    if (!opt) throw ConfigError("unknown config key '" + key + "'");
    if (explicit_keys.count(key)) continue;  // explicit flags win
    if (opt->get_type_size() == 0) {  // flag
      if (!value.is_boolean()) throw ConfigError("config key '" + key + "' must be a boolean");
      if (value.get<bool>()) tokens.push_back("--" + key);
      continue;
    }
    tokens.push_back("--" + key);
    if (value.is_array()) {
      for (const auto& v : value) tokens.push_back(scalar(v));
    } else {
      tokens.push_back(scalar(value));
    }
  }
  return tokens;
}

/// Arguments with config-file values inserted right after the subcommand.
std::vector<std::string> with_config(CLI::App& app, const std::vector<std::string>& args) {
  const auto sub = std::find_if(args.begin(), args.end(),
                                [](const std::string& a) { return !a.starts_with("-"); });
  if (sub == args.end()) return args;
  const CLI::App* cmd = nullptr;
  try {
    cmd = app.get_subcommand(*sub);
  } catch (const CLI::OptionNotFound&) {
    return args;  // let the parser report it
  }
  std::string path;
  std::set<std::string> explicit_keys;
  for (auto it = sub + 1; it != args.end(); ++it) {
    if (!it->starts_with("--")) continue;
    const std::size_t eq = it->find('=');
    const std::string key = it->substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
    explicit_keys.insert(key);
    if (key == "config") {
      if (eq != std::string::npos) {
        path = it->substr(eq + 1);
      } else if (it + 1 != args.end()) {
        path = *(it + 1);
      }
    }
  }
  if (path.empty()) return args;
  std::vector<std::string> merged(args.begin(), sub + 1);
  for (auto& t : config_tokens(*cmd, path, explicit_keys)) merged.push_back(std::move(t));
  merged.insert(merged.end(), sub + 1, args.end());
  return merged;
}

json option_snapshot(const CLI::App& cmd) {
  json snap = json::object();
  for (const CLI::Option* opt : cmd.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help") continue;
    if (opt->get_type_size() == 0) {
      snap[name] = opt->count() > 0;
    } else if (opt->count() > 0) {
      const auto& r = opt->results();
      snap[name] = r.size() == 1 ? json(r.front()) : json(r);
    } else if (!opt->get_default_str().empty()) {
      snap[name] = opt->get_default_str();
    }
  }
  return snap;
}

void write_manifest(const std::string& path, const Record& rec, double seconds, int status,
                    const std::string& error) {
  json m;
  m["command"] = rec.command;
  m["config"] = rec.config;
  m["seeds"] = rec.seeds;
  m["inputs"] = rec.inputs;
  json outputs = json::object();
  for (const auto& [key, p] : rec.outputs.items()) {
    outputs[key] = {{"path", p}, {"digest", file_digest(p.get<std::string>())}};
  }
  m["outputs"] = outputs;
  m["results"] = rec.results;
  m["wall_time_seconds"] = seconds;
  m["exit_code"] = status;
  if (!error.empty()) m["error"] = error;
  std::ofstream f(path);
  f << m.dump(2) << '\n';
}

void note_input(Record& rec, const std::string& key, const std::string& path) {
  const std::string digest = file_digest(path);
  if (digest.empty()) throw ValidationError("cannot read input file '" + path + "'");
  rec.inputs[key] = {{"path", path}, {"digest", digest}};
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot write output file '" + path + "'");
  return f;
}

SndConfig snd_config(const ModelOptions& m) {
  SndConfig config;
  if (!m.model_config.empty()) {
    std::ifstream in(m.model_config);
    if (!in) throw ConfigError("cannot open model config '" + m.model_config + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    config.model = parse_ground_model(buf.str());
    if (m.model != "agnostic" && model_from_string(m.model) != config.model.kind) {
      throw ConfigError("--model disagrees with the model config file");
    }
  } else {
    config.model = GroundModel::defaults(model_from_string(m.model));
  }
  config.model.validate();
  config.bank_gamma = m.bank_gamma;
  config.symmetric = !m.asymmetric;
  return config;
}

DistanceSeries read_distance_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open distance file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ParseError("distance file is empty");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  auto column = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw ParseError("distance file lacks column '" + name + "'");
  };
  const std::size_t c_raw = column("raw");
  const std::size_t c_active = column("active");
  DistanceSeries series;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != header.size()) {
      throw ParseError("distance file row " + std::to_string(row) + " has wrong column count");
    }
    DistanceRecord r;
    r.t = series.size();
    try {
      std::size_t used = 0;
      r.raw = std::stod(cells[c_raw], &used);
      if (used != cells[c_raw].size()) throw std::invalid_argument("trailing");
      r.active = std::stoull(cells[c_active], &used);
      if (used != cells[c_active].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError("distance file row " + std::to_string(row) + " is not numeric");
    }
    series.push_back(r);
  }
  rescale(series);
  return series;
}

std::set<std::size_t> read_truth(const std::string& arg) {
  std::set<std::size_t> truth;
  if (fs::is_regular_file(arg)) {
    std::ifstream in(arg);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw ParseError("truth file: " + std::string(e.what()));
    }
    if (j.is_object() && j.contains("anomalies")) j = j["anomalies"];
    if (!j.is_array()) throw ParseError("truth file must hold an array of transition indices");
    for (const auto& v : j) {
      if (!v.is_number_unsigned()) throw ParseError("truth entries must be nonnegative integers");
      truth.insert(v.get<std::size_t>());
    }
    return truth;
  }
  std::stringstream ss(arg);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (cell.empty()) continue;
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(cell, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != cell.size()) throw ParseError("bad transition index '" + cell + "' in --truth");
    truth.insert(static_cast<std::size_t>(v));
  }
  return truth;
}

// ---------------------------------------------------------------------------
// Commands

void cmd_distance(const Options& o, Record& rec, std::ostream& out) {
  if (o.dense && o.fast) throw ConfigError("--fast and --dense are exclusive");
  const Measure measure = measure_from_string(o.measure);
  const SndConfig config = snd_config(o.model);
  note_input(rec, "graph", o.graph);
  note_input(rec, "states", o.states);
  const Network network = load_network(o.graph);
  const StateSeries series = load_state_series(o.states, network);
  const MeasureContext context(network, config, !o.dense);
  const DistanceSeries ds = distance_series(series, measure, context);
  auto f = open_output(o.out);
  write_distance_csv(f, ds);
  f.close();
  rec.outputs["distances"] = o.out;
  rec.results["transitions"] = ds.size();
  out << "wrote " << ds.size() << " distances to " << o.out << '\n';
}

void cmd_detect(const Options& o, Record& rec, std::ostream& out) {
  DistanceSeries ds;
  if (!o.distances.empty()) {
    if (!o.graph.empty() || !o.states.empty()) {
      throw ConfigError("use either --distances or --graph/--states");
    }
    note_input(rec, "distances", o.distances);
    ds = read_distance_csv(o.distances);
  } else {
    if (o.graph.empty() || o.states.empty()) {
      throw ConfigError("detect needs --distances or both --graph and --states");
    }
    const Measure measure = measure_from_string(o.measure);
    const SndConfig config = snd_config(o.model);
    note_input(rec, "graph", o.graph);
    note_input(rec, "states", o.states);
    const Network network = load_network(o.graph);
    const StateSeries series = load_state_series(o.states, network);
    ds = distance_series(series, measure, MeasureContext(network, config, !o.dense));
  }
  if (!o.roc_out.empty() && o.truth.empty()) throw ConfigError("--roc-out needs --truth");
  const AnomalyReport report = anomaly_scores(ds);
  std::vector<std::size_t> rank(ds.size(), 0);
  for (std::size_t i = 0; i < report.ranking.size(); ++i) rank[report.ranking[i]] = i + 1;
  auto f = open_output(o.out);
  f << "t,score,rank,flagged\n";
  std::size_t flagged = 0;
  for (std::size_t t = 0; t < ds.size(); ++t) {
    f << t << ',';
    if (report.scores[t]) {
      const bool flag = *report.scores[t] > o.threshold;
      flagged += flag;
      f << format_fixed(*report.scores[t], 9) << ',' << rank[t] << ',' << (flag ? 1 : 0);
    } else {
      f << ",,0";
    }
    f << '\n';
  }
  f.close();
  rec.outputs["scores"] = o.out;
  rec.results["flagged"] = flagged;
  out << "flagged " << flagged << " of " << report.ranking.size() << " scored transitions\n";
  if (!o.truth.empty()) {
    const RocCurve curve = roc(report, read_truth(o.truth));
    rec.results["auc"] = curve.auc;
    rec.results["tpr_at_fpr_0.3"] = curve.tpr_at(0.3);
    out << "auc " << format_fixed(curve.auc, 4) << " tpr@0.3 " << format_fixed(curve.tpr_at(0.3), 4)
        << '\n';
    if (!o.roc_out.empty()) {
      auto r = open_output(o.roc_out);
      write_roc_csv(r, curve);
      r.close();
      rec.outputs["roc"] = o.roc_out;
    }
  }
}

void cmd_predict(const Options& o, Record& rec, std::ostream& out) {
  std::vector<Method> methods;
  for (const auto& name : o.methods) methods.push_back(method_from_string(name));
  if (methods.empty()) {
    methods = {Method::Snd,      Method::Hamming,     Method::QuadForm,
               Method::WalkDist, Method::NhoodVoting, Method::CommunityLp};
  }
  if (o.samples == 0) throw ConfigError("--samples must be positive");
  if (o.trials == 0) throw ConfigError("--trials must be positive");
  if (o.targets == 0) throw ConfigError("--targets must be positive");
  if (o.history < 2) throw ConfigError("--history must be at least 2");
  const SndConfig config = snd_config(o.model);
  note_input(rec, "graph", o.graph);
  note_input(rec, "states", o.states);
  const Network network = load_network(o.graph);
  const StateSeries series = load_state_series(o.states, network);
  ExperimentParams params;
  params.targets = o.targets;
  params.samples = o.samples;
  params.trials = o.trials;
  params.history = o.history;
  params.seed = o.seed;
  rec.seeds["prediction"] = o.seed;
  const auto table =
      prediction_experiment(series, methods, params, MeasureContext(network, config, !o.dense));
  auto f = open_output(o.out);
  write_accuracy_csv(f, table);
  f.close();
  rec.outputs["accuracy"] = o.out;
  for (const auto& m : table) {
    rec.results[m.method] = {{"mean", m.mean}, {"stddev", m.stddev}};
    out << m.method << ' ' << format_fixed(m.mean, 2) << " +- " << format_fixed(m.stddev, 2)
        << '\n';
  }
}

void cmd_generate(const Options& o, Record& rec, std::ostream& out) {
  SimParams params;
  params.n = o.n;
  params.sf_exponent = o.gamma;
  params.rates = {o.pnbr, o.pext};
  params.steps = o.steps;
  params.initial_adopters = o.adopters;
  params.activation_fraction = o.activation_fraction;
  params.seed = o.seed;
  const SyntheticData data = generate(params, {o.anomaly_pnbr, o.anomaly_pext}, o.anomaly_steps);
  std::error_code ec;
  fs::create_directories(o.out, ec);
  if (!fs::is_directory(o.out)) throw ValidationError("cannot create directory '" + o.out + "'");
  const std::string net_path = (fs::path(o.out) / "network.json").string();
  const std::string states_path = (fs::path(o.out) / "states.csv").string();
  const std::string anomalies_path = (fs::path(o.out) / "anomalies.json").string();
  write_network(data.network, net_path);
  write_state_series(data.series, states_path);
  {
    auto f = open_output(anomalies_path);
    f << json{{"anomalies", data.anomalies}}.dump() << '\n';
  }
  rec.seeds["master"] = o.seed;
  rec.seeds["network"] = mix_seed(o.seed, 1);
  rec.seeds["anomaly_selection"] = mix_seed(o.seed, 2);
  rec.outputs["network"] = net_path;
  rec.outputs["states"] = states_path;
  rec.outputs["anomalies"] = anomalies_path;
  rec.results["edges"] = data.network.edge_count();
  rec.results["anomalies"] = data.anomalies;
  out << "generated " << data.network.node_count() << " users, " << data.network.edge_count()
      << " edges, " << data.series.size() << " states in " << o.out << '\n';
}

void cmd_bench(const Options& o, Record& rec, std::ostream& out) {
  if (o.sizes.empty()) throw ConfigError("--sizes must list at least one network size");
  if (o.repeats == 0) throw ConfigError("--repeats must be positive");
  const SndConfig config = snd_config(o.model);
  rec.seeds["master"] = o.seed;
  auto f = open_output(o.out);
  f << "n,n_delta,path,seconds\n";
  for (std::size_t n : o.sizes) {
    if (o.active + o.ndelta > n) {
      throw ConfigError("n = " + std::to_string(n) + " is too small for --active + --ndelta");
    }
    const Network network = gen_scale_free(n, -2.3, mix_seed(o.seed, n));
    const NetworkState g1 = initial_state(n, o.active, mix_seed(o.seed, n + 1));
    const NetworkState g2 = random_transition(network, g1, o.ndelta, mix_seed(o.seed, n + 2));
    auto time_it = [&](auto&& fn) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < o.repeats; ++r) {
        const auto start = std::chrono::steady_clock::now();
        fn();
        const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
        best = std::min(best, took.count());
      }
      return best;
    };
    const double fast = time_it([&] { (void)fast_snd(g1, g2, network, config); });
    f << n << ',' << o.ndelta << ",fast," << format_fixed(fast, 6) << '\n';
    out << "n=" << n << " fast " << format_fixed(fast, 4) << "s";
    if (n <= o.dense_max) {
      const double dense = time_it([&] { (void)snd_dense(g1, g2, network, config); });
      f << n << ',' << o.ndelta << ",dense," << format_fixed(dense, 6) << '\n';
      out << " dense " << format_fixed(dense, 4) << "s";
    }
    out << '\n';
  }
  f.close();
  rec.outputs["timings"] = o.out;
}

int classify(const std::exception& e) {
  if (dynamic_cast<const InputError*>(&e)) return kInputError;
  if (dynamic_cast<const ConfigError*>(&e)) return kConfigError;
  return kSolverError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  auto app = build_app(o);
  try {
    std::vector<std::string> merged = with_config(*app, args);
    std::reverse(merged.begin(), merged.end());
    app->parse(merged);
  } catch (const CLI::CallForHelp&) {
    out << app->help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app->help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return classify(e);
  }

  CLI::App* cmd = chosen(*app);
  Record rec;
  rec.command = cmd->get_name();
  rec.config = option_snapshot(*cmd);
  std::string manifest = o.manifest;
  if (manifest.empty()) {
    manifest = rec.command == "generate" ? (fs::path(o.out) / "manifest.json").string()
                                         : o.out + ".manifest.json";
  }

  const auto start = std::chrono::steady_clock::now();
  int status = kOk;
  std::string message;
  try {
    if (rec.command == "distance") cmd_distance(o, rec, out);
    else if (rec.command == "detect") cmd_detect(o, rec, out);
    else if (rec.command == "predict") cmd_predict(o, rec, out);
    else if (rec.command == "generate") cmd_generate(o, rec, out);
    else if (rec.command == "bench") cmd_bench(o, rec, out);
  } catch (const std::exception& e) {
    status = classify(e);
    message = e.what();
    err << "error: " << message << '\n';
  }
  const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
  if (rec.command == "generate" && !fs::is_directory(o.out)) return status;
  write_manifest(manifest, rec, took.count(), status, message);
  return status;
}

}  // namespace snd::cli
