#include "snd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

#include "snd/simgen.hpp"
#include "snd/util.hpp"

namespace snd {

std::string to_string(Measure m) {
  switch (m) {
    case Measure::Snd: return "snd";
    case Measure::Hamming: return "hamming";
    case Measure::QuadForm: return "quadform";
    case Measure::WalkDist: return "walkdist";
  }
  return "unknown";
}

Measure measure_from_string(const std::string& name) {
  if (name == "snd") return Measure::Snd;
  if (name == "hamming") return Measure::Hamming;
  if (name == "quadform" || name == "quad-form") return Measure::QuadForm;
  if (name == "walkdist" || name == "walk-dist") return Measure::WalkDist;
  throw ConfigError("unknown measure '" + name + "'");
}

MeasureContext::MeasureContext(const Network& network, SndConfig config, bool fast)
    : network_(&network), config_(std::move(config)), fast_(fast), laplacian_(network) {}

const Laplacian& MeasureContext::laplacian() const { return *laplacian_; }

double MeasureContext::distance(Measure m, const NetworkState& a, const NetworkState& b) const {
  switch (m) {
    case Measure::Snd:
      return fast_ ? fast_snd(a, b, *network_, config_).value
                   : snd_dense(a, b, *network_, config_).value;
    case Measure::Hamming: return static_cast<double>(hamming(a, b));
    case Measure::QuadForm: return quad_form(a, b, *laplacian_);
    case Measure::WalkDist: return walk_dist(a, b, *network_);
  }
  throw ConfigError("unknown measure");
}

// ---------------------------------------------------------------------------
// Anomaly detection

void rescale(DistanceSeries& series) {
  if (series.empty()) return;
  for (auto& r : series) {
    r.normalized = r.active > 0 ? r.raw / static_cast<double>(r.active) : 0.0;
  }
  const auto [lo, hi] = std::minmax_element(
      series.begin(), series.end(),
      [](const DistanceRecord& a, const DistanceRecord& b) { return a.normalized < b.normalized; });
  const double min = lo->normalized;
  const double span = hi->normalized - min;
  for (auto& r : series) r.scaled = span > 0 ? (r.normalized - min) / span : 0.0;
}

DistanceSeries distance_series(const StateSeries& series, Measure measure,
                               const MeasureContext& context) {
  if (series.size() < 2) throw ValidationError("distance series needs at least two states");
  DistanceSeries out(series.size() - 1);
  parallel_for(out.size(), [&](std::size_t t) {
    out[t].t = t;
    out[t].raw = context.distance(measure, series[t], series[t + 1]);
    out[t].active = series[t + 1].active_count();
  });
  rescale(out);
  return out;
}

AnomalyReport anomaly_scores(const std::vector<double>& d) {
  if (d.size() < 3) throw ValidationError("distance series too short for anomaly scores");
  AnomalyReport report;
  report.scores.resize(d.size());
  for (std::size_t t = 1; t + 1 < d.size(); ++t) {
    report.scores[t] = (d[t] - d[t - 1]) + (d[t] - d[t + 1]);
    report.ranking.push_back(t);
  }
  std::stable_sort(report.ranking.begin(), report.ranking.end(),
                   [&](std::size_t a, std::size_t b) { return *report.scores[a] > *report.scores[b]; });
  return report;
}

AnomalyReport anomaly_scores(const DistanceSeries& series) {
  std::vector<double> d;
  d.reserve(series.size());
  for (const auto& r : series) d.push_back(r.scaled);
  return anomaly_scores(d);
}

double RocCurve::tpr_at(double fpr_limit) const {
  double best = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [f, t] = points[i];
    if (f <= fpr_limit) {
      best = std::max(best, t);
    } else if (i > 0) {
      const auto [f0, t0] = points[i - 1];
      if (f0 <= fpr_limit && f > f0) {
        best = std::max(best, t0 + (t - t0) * (fpr_limit - f0) / (f - f0));
      }
    }
  }
  return best;
}

RocCurve roc_from_scores(const std::vector<double>& scores, const std::vector<bool>& positive) {
  if (scores.size() != positive.size()) throw ValidationError("scores and labels differ in length");
  const std::size_t pos = static_cast<std::size_t>(std::count(positive.begin(), positive.end(), true));
  const std::size_t neg = positive.size() - pos;
  if (pos == 0) throw ValidationError("ROC needs at least one positive item");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  RocCurve curve;
  curve.points.emplace_back(0.0, 0.0);
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      positive[order[j]] ? ++tp : ++fp;
      ++j;
    }
    curve.points.emplace_back(neg > 0 ? static_cast<double>(fp) / static_cast<double>(neg) : 0.0,
                              static_cast<double>(tp) / static_cast<double>(pos));
    i = j;
  }
  if (neg == 0) curve.points.emplace_back(1.0, 1.0);
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto [f0, t0] = curve.points[i - 1];
    const auto [f1, t1] = curve.points[i];
    curve.auc += (f1 - f0) * (t0 + t1) / 2;
  }
  return curve;
}

RocCurve roc(const AnomalyReport& report, const std::set<std::size_t>& truth) {
  std::vector<double> scores;
  std::vector<bool> labels;
  for (std::size_t t = 0; t < report.scores.size(); ++t) {
    if (!report.scores[t]) continue;
    scores.push_back(*report.scores[t]);
    labels.push_back(truth.count(t) > 0);
  }
  return roc_from_scores(scores, labels);
}

// ---------------------------------------------------------------------------
// Prediction

double extrapolate(const std::vector<double>& d) {
  if (d.empty()) throw ValidationError("no history distances to extrapolate");
  const std::size_t k = d.size();
  if (k == 1) return d[0];
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < k; ++i) {
    mx += static_cast<double>(i + 1);
    my += d[i];
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double dx = static_cast<double>(i + 1) - mx;
    sxy += dx * (d[i] - my);
    sxx += dx * dx;
  }
  const double slope = sxy / sxx;
  return my + slope * (static_cast<double>(k + 1) - mx);
}

Prediction predict_opinions(const PredictionTask& task, Measure measure,
                            const MeasureContext& context) {
  if (task.targets.empty()) throw ValidationError("no prediction targets");
  if (task.history.size() < 2) throw ValidationError("prediction needs at least two history states");
  if (task.samples == 0) throw ConfigError("assignment samples must be positive");
  std::vector<double> past(task.history.size() - 1);
  for (std::size_t i = 0; i + 1 < task.history.size(); ++i) {
    past[i] = context.distance(measure, task.history[i], task.history[i + 1]);
  }
  const double target = extrapolate(past);

  std::vector<std::vector<std::int8_t>> assignments(task.samples);
  std::vector<double> achieved(task.samples);
  parallel_for(task.samples, [&](std::size_t s) {
    std::mt19937_64 rng(mix_seed(task.seed, s));
    std::bernoulli_distribution coin(0.5);
    auto& values = assignments[s];
    values.resize(task.targets.size());
    for (auto& v : values) v = coin(rng) ? kPositive : kNegative;
    achieved[s] = context.distance(measure, task.history.back(),
                                   task.current.with(task.targets, values));
  });
  std::size_t best = 0;
  for (std::size_t s = 1; s < task.samples; ++s) {
    if (std::fabs(achieved[s] - target) < std::fabs(achieved[best] - target)) best = s;
  }
  return Prediction{task.current.with(task.targets, assignments[best]), target, achieved[best]};
}

double accuracy(const NetworkState& predicted, const NetworkState& truth,
                const std::vector<NodeId>& targets) {
  if (targets.empty()) return 0.0;
  std::size_t hits = 0;
  for (NodeId t : targets) hits += predicted[t] == truth[t];
  return 100.0 * static_cast<double>(hits) / static_cast<double>(targets.size());
}

std::string to_string(Method m) {
  switch (m) {
    case Method::Snd: return "snd";
    case Method::Hamming: return "hamming";
    case Method::QuadForm: return "quad-form";
    case Method::WalkDist: return "walk-dist";
    case Method::NhoodVoting: return "nhood-voting";
    case Method::CommunityLp: return "community-lp";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  if (name == "snd") return Method::Snd;
  if (name == "hamming") return Method::Hamming;
  if (name == "quad-form" || name == "quadform") return Method::QuadForm;
  if (name == "walk-dist" || name == "walkdist") return Method::WalkDist;
  if (name == "nhood-voting") return Method::NhoodVoting;
  if (name == "community-lp") return Method::CommunityLp;
  throw ConfigError("unknown prediction method '" + name + "'");
}

std::vector<NodeId> sample_targets(const NetworkState& truth, std::size_t count,
                                   std::uint64_t seed) {
  std::vector<NodeId> pos, neg;
  for (NodeId v = 0; v < truth.size(); ++v) {
    if (truth[v] == kPositive) pos.push_back(v);
    if (truth[v] == kNegative) neg.push_back(v);
  }
  const std::size_t active = pos.size() + neg.size();
  if (count == 0) throw ConfigError("target count must be positive");
  if (active < count) {
    throw ValidationError("only " + std::to_string(active) + " active users, " +
                          std::to_string(count) + " targets requested");
  }
  std::size_t take_pos = count / 2;
  if (pos.size() < take_pos || neg.size() < count - take_pos) {
    const double share = static_cast<double>(pos.size()) / static_cast<double>(active);
    take_pos = static_cast<std::size_t>(std::llround(share * static_cast<double>(count)));
    take_pos = std::clamp(take_pos, count - std::min(count, neg.size()), pos.size());
  }
  std::mt19937_64 rng(seed);
  auto draw = [&](std::vector<NodeId>& pool, std::size_t k, std::vector<NodeId>& out) {
    for (std::size_t i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
      std::swap(pool[i], pool[pick(rng)]);
      out.push_back(pool[i]);
    }
  };
  std::vector<NodeId> targets;
  draw(pos, take_pos, targets);
  draw(neg, count - take_pos, targets);
  std::sort(targets.begin(), targets.end());
  return targets;
}

MethodAccuracy run_prediction_trials(const StateSeries& series, const ExperimentParams& params,
                                     const std::string& name, const Predictor& predictor) {
  if (params.history < 2) throw ConfigError("prediction needs at least two history states");
  if (params.trials == 0) throw ConfigError("trials must be positive");
  if (series.size() < params.history + 1) {
    throw ValidationError("series has " + std::to_string(series.size()) + " states, need " +
                          std::to_string(params.history + 1));
  }
  const NetworkState& truth = series[series.size() - 1];
  std::vector<NetworkState> history(series.states().end() - 1 - static_cast<std::ptrdiff_t>(params.history),
                                    series.states().end() - 1);
  MethodAccuracy result;
  result.method = name;
  for (std::size_t trial = 0; trial < params.trials; ++trial) {
    PredictionTask task;
    task.history = history;
    task.targets = sample_targets(truth, params.targets, mix_seed(params.seed, trial));
    task.current = truth.with(task.targets,
                              std::vector<std::int8_t>(task.targets.size(), kNeutral));
    task.samples = params.samples;
    task.seed = mix_seed(params.seed, 1'000'000 + trial);
    const NetworkState predicted = predictor(task);
    result.per_trial.push_back(accuracy(predicted, truth, task.targets));
  }
  const double k = static_cast<double>(result.per_trial.size());
  result.mean = std::accumulate(result.per_trial.begin(), result.per_trial.end(), 0.0) / k;
  double ss = 0;
  for (double a : result.per_trial) ss += (a - result.mean) * (a - result.mean);
  result.stddev = result.per_trial.size() > 1 ? std::sqrt(ss / (k - 1)) : 0.0;
  return result;
}

std::vector<MethodAccuracy> prediction_experiment(const StateSeries& series,
                                                  const std::vector<Method>& methods,
                                                  const ExperimentParams& params,
                                                  const MeasureContext& context) {
  std::vector<MethodAccuracy> table;
  for (Method m : methods) {
    Predictor predictor;
    switch (m) {
      case Method::NhoodVoting:
        predictor = [&](const PredictionTask& t) {
          return nhood_voting_predict(t.current, t.targets, context.network(), t.seed);
        };
        break;
      case Method::CommunityLp:
        predictor = [&](const PredictionTask& t) {
          return community_lp_predict(t.current, t.targets, context.network(), t.seed);
        };
        break;
      default: {
        const Measure measure = m == Method::Snd        ? Measure::Snd
                                : m == Method::Hamming  ? Measure::Hamming
                                : m == Method::QuadForm ? Measure::QuadForm
                                                        : Measure::WalkDist;
        predictor = [&context, measure](const PredictionTask& t) {
          return predict_opinions(t, measure, context).state;
        };
      }
    }
    table.push_back(run_prediction_trials(series, params, to_string(m), predictor));
  }
  return table;
}

// ---------------------------------------------------------------------------
// Transition separation

double l1_distance(const NetworkState& a, const NetworkState& b) {
  if (a.size() != b.size()) throw ValidationError("states differ in length");
  double sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return sum;
}

std::vector<TransitionRecord> transition_separation_study(const Network& network,
                                                          const SeparationParams& params,
                                                          const MeasureContext& context) {
  params.icc.validate();
  std::vector<TransitionRecord> records(2 * params.pairs);
  for (std::size_t i = 0; i < params.pairs; ++i) {
    NetworkState g1 = initial_state(network.node_count(), params.initial_adopters,
                                    mix_seed(params.seed, 10 * i));
    std::vector<std::uint8_t> frontier(network.node_count(), 0);
    for (NodeId v = 0; v < g1.size(); ++v) frontier[v] = g1.is_active(v);
    for (std::size_t r = 0; r < params.warmup_rounds; ++r) {
      NetworkState next = icc_step(network, g1, params.icc, mix_seed(params.seed, 10 * i + 1 + r),
                                   &frontier);
      for (NodeId v = 0; v < g1.size(); ++v) frontier[v] = next[v] != g1[v];
      g1 = std::move(next);
    }
    const NetworkState normal =
        icc_step(network, g1, params.icc, mix_seed(params.seed, 10 * i + 8), &frontier);
    const std::size_t k = hamming(g1, normal);
    const NetworkState random =
        random_transition(network, g1, k, mix_seed(params.seed, 10 * i + 9));
    records[2 * i] = TransitionRecord{k, context.distance(Measure::Snd, g1, normal),
                                      l1_distance(g1, normal), false};
    records[2 * i + 1] = TransitionRecord{k, context.distance(Measure::Snd, g1, random),
                                          l1_distance(g1, random), true};
  }
  return records;
}

// ---------------------------------------------------------------------------
// CSV

void write_distance_csv(std::ostream& out, const DistanceSeries& series) {
  out << "t,raw,active,normalized,scaled\n";
  for (const auto& r : series) {
    out << r.t << ',' << format_fixed(r.raw) << ',' << r.active << ','
        << format_fixed(r.normalized, 9) << ',' << format_fixed(r.scaled, 9) << '\n';
  }
}

void write_roc_csv(std::ostream& out, const RocCurve& curve) {
  out << "fpr,tpr\n";
  for (const auto& [f, t] : curve.points) out << format_fixed(f) << ',' << format_fixed(t) << '\n';
}

void write_accuracy_csv(std::ostream& out, const std::vector<MethodAccuracy>& table) {
  out << "method,mean,stddev\n";
  for (const auto& m : table) {
    out << m.method << ',' << format_fixed(m.mean, 2) << ',' << format_fixed(m.stddev, 2) << '\n';
  }
}

}  // namespace snd
