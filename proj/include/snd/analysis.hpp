#pragma once

// Downstream pipelines: anomaly scoring over a state series with ROC
// evaluation, opinion prediction by distance extrapolation, and the
// ICC-vs-random transition separation study.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "snd/baselines.hpp"
#include "snd/netcore.hpp"
#include "snd/snd.hpp"

namespace snd {

enum class Measure { Snd, Hamming, QuadForm, WalkDist };

std::string to_string(Measure m);
Measure measure_from_string(const std::string& name);  // throws ConfigError

/// Everything a distance measure may need about the network.
class MeasureContext {
 public:
  MeasureContext(const Network& network, SndConfig config = {}, bool fast = true);

  const Network& network() const { return *network_; }
  const SndConfig& snd_config() const { return config_; }
  bool fast() const { return fast_; }
  const Laplacian& laplacian() const;

  double distance(Measure m, const NetworkState& a, const NetworkState& b) const;

 private:
  const Network* network_;
  SndConfig config_;
  bool fast_;
  std::optional<Laplacian> laplacian_;
};

struct DistanceRecord {
  std::size_t t = 0;        ///< transition index: state t to t + 1
  double raw = 0;
  std::size_t active = 0;   ///< active users in state t + 1
  double normalized = 0;    ///< raw / active (0 when nobody is active)
  double scaled = 0;        ///< min-max scaled over the series into [0, 1]
};

using DistanceSeries = std::vector<DistanceRecord>;

/// Fills `normalized` and `scaled` from `raw` and `active`.
void rescale(DistanceSeries& series);

/// Distances between consecutive states. Throws ValidationError with fewer
/// than two states.
DistanceSeries distance_series(const StateSeries& series, Measure measure,
                               const MeasureContext& context);

struct AnomalyReport {
  /// S_t = (d_t - d_{t-1}) + (d_t - d_{t+1}) on scaled distances; only
  /// interior transitions have a score.
  std::vector<std::optional<double>> scores;
  /// Interior transitions by decreasing score, ties by index.
  std::vector<std::size_t> ranking;
};

/// Throws ValidationError ("too short") with fewer than three transitions.
AnomalyReport anomaly_scores(const DistanceSeries& series);
AnomalyReport anomaly_scores(const std::vector<double>& d);

struct RocCurve {
  std::vector<std::pair<double, double>> points;  ///< (FPR, TPR), from (0,0) to (1,1)
  double auc = 0;
  /// Highest TPR reachable with FPR <= limit (linear along tied groups).
  double tpr_at(double fpr_limit) const;
};

/// ROC from a score per item (higher = more anomalous). Items with equal
/// scores enter the curve together as one diagonal segment.
RocCurve roc_from_scores(const std::vector<double>& scores, const std::vector<bool>& positive);
/// ROC over the report's interior transitions; `truth` holds anomalous
/// transition indices. Throws ValidationError if no scored transition is
/// anomalous.
RocCurve roc(const AnomalyReport& report, const std::set<std::size_t>& truth);

// ---------------------------------------------------------------------------
// Opinion prediction

struct PredictionTask {
  std::vector<NetworkState> history;  ///< oldest first; back() is the most recent
  NetworkState current;               ///< targets hidden as neutral
  std::vector<NodeId> targets;
  std::size_t samples = 100;
  std::uint64_t seed = 1;
};

struct Prediction {
  NetworkState state;
  double target_distance = 0;  ///< extrapolated d*
  double achieved = 0;         ///< distance of the returned assignment
};

/// Least-squares line through (1, d_1) ... (k, d_k), evaluated at k + 1;
/// a single point extrapolates to itself.
double extrapolate(const std::vector<double>& d);

/// Samples random +-1 assignments for the targets and keeps the first one
/// whose distance from history.back() is closest to d*.
Prediction predict_opinions(const PredictionTask& task, Measure measure,
                            const MeasureContext& context);

/// Percentage of targets whose predicted opinion equals the truth.
double accuracy(const NetworkState& predicted, const NetworkState& truth,
                const std::vector<NodeId>& targets);

enum class Method { Snd, Hamming, QuadForm, WalkDist, NhoodVoting, CommunityLp };
std::string to_string(Method m);
Method method_from_string(const std::string& name);  // throws ConfigError

struct ExperimentParams {
  std::size_t targets = 20;
  std::size_t samples = 100;
  std::size_t trials = 10;
  std::size_t history = 3;  ///< observed states before the current one
  std::uint64_t seed = 1;
};

struct MethodAccuracy {
  std::string method;
  std::vector<double> per_trial;  ///< percent
  double mean = 0;
  double stddev = 0;              ///< sample standard deviation
};

/// Targets: uniformly random users active in `truth`, 10/10 by opinion
/// when both classes are large enough, otherwise proportional to class size.
std::vector<NodeId> sample_targets(const NetworkState& truth, std::size_t count,
                                   std::uint64_t seed);

using Predictor = std::function<NetworkState(const PredictionTask&)>;

/// Runs the trial protocol on series.back() as ground truth with any
/// predictor. Throws ValidationError if the series is too short or has too
/// few active users.
MethodAccuracy run_prediction_trials(const StateSeries& series, const ExperimentParams& params,
                                     const std::string& name, const Predictor& predictor);

std::vector<MethodAccuracy> prediction_experiment(const StateSeries& series,
                                                  const std::vector<Method>& methods,
                                                  const ExperimentParams& params,
                                                  const MeasureContext& context);

// ---------------------------------------------------------------------------
// Transition separation

struct SeparationParams {
  std::size_t pairs = 40;              ///< normal/anomalous pairs
  std::size_t initial_adopters = 100;  ///< active users in each G1
  std::size_t warmup_rounds = 0;       ///< ICC rounds applied to the seeds before G1
  IccParams icc;
  std::uint64_t seed = 1;
};

struct TransitionRecord {
  std::size_t n_delta = 0;
  double snd = 0;
  double l1 = 0;
  bool anomalous = false;
};

/// For each pair: G1 from random seeds grown by a few ICC rounds; the
/// normal G2 is one more ICC round, the anomalous G2 activates the same
/// number of random neutral users.
std::vector<TransitionRecord> transition_separation_study(const Network& network,
                                                          const SeparationParams& params,
                                                          const MeasureContext& context);

/// Sum of |a_i - b_i|.
double l1_distance(const NetworkState& a, const NetworkState& b);

// ---------------------------------------------------------------------------
// CSV output (locale independent)

void write_distance_csv(std::ostream& out, const DistanceSeries& series);
void write_roc_csv(std::ostream& out, const RocCurve& curve);
void write_accuracy_csv(std::ostream& out, const std::vector<MethodAccuracy>& table);

}  // namespace snd
