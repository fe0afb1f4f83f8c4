#pragma once

// Opinion-dependent transport costs over a network and the shortest-path
// ground distances derived from them.
//
// Every edge u->v receives the integer cost
//   round(scale * (-log P_comm - log P_in - log P_out))  clamped to [1, cap]
// where P_out depends on the chosen propagation model, the opinion sign
// being transported, and the opinions of u and v in the source state.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "snd/netcore.hpp"
#include "snd/types.hpp"

namespace snd {

enum class Sign : std::int8_t { Positive = 1, Negative = -1 };

inline std::int8_t opinion_of(Sign s) { return static_cast<std::int8_t>(s); }

enum class Model { Agnostic, Icc, Ltc };

std::string to_string(Model m);
Model model_from_string(const std::string& name);  // throws ConfigError

/// Constant spreading penalties (in -log units) for adverse/neutral/friendly
/// spreaders.
struct ModelAgnosticParams {
  std::int64_t c_friendly = 1;
  std::int64_t c_neutral = 4;
  std::int64_t c_adverse = 16;
  double epsilon = 1e-3;  ///< stands in for zero communication probabilities
  void validate() const;
};

/// Independent Cascade with Competition (distance-based).
struct IccParams {
  double epsilon = 1e-3;
  double default_p = 0.1;  ///< activation probability when an edge has no 'p'
  double default_d = 1.0;  ///< edge distance when an edge has no 'd'
  void validate() const;
};

/// Linear Threshold with Competition.
struct LtcParams {
  double epsilon = 1e-3;
  std::optional<double> default_w;  ///< unset: 1 / in-degree(v)
  double default_theta = 0.5;
  void validate() const;
};

struct Quantization {
  double scale = 100.0;          ///< multiplier on -log probabilities
  std::int64_t cap = 1'000'000;  ///< upper bound U on any edge cost
  void validate() const;
};

/// Model selection plus all parameters needed to build a cost graph.
struct GroundModel {
  Model kind = Model::Agnostic;
  ModelAgnosticParams agnostic;
  IccParams icc;
  LtcParams ltc;
  Quantization quant;
  bool use_comm = true;      ///< read per-edge 'comm' when present
  bool use_adoption = true;  ///< read per-edge 'adopt' when present

  /// Defaults for a model. The agnostic penalties are already integers, so
  /// that model quantizes with scale 1; the probabilistic models use 100.
  static GroundModel defaults(Model kind);
  void validate() const;
};

/// Parses {"model": ..., "c_friendly": ..., "epsilon": ..., "scale": ..., "cap": ...}.
/// Unknown keys are rejected. Throws ConfigError.
GroundModel parse_ground_model(const std::string& json_text);
std::string ground_model_to_json(const GroundModel& model);

/// Rounds half-up and clamps into [1, cap].
std::int64_t quantize_cost(double neg_log_probability, const Quantization& quant);

struct CostArc {
  NodeId to = 0;
  std::int64_t cost = 0;
};

/// Integer-cost copy of a network's topology for one (state, sign) pair.
class CostGraph {
 public:
  CostGraph(std::size_t node_count, std::span<const Edge> edges, std::vector<std::int64_t> costs,
            Sign sign, std::int64_t cap);

  std::size_t node_count() const { return node_count_; }
  Sign sign() const { return sign_; }
  std::int64_t cap() const { return cap_; }
  /// Distance reported for unreachable pairs: (n - 1) * cap.
  std::int64_t unreachable() const { return unreachable_; }

  std::span<const CostArc> out(NodeId u) const {
    return std::span(out_arcs_).subspan(out_offsets_[u], out_offsets_[u + 1] - out_offsets_[u]);
  }
  /// Arcs entering v; CostArc::to holds the tail.
  std::span<const CostArc> in(NodeId v) const {
    return std::span(in_arcs_).subspan(in_offsets_[v], in_offsets_[v + 1] - in_offsets_[v]);
  }
  /// Cost of each network edge, by edge id.
  const std::vector<std::int64_t>& edge_costs() const { return edge_costs_; }

 private:
  std::size_t node_count_;
  Sign sign_;
  std::int64_t cap_;
  std::int64_t unreachable_;
  std::vector<std::int64_t> edge_costs_;
  std::vector<std::uint32_t> out_offsets_, in_offsets_;
  std::vector<CostArc> out_arcs_, in_arcs_;
};

CostGraph build_cost_graph(const Network& network, const NetworkState& state, Sign sign,
                           const GroundModel& model);

/// Per-edge -log P_out before quantization (exposed for testing the model
/// case splits independently of the comm/adoption terms).
std::vector<double> spreading_penalties(const Network& network, const NetworkState& state,
                                        Sign sign, const GroundModel& model);

/// Nearest-active-seed data of the ICC model.
struct NearestActive {
  std::vector<double> distance;   ///< d_v(I); +inf when no active node reaches v
  std::vector<double> p_active;   ///< sum of p_uv over active u achieving d_v(I)
};

NearestActive icc_nearest_active(const Network& network, const NetworkState& state,
                                 const IccParams& params);

/// Exact single-source shortest paths (binary-heap Dijkstra). Unreachable
/// nodes get graph.unreachable().
std::vector<std::int64_t> shortest_paths_from(const CostGraph& graph, NodeId source);
/// Distances from every node to `target` (Dijkstra on reversed arcs).
std::vector<std::int64_t> shortest_paths_to(const CostGraph& graph, NodeId target);

/// Distances between `source` and each of `targets` only; the search stops
/// once every target is settled. With reverse = true, returns dist(t, source).
std::vector<std::int64_t> distances_to_targets(const CostGraph& graph, NodeId source,
                                               std::span<const NodeId> targets, bool reverse);

inline constexpr std::size_t kDenseNodeLimit = 3000;

/// All-pairs matrix via n single-source runs. Throws ConfigError above
/// kDenseNodeLimit nodes.
GroundDistance dense_ground_distance(const CostGraph& graph);

/// Quantized cost of one hop out of a neutral user under default edge
/// attributes.
std::int64_t neutral_hop_cost(const GroundModel& model);

}  // namespace snd
