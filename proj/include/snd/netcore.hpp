#pragma once

// Network topology, opinion states, and their file formats.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "snd/types.hpp"

namespace snd {

/// Opinion values. Stored as int8 so states stay compact at 10^5 nodes.
inline constexpr std::int8_t kNegative = -1;
inline constexpr std::int8_t kNeutral = 0;
inline constexpr std::int8_t kPositive = 1;

struct Edge {
  NodeId src = 0;
  NodeId dst = 0;
  bool operator==(const Edge&) const = default;
};

/// Optional per-edge attributes. Each is either present for every edge or
/// absent; absent attributes are defaulted by the ground-distance models.
struct EdgeAttributes {
  std::optional<std::vector<double>> comm;              ///< relative communication frequency
  std::optional<std::vector<double>> adopt;             ///< opinion adoption probability
  std::optional<std::vector<double>> activation_prob;   ///< ICC p_uv
  std::optional<std::vector<double>> icc_distance;      ///< ICC d_uv
  std::optional<std::vector<double>> influence;         ///< LTC w_uv
  bool operator==(const EdgeAttributes&) const = default;
};

/// Directed graph with optional model attributes. Immutable after
/// construction; the constructor validates all invariants and builds
/// in/out adjacency.
class Network {
 public:
  Network(std::size_t node_count, std::vector<Edge> edges, EdgeAttributes attributes = {},
          std::optional<std::vector<double>> thresholds = std::nullopt);

  std::size_t node_count() const { return node_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(std::size_t id) const { return edges_[id]; }
  const EdgeAttributes& attributes() const { return attributes_; }
  const std::optional<std::vector<double>>& thresholds() const { return thresholds_; }

  /// Ids of edges leaving / entering a node, in ascending edge id order.
  std::span<const std::uint32_t> out_edges(NodeId u) const;
  std::span<const std::uint32_t> in_edges(NodeId v) const;
  std::size_t in_degree(NodeId v) const { return in_edges(v).size(); }
  std::size_t out_degree(NodeId u) const { return out_edges(u).size(); }

  bool operator==(const Network& other) const;

 private:
  std::size_t node_count_;
  std::vector<Edge> edges_;
  EdgeAttributes attributes_;
  std::optional<std::vector<double>> thresholds_;
  std::vector<std::uint32_t> out_offsets_, out_ids_;
  std::vector<std::uint32_t> in_offsets_, in_ids_;
};

/// Opinion per node, entries in {-1, 0, +1}.
class NetworkState {
 public:
  NetworkState() = default;
  explicit NetworkState(std::vector<std::int8_t> opinions);
  static NetworkState neutral(std::size_t n) {
    return NetworkState(std::vector<std::int8_t>(n, kNeutral));
  }

  std::size_t size() const { return opinions_.size(); }
  std::int8_t operator[](std::size_t i) const { return opinions_[i]; }
  std::span<const std::int8_t> opinions() const { return opinions_; }
  std::size_t active_count() const;
  bool is_active(std::size_t i) const { return opinions_[i] != kNeutral; }

  /// Copy with selected entries replaced.
  NetworkState with(std::span<const NodeId> nodes, std::span<const std::int8_t> values) const;

  bool operator==(const NetworkState&) const = default;

 private:
  std::vector<std::int8_t> opinions_;
};

/// Time-ordered states over one network.
class StateSeries {
 public:
  StateSeries(std::vector<NetworkState> states, std::vector<std::int64_t> timestamps);
  explicit StateSeries(std::vector<NetworkState> states);

  std::size_t size() const { return states_.size(); }
  std::size_t node_count() const { return states_.front().size(); }
  const NetworkState& operator[](std::size_t i) const { return states_[i]; }
  const std::vector<NetworkState>& states() const { return states_; }
  const std::vector<std::int64_t>& timestamps() const { return timestamps_; }

 private:
  std::vector<NetworkState> states_;
  std::vector<std::int64_t> timestamps_;
};

/// Unit mass on +1 entries.
Histogram positive_part(const NetworkState& state);
/// Unit mass on -1 entries.
Histogram negative_part(const NetworkState& state);
/// Unit mass on entries equal to `sign` (+1 or -1).
Histogram opinion_part(const NetworkState& state, std::int8_t sign);

// JSON network file:
// {"n": int, "edges": [{"src","dst","comm"?,"adopt"?,"p"?,"d"?,"w"?}...], "thresholds"?: [..]}
Network parse_network(const std::string& json_text);
Network load_network(const std::string& path);
std::string network_to_json(const Network& network);
void write_network(const Network& network, const std::string& path);

// CSV state series: one row per state, n values from {-1,0,1}; optional
// header row "t0,t1,...".
StateSeries parse_state_series(std::istream& in, const Network& network);
StateSeries load_state_series(const std::string& path, const Network& network);
void write_state_series(const StateSeries& series, std::ostream& out);
void write_state_series(const StateSeries& series, const std::string& path);

}  // namespace snd
