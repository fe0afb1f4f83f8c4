#pragma once

// Competing state distances (hamming, quadratic form, walk-dist) and the two
// non-distance opinion predictors (neighborhood voting, label-propagation
// communities).

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "snd/netcore.hpp"

namespace snd {

/// Number of coordinates that differ. Throws ValidationError on length mismatch.
std::size_t hamming(const NetworkState& p, const NetworkState& q);

/// Laplacian of the symmetrized, unweighted network.
class Laplacian {
 public:
  explicit Laplacian(const Network& network);

  std::size_t size() const { return n_; }
  /// x^T L x, evaluated edge-wise as the sum of (x_u - x_v)^2.
  double quadratic(std::span<const double> x) const;
  /// Dense matrix, row-major; for tests and small networks.
  std::vector<double> dense() const;
  const std::vector<std::pair<NodeId, NodeId>>& edges() const { return edges_; }

 private:
  std::size_t n_;
  std::vector<std::pair<NodeId, NodeId>> edges_;  // u < v, unique
};

/// sqrt((P - Q)^T L (P - Q)); tiny negatives from rounding clamp to 0.
double quad_form(const NetworkState& p, const NetworkState& q, const Laplacian& laplacian);

/// Opinion minus the mean opinion of active in-neighbors; 0 without any.
std::vector<double> contention(const NetworkState& state, const Network& network);

/// (1/n) * || cnt(P) - cnt(Q) ||_1
double walk_dist(const NetworkState& p, const NetworkState& q, const Network& network);

/// Each target takes +1 with probability (#active +1 in-neighbors) /
/// (#active in-neighbors); a fair coin when it has none. Targets should be
/// neutral in `state`.
NetworkState nhood_voting_predict(const NetworkState& state, std::span<const NodeId> targets,
                                  const Network& network, std::uint64_t seed);

/// Asynchronous label propagation on the symmetrized graph. Nodes are visited
/// in a fresh random order each round and adopt the most frequent neighbor
/// label, keeping their own when it ties for the lead and otherwise breaking
/// ties at random. Stops when a round changes nothing or after max_rounds.
/// Labels are compacted to 0..k-1 in order of first appearance.
std::vector<std::uint32_t> label_propagation(const Network& network, std::uint64_t seed,
                                             std::size_t max_rounds = 100);

/// Each target takes the majority known opinion of its community; a fair
/// coin on ties or when the community has no known opinions.
NetworkState community_lp_predict(const NetworkState& state, std::span<const NodeId> targets,
                                  const Network& network, std::uint64_t seed);

}  // namespace snd
