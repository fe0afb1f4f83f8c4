#include "snd/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace snd {

namespace {

void check_same_length(const NetworkState& p, const NetworkState& q) {
  if (p.size() != q.size()) throw ValidationError("states differ in length");
}

void check_network(const NetworkState& s, const Network& network) {
  if (s.size() != network.node_count()) {
    throw ValidationError("state length does not match network node count");
  }
}

std::int8_t coin(std::mt19937_64& rng) {
  return std::bernoulli_distribution(0.5)(rng) ? kPositive : kNegative;
}

/// Symmetrized neighbor lists without duplicates.
std::vector<std::vector<NodeId>> undirected_neighbors(const Network& network) {
  std::vector<std::vector<NodeId>> nbrs(network.node_count());
  for (const Edge& e : network.edges()) {
    nbrs[e.src].push_back(e.dst);
    nbrs[e.dst].push_back(e.src);
  }
  for (auto& list : nbrs) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return nbrs;
}

}  // namespace

std::size_t hamming(const NetworkState& p, const NetworkState& q) {
  check_same_length(p, q);
  std::size_t count = 0;
  for (std::size_t i = 0; i < p.size(); ++i) count += p[i] != q[i];
  return count;
}

Laplacian::Laplacian(const Network& network) : n_(network.node_count()) {
  edges_.reserve(network.edge_count());
  for (const Edge& e : network.edges()) {
    edges_.emplace_back(std::min(e.src, e.dst), std::max(e.src, e.dst));
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

double Laplacian::quadratic(std::span<const double> x) const {
  if (x.size() != n_) throw ValidationError("vector length does not match Laplacian size");
  double sum = 0;
  for (const auto& [u, v] : edges_) {
    const double diff = x[u] - x[v];
    sum += diff * diff;
  }
  return sum;
}

std::vector<double> Laplacian::dense() const {
  std::vector<double> l(n_ * n_, 0.0);
  for (const auto& [u, v] : edges_) {
    l[u * n_ + v] -= 1;
    l[v * n_ + u] -= 1;
    l[u * n_ + u] += 1;
    l[v * n_ + v] += 1;
  }
  return l;
}

double quad_form(const NetworkState& p, const NetworkState& q, const Laplacian& laplacian) {
  check_same_length(p, q);
  std::vector<double> diff(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) diff[i] = static_cast<double>(p[i] - q[i]);
  return std::sqrt(std::max(0.0, laplacian.quadratic(diff)));
}

std::vector<double> contention(const NetworkState& state, const Network& network) {
  check_network(state, network);
  std::vector<double> cnt(state.size(), 0.0);
  for (NodeId v = 0; v < state.size(); ++v) {
    double sum = 0;
    std::size_t active = 0;
    for (std::uint32_t id : network.in_edges(v)) {
      const NodeId u = network.edge(id).src;
      if (state.is_active(u)) {
        sum += state[u];
        ++active;
      }
    }
    if (active > 0) cnt[v] = state[v] - sum / static_cast<double>(active);
  }
  return cnt;
}

double walk_dist(const NetworkState& p, const NetworkState& q, const Network& network) {
  check_same_length(p, q);
  const std::vector<double> cp = contention(p, network);
  const std::vector<double> cq = contention(q, network);
  double sum = 0;
  for (std::size_t i = 0; i < cp.size(); ++i) sum += std::fabs(cp[i] - cq[i]);
  return cp.empty() ? 0.0 : sum / static_cast<double>(cp.size());
}

NetworkState nhood_voting_predict(const NetworkState& state, std::span<const NodeId> targets,
                                  const Network& network, std::uint64_t seed) {
  check_network(state, network);
  std::mt19937_64 rng(seed);
  std::vector<std::int8_t> values;
  values.reserve(targets.size());
  for (NodeId t : targets) {
    if (t >= state.size()) throw ValidationError("target id out of range");
    std::size_t pos = 0, neg = 0;
    for (std::uint32_t id : network.in_edges(t)) {
      const std::int8_t o = state[network.edge(id).src];
      pos += o == kPositive;
      neg += o == kNegative;
    }
    if (pos + neg == 0) {
      values.push_back(coin(rng));
    } else {
      const double p_pos = static_cast<double>(pos) / static_cast<double>(pos + neg);
      values.push_back(std::bernoulli_distribution(p_pos)(rng) ? kPositive : kNegative);
    }
  }
  return state.with(targets, values);
}

std::vector<std::uint32_t> label_propagation(const Network& network, std::uint64_t seed,
                                             std::size_t max_rounds) {
  const std::size_t n = network.node_count();
  const auto nbrs = undirected_neighbors(network);
  std::vector<std::uint32_t> label(n);
  std::iota(label.begin(), label.end(), 0u);
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> candidates, tied;
  for (std::size_t round = 0; round < max_rounds; ++round) {
    std::shuffle(order.begin(), order.end(), rng);
    bool changed = false;
    for (NodeId v : order) {
      if (nbrs[v].empty()) continue;
      candidates.clear();
      for (NodeId u : nbrs[v]) candidates.push_back(label[u]);
      std::sort(candidates.begin(), candidates.end());
      tied.clear();
      std::size_t best_count = 0;
      bool keeps = false;  // current label is among the most frequent
      for (std::size_t i = 0; i < candidates.size();) {
        std::size_t j = i;
        while (j < candidates.size() && candidates[j] == candidates[i]) ++j;
        if (j - i > best_count) {
          best_count = j - i;
          tied.clear();
          keeps = false;
        }
        if (j - i == best_count) {
          tied.push_back(candidates[i]);
          keeps |= candidates[i] == label[v];
        }
        i = j;
      }
      if (keeps) continue;
      label[v] = tied[std::uniform_int_distribution<std::size_t>(0, tied.size() - 1)(rng)];
      changed = true;
    }
    if (!changed) break;
  }
  // Compact to 0..k-1.
  std::vector<std::uint32_t> remap(n, UINT32_MAX);
  std::uint32_t k = 0;
  for (auto& l : label) {
    if (remap[l] == UINT32_MAX) remap[l] = k++;
    l = remap[l];
  }
  return label;
}

NetworkState community_lp_predict(const NetworkState& state, std::span<const NodeId> targets,
                                  const Network& network, std::uint64_t seed) {
  check_network(state, network);
  const std::vector<std::uint32_t> community = label_propagation(network, seed);
  const std::size_t k =
      community.empty() ? 0 : *std::max_element(community.begin(), community.end()) + 1;
  std::vector<std::int64_t> balance(k, 0);  // (#positive - #negative) known opinions
  std::vector<std::uint8_t> is_target(state.size(), 0);
  for (NodeId t : targets) {
    if (t >= state.size()) throw ValidationError("target id out of range");
    is_target[t] = 1;
  }
  for (NodeId v = 0; v < state.size(); ++v) {
    if (!is_target[v]) balance[community[v]] += state[v];
  }
  std::mt19937_64 rng(seed);
  std::vector<std::int8_t> values;
  values.reserve(targets.size());
  for (NodeId t : targets) {
    const std::int64_t b = balance[community[t]];
    values.push_back(b > 0 ? kPositive : b < 0 ? kNegative : coin(rng));
  }
  return state.with(targets, values);
}

}  // namespace snd
