#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace oracle {

std::vector<std::int64_t> bellman_ford(std::size_t n, const std::vector<snd::Edge>& edges,
                                       const std::vector<std::int64_t>& costs, std::size_t source,
                                       std::int64_t sentinel) {
  std::vector<std::int64_t> dist(n, kInf);
  dist[source] = 0;
  for (std::size_t round = 0; round + 1 < n; ++round) {
    bool changed = false;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      auto [u, v] = edges[e];
      if (dist[u] != kInf && dist[u] + costs[e] < dist[v]) {
        dist[v] = dist[u] + costs[e];
        changed = true;
      }
    }
    if (!changed) break;
  }
  for (auto& d : dist)
    if (d == kInf) d = sentinel;
  return dist;
}

snd::CostMatrix floyd_warshall(std::size_t n, const std::vector<snd::Edge>& edges,
                               const std::vector<std::int64_t>& costs, std::int64_t sentinel) {
  snd::CostMatrix d(n, n, kInf);
  for (std::size_t i = 0; i < n; ++i) d.at(i, i) = 0;
  for (std::size_t e = 0; e < edges.size(); ++e)
    d.at(edges[e].src, edges[e].dst) = std::min(d.at(edges[e].src, edges[e].dst), costs[e]);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d.at(i, k) != kInf && d.at(k, j) != kInf)
          d.at(i, j) = std::min(d.at(i, j), d.at(i, k) + d.at(k, j));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (d.at(i, j) == kInf) d.at(i, j) = sentinel;
  return d;
}

std::int64_t brute_force_transport(const std::vector<std::int64_t>& supplies,
                                   const std::vector<std::int64_t>& demands,
                                   const snd::CostMatrix& costs) {
  const std::size_t m = supplies.size(), k = demands.size();
  const std::int64_t target = std::min(std::accumulate(supplies.begin(), supplies.end(), 0LL),
                                       std::accumulate(demands.begin(), demands.end(), 0LL));
  auto s = supplies;
  auto d = demands;
  std::int64_t best = kInf;
  std::function<void(std::size_t, std::int64_t, std::int64_t)> rec =
      [&](std::size_t cell, std::int64_t shipped, std::int64_t cost) {
        if (cell == m * k) {
          if (shipped == target) best = std::min(best, cost);
          return;
        }
        std::size_t i = cell / k, j = cell % k;
        std::int64_t top = std::min(s[i], d[j]);
        for (std::int64_t f = 0; f <= top; ++f) {
          s[i] -= f;
          d[j] -= f;
          rec(cell + 1, shipped + f, cost + f * costs.at(i, j));
          s[i] += f;
          d[j] += f;
        }
      };
  rec(0, 0, 0);
  return best;
}

snd::CostMatrix random_metric(std::size_t n, std::int64_t max_cost, std::mt19937_64& rng) {
  // Random positive weights on a complete graph, then shortest-path closure.
  std::uniform_int_distribution<std::int64_t> w(1, max_cost);
  snd::CostMatrix d(n, n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d.at(i, j) = d.at(j, i) = w(rng);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        d.at(i, j) = std::min(d.at(i, j), d.at(i, k) + d.at(k, j));
  return d;
}

std::vector<std::int64_t> random_masses(std::size_t n, std::int64_t max_mass, double zero_share,
                                        std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> m(1, max_mass);
  std::bernoulli_distribution zero(zero_share);
  std::vector<std::int64_t> out(n);
  for (auto& x : out) x = zero(rng) ? 0 : m(rng);
  return out;
}

snd::Histogram to_histogram(const std::vector<std::int64_t>& masses) {
  return snd::Histogram(masses.begin(), masses.end());
}

snd::Network random_network(std::size_t n, double edge_prob, std::mt19937_64& rng,
                            bool icc_attributes, bool ltc_attributes) {
  std::bernoulli_distribution coin(edge_prob);
  std::vector<snd::Edge> edges;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (u != v && coin(rng))
        edges.push_back({static_cast<snd::NodeId>(u), static_cast<snd::NodeId>(v)});
  snd::EdgeAttributes attrs;
  std::optional<std::vector<double>> thresholds;
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  std::uniform_int_distribution<int> hops(1, 3);
  if (icc_attributes) {
    std::vector<double> p(edges.size()), d(edges.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
      p[e] = unit(rng);
      d[e] = hops(rng);
    }
    attrs.activation_prob = p;
    attrs.icc_distance = d;
  }
  if (ltc_attributes) {
    std::vector<double> w(edges.size());
    for (auto& x : w) x = unit(rng);
    attrs.influence = w;
    std::vector<double> th(n);
    for (auto& x : th) x = unit(rng);
    thresholds = th;
  }
  return snd::Network(n, std::move(edges), std::move(attrs), std::move(thresholds));
}

snd::NetworkState random_state(std::size_t n, double active_share, std::mt19937_64& rng) {
  std::bernoulli_distribution active(active_share), sign(0.5);
  std::vector<std::int8_t> v(n, 0);
  for (auto& x : v)
    if (active(rng)) x = sign(rng) ? 1 : -1;
  return snd::NetworkState(std::move(v));
}

snd::NetworkState perturb(const snd::NetworkState& s, double share, std::mt19937_64& rng) {
  std::bernoulli_distribution redraw(share);
  std::uniform_int_distribution<int> value(-1, 1);
  std::vector<std::int8_t> v(s.opinions().begin(), s.opinions().end());
  for (auto& x : v)
    if (redraw(rng)) x = static_cast<std::int8_t>(value(rng));
  return snd::NetworkState(std::move(v));
}

namespace {

// Successive shortest paths with Bellman-Ford on an explicit residual graph.
// Integer masses, balanced totals; returns the total cost.
std::int64_t ssp_balanced(const std::vector<std::int64_t>& s, const std::vector<std::int64_t>& d,
                          const snd::CostMatrix& c) {
  const std::size_t m = s.size(), k = d.size();
  const std::size_t src = m + k, snk = m + k + 1, nodes = m + k + 2;
  struct Arc {
    std::size_t to;
    std::int64_t cap, cost;
  };
  std::vector<Arc> arcs;
  std::vector<std::vector<std::size_t>> adj(nodes);
  auto add = [&](std::size_t a, std::size_t b, std::int64_t cap, std::int64_t cost) {
    adj[a].push_back(arcs.size());
    arcs.push_back({b, cap, cost});
    adj[b].push_back(arcs.size());
    arcs.push_back({a, 0, -cost});
  };
  for (std::size_t i = 0; i < m; ++i) add(src, i, s[i], 0);
  for (std::size_t j = 0; j < k; ++j) add(m + j, snk, d[j], 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j) add(i, m + j, kInf, c.at(i, j));
  std::int64_t total = 0;
  while (true) {
    std::vector<std::int64_t> dist(nodes, kInf);
    std::vector<std::size_t> via(nodes, SIZE_MAX);
    dist[src] = 0;
    for (std::size_t round = 0; round < nodes; ++round) {
      bool changed = false;
      for (std::size_t u = 0; u < nodes; ++u) {
        if (dist[u] == kInf) continue;
        for (auto a : adj[u])
          if (arcs[a].cap > 0 && dist[u] + arcs[a].cost < dist[arcs[a].to]) {
            dist[arcs[a].to] = dist[u] + arcs[a].cost;
            via[arcs[a].to] = a;
            changed = true;
          }
      }
      if (!changed) break;
    }
    if (dist[snk] == kInf) break;
    std::int64_t push = kInf;
    for (std::size_t v = snk; v != src; v = arcs[via[v] ^ 1].to) push = std::min(push, arcs[via[v]].cap);
    for (std::size_t v = snk; v != src; v = arcs[via[v] ^ 1].to) {
      arcs[via[v]].cap -= push;
      arcs[via[v] ^ 1].cap += push;
    }
    total += push * dist[snk];
  }
  return total;
}

}  // namespace

double emd_star_reference(const std::vector<std::int64_t>& p, const std::vector<std::int64_t>& q,
                          const snd::CostMatrix& d, const std::vector<std::uint32_t>& cluster_of,
                          std::size_t cluster_count, const std::vector<std::int64_t>& gamma) {
  const std::size_t n = p.size(), nc = cluster_count, big = n + nc;
  const std::int64_t sp = std::accumulate(p.begin(), p.end(), 0LL);
  const std::int64_t sq = std::accumulate(q.begin(), q.end(), 0LL);
  const bool p_lighter = sp <= sq;
  const auto& light = p_lighter ? p : q;
  const std::int64_t light_total = std::min(sp, sq), delta = std::llabs(sp - sq);

  std::vector<std::int64_t> cluster_mass(nc, 0);
  for (std::size_t i = 0; i < n; ++i) cluster_mass[cluster_of[i]] += light[i];
  // Bank c holds delta * cluster_mass[c] / light_total; scale all masses by
  // the denominator so everything stays integral.
  const std::int64_t den = light_total > 0 ? light_total : static_cast<std::int64_t>(nc);
  std::vector<std::int64_t> ps(big, 0), qs(big, 0);
  for (std::size_t i = 0; i < n; ++i) {
    ps[i] = p[i] * den;
    qs[i] = q[i] * den;
  }
  for (std::size_t c = 0; c < nc; ++c) {
    std::int64_t bank = light_total > 0 ? delta * cluster_mass[c] : delta;
    (p_lighter ? ps : qs)[n + c] = bank;
  }

  snd::CostMatrix cd(nc, nc, kInf);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      cd.at(cluster_of[i], cluster_of[j]) = std::min(cd.at(cluster_of[i], cluster_of[j]), d.at(i, j));
  snd::CostMatrix ext(big, big, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) ext.at(i, j) = d.at(i, j);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < nc; ++c) {
      ext.at(i, n + c) = gamma[c] + cd.at(cluster_of[i], c);
      ext.at(n + c, i) = gamma[c] + cd.at(c, cluster_of[i]);
    }
  for (std::size_t a = 0; a < nc; ++a)
    for (std::size_t b = 0; b < nc; ++b) ext.at(n + a, n + b) = a == b ? 0 : gamma[a] + gamma[b] + cd.at(a, b);

  return static_cast<double>(ssp_balanced(ps, qs, ext)) / static_cast<double>(den);
}

TwoClusterInstance two_cluster_instance() {
  std::vector<snd::Edge> edges;
  auto link = [&](snd::NodeId a, snd::NodeId b) {
    edges.push_back({a, b});
    edges.push_back({b, a});
  };
  for (snd::NodeId i = 0; i < 10; ++i) link(i, (i + 1) % 10);
  link(0, 5);
  link(2, 7);
  for (snd::NodeId i = 0; i < 10; ++i) link(10 + i, 10 + (i + 1) % 10);
  link(13, 18);
  link(7, 10);
  link(8, 11);
  link(9, 12);
  std::vector<std::int8_t> g1(20, 0);
  for (int u : {3, 5, 7, 8, 9}) g1[u] = 1;
  std::vector<std::int8_t> g2 = g1;
  for (int u : {10, 11, 12}) g2[u] = 1;
  std::vector<snd::NodeId> second(10);
  std::iota(second.begin(), second.end(), 10);
  return {snd::Network(20, std::move(edges)), snd::NetworkState(g1), snd::NetworkState(g2),
          {10, 11, 12}, second};
}

snd::NetworkState random_far_placement(const TwoClusterInstance& inst, std::size_t count,
                                       std::mt19937_64& rng) {
  std::vector<snd::NodeId> pool;
  for (auto v : inst.second_cluster)
    if (std::find(inst.bridge_ends.begin(), inst.bridge_ends.end(), v) == inst.bridge_ends.end())
      pool.push_back(v);
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(count);
  std::vector<std::int8_t> ones(count, 1);
  return inst.g1.with(pool, ones);
}

}  // namespace oracle
