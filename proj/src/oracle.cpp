// Reference transport solver used by the test suite. Deliberately shares no
// code with the push-relabel path: augmenting paths on a residual graph,
// shortest paths by Bellman-Ford, arithmetic in long double.

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "snd/transport.hpp"

namespace snd {

TransportPlan lp_oracle(const Histogram& supplies, const Histogram& demands,
                        const CostMatrix& costs) {
  const std::size_t r = supplies.size();
  const std::size_t c = demands.size();
  if (r > kOracleLimit || c > kOracleLimit) {
    throw ConfigError("lp_oracle handles at most " + std::to_string(kOracleLimit) + " bins");
  }
  if (costs.rows() != r || costs.cols() != c) throw ValidationError("oracle: shape mismatch");

  struct Arc {
    std::size_t to;
    long double residual;
    long double cost;
  };
  const std::size_t source = r + c;
  const std::size_t sink = r + c + 1;
  const std::size_t nodes = r + c + 2;
  std::vector<Arc> arcs;
  std::vector<std::vector<std::size_t>> out(nodes);
  auto add = [&](std::size_t u, std::size_t v, long double cap, long double cost) {
    out[u].push_back(arcs.size());
    arcs.push_back(Arc{v, cap, cost});
    out[v].push_back(arcs.size());
    arcs.push_back(Arc{u, 0, -cost});
  };
  long double total_p = 0, total_q = 0;
  for (std::size_t i = 0; i < r; ++i) {
    add(source, i, supplies[i], 0);
    total_p += supplies[i];
  }
  for (std::size_t j = 0; j < c; ++j) {
    add(r + j, sink, demands[j], 0);
    total_q += demands[j];
  }
  const long double inf_cap = total_p + total_q + 1;
  std::vector<std::size_t> middle(r * c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      middle[i * c + j] = arcs.size();
      add(i, r + j, inf_cap, static_cast<long double>(costs.at(i, j)));
    }
  }

  long double remaining = std::min(total_p, total_q);
  long double total_cost = 0;
  const long double inf = std::numeric_limits<long double>::infinity();
  while (remaining > 0) {
    std::vector<long double> dist(nodes, inf);
    std::vector<std::size_t> via(nodes, arcs.size());
    dist[source] = 0;
    for (std::size_t round = 0; round + 1 < nodes; ++round) {
      bool changed = false;
      for (std::size_t u = 0; u < nodes; ++u) {
        if (dist[u] == inf) continue;
        for (std::size_t a : out[u]) {
          if (arcs[a].residual <= 0) continue;
          const long double nd = dist[u] + arcs[a].cost;
          if (nd < dist[arcs[a].to]) {
            dist[arcs[a].to] = nd;
            via[arcs[a].to] = a;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    if (dist[sink] == inf) break;
    long double push = remaining;
    for (std::size_t v = sink; v != source; v = arcs[via[v] ^ 1].to) {
      push = std::min(push, arcs[via[v]].residual);
    }
    for (std::size_t v = sink; v != source; v = arcs[via[v] ^ 1].to) {
      arcs[via[v]].residual -= push;
      arcs[via[v] ^ 1].residual += push;
    }
    total_cost += push * dist[sink];
    remaining -= push;
  }

  TransportPlan plan;
  plan.total_cost = static_cast<double>(total_cost);
  plan.shipped = static_cast<double>(std::min(total_p, total_q) - remaining);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      const long double f = arcs[middle[i * c + j] + 1].residual;
      if (f > 0) {
        plan.flows.push_back(Flow{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                                  static_cast<double>(f)});
      }
    }
  }
  return plan;
}

}  // namespace snd
