#include "snd/snd.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "snd/util.hpp"

namespace snd {

namespace {

struct Term {
  const NetworkState* cost_state;  // state whose ground distance is used
  std::int8_t sign;
  const NetworkState* from;
  const NetworkState* to;
};

std::array<Term, 4> eq_terms(const NetworkState& g1, const NetworkState& g2) {
  return {Term{&g1, kPositive, &g1, &g2}, Term{&g1, kNegative, &g1, &g2},
          Term{&g2, kPositive, &g2, &g1}, Term{&g2, kNegative, &g2, &g1}};
}

void check_states(const NetworkState& g1, const NetworkState& g2, const Network& network) {
  if (g1.size() != network.node_count() || g2.size() != network.node_count()) {
    throw ValidationError("state length does not match network node count");
  }
}

std::size_t count_changes(const NetworkState& g1, const NetworkState& g2) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < g1.size(); ++i) c += g1[i] != g2[i];
  return c;
}

void finish(SndResult& r, bool symmetric) {
  if (symmetric) {
    // Summed in sorted order so swapping the states gives the same bits.
    std::array<double, 4> v;
    for (int i = 0; i < 4; ++i) v[i] = r.terms[i].value();
    std::sort(v.begin(), v.end());
    r.value = 0.5 * (v[0] + v[1] + v[2] + v[3]);
  } else {
    r.value = r.terms[0].value() + r.terms[1].value();
  }
}

Sign sign_of(std::int8_t s) { return s > 0 ? Sign::Positive : Sign::Negative; }

std::int64_t narrow(__int128 v, const char* what) {
  if (v > std::numeric_limits<std::int64_t>::max()) {
    throw SolverError(std::string(what) + " overflows 64 bits");
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace

std::int64_t resolve_bank_gamma(const SndConfig& config) {
  if (config.bank_gamma) {
    if (*config.bank_gamma <= 0) throw ConfigError("bank_gamma must be positive");
    return *config.bank_gamma;
  }
  return neutral_hop_cost(config.model);
}

SndResult snd_dense(const NetworkState& g1, const NetworkState& g2, const Network& network,
                    const SndConfig& config) {
  check_states(g1, g2, network);
  const std::size_t n = network.node_count();
  if (n > kDenseNodeLimit) {
    throw ConfigError("dense SND limited to " + std::to_string(kDenseNodeLimit) + " nodes");
  }
  std::optional<std::int64_t> gamma;
  if (config.banks == BankPolicy::PerBin) gamma = resolve_bank_gamma(config);
  if (config.banks == BankPolicy::Clustered && config.clusters.size() != n) {
    throw ConfigError("clustered banks need one cluster id per node");
  }

  SndResult result;
  result.n_delta = count_changes(g1, g2);
  const auto terms = eq_terms(g1, g2);
  const std::size_t count = config.symmetric ? 4 : 2;
  for (std::size_t t = 0; t < count; ++t) {
    const Term& term = terms[t];
    const CostGraph graph =
        build_cost_graph(network, *term.cost_state, sign_of(term.sign), config.model);
    const GroundDistance d = dense_ground_distance(graph);
    const BankConfig banks = config.banks == BankPolicy::PerBin
                                 ? BankConfig::per_bin(n, *gamma)
                                 : BankConfig::clustered(config.clusters, d,
                                                         config.banks_per_cluster);
    result.terms[t] = emd_star_exact(opinion_part(*term.from, term.sign),
                                     opinion_part(*term.to, term.sign), d, banks);
    ++result.flow_solves;
  }
  finish(result, config.symmetric);
  return result;
}

double snd(const NetworkState& g1, const NetworkState& g2, const Network& network,
           const SndConfig& config) {
  return snd_dense(g1, g2, network, config).value;
}

ReducedProblem reduce(const Histogram& p, const Histogram& q) {
  if (p.size() != q.size()) throw ValidationError("histograms differ in length");
  const std::size_t n = p.size();
  IntegerMasses m;
  try {
    m = to_integer_masses(p, q);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  __int128 sp = 0, sq = 0;
  for (std::int64_t x : m.first) sp += x;
  for (std::int64_t x : m.second) sq += x;
  const bool p_lighter = sp < sq;
  const __int128 delta = p_lighter ? sq - sp : sp - sq;
  const std::vector<std::int64_t>& light = p_lighter ? m.first : m.second;
  const __int128 light_total = p_lighter ? sp : sq;

  ReducedProblem r;
  r.banks_supply = p_lighter;
  __int128 factor = 1;
  if (delta > 0) factor = light_total > 0 ? light_total : static_cast<__int128>(n);

  std::vector<__int128> supply, demand, bank;
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t common = std::min(m.first[i], m.second[i]);
    if (m.first[i] != m.second[i]) ++r.n_delta;
    if (m.first[i] > common) {
      r.suppliers.push_back(static_cast<NodeId>(i));
      supply.push_back((m.first[i] - common) * factor);
    }
    if (m.second[i] > common) {
      r.consumers.push_back(static_cast<NodeId>(i));
      demand.push_back((m.second[i] - common) * factor);
    }
    if (delta > 0 && (light_total == 0 || light[i] > 0)) {
      r.banks.push_back(static_cast<NodeId>(i));
      bank.push_back(light_total > 0 ? delta * light[i] : delta);
    }
  }
  __int128 scale = static_cast<__int128>(m.scale) * factor;
  auto gcd128 = [](__int128 a, __int128 b) {
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  };
  __int128 g = scale;
  for (auto x : supply) g = gcd128(g, x);
  for (auto x : demand) g = gcd128(g, x);
  for (auto x : bank) g = gcd128(g, x);
  auto emit = [&](const std::vector<__int128>& src, std::vector<std::int64_t>& dst) {
    dst.reserve(src.size());
    for (auto x : src) dst.push_back(narrow(x / g, "reduced mass"));
  };
  emit(supply, r.supply);
  emit(demand, r.demand);
  emit(bank, r.bank_mass);
  r.mass_scale = narrow(scale / g, "mass scale");
  return r;
}

ExactCost emd_star_fast(const Histogram& p, const Histogram& q, const CostGraph& graph,
                        std::int64_t gamma, std::size_t* flow_solves) {
  if (p.size() != graph.node_count() || q.size() != graph.node_count()) {
    throw ValidationError("histogram length does not match network node count");
  }
  const ReducedProblem r = reduce(p, q);
  if (r.empty()) return ExactCost{0, 1};

  struct Entry {
    NodeId node;
    std::int64_t mass;
    bool bank;
  };
  std::vector<Entry> rows, cols;
  for (std::size_t i = 0; i < r.suppliers.size(); ++i) {
    rows.push_back({r.suppliers[i], r.supply[i], false});
  }
  for (std::size_t j = 0; j < r.consumers.size(); ++j) {
    cols.push_back({r.consumers[j], r.demand[j], false});
  }
  for (std::size_t b = 0; b < r.banks.size(); ++b) {
    (r.banks_supply ? rows : cols).push_back({r.banks[b], r.bank_mass[b], true});
  }

  auto locations = [](const std::vector<Entry>& entries) {
    std::vector<NodeId> loc;
    loc.reserve(entries.size());
    for (const Entry& e : entries) loc.push_back(e.node);
    std::sort(loc.begin(), loc.end());
    loc.erase(std::unique(loc.begin(), loc.end()), loc.end());
    return loc;
  };
  const std::vector<NodeId> row_loc = locations(rows);
  const std::vector<NodeId> col_loc = locations(cols);
  auto index_of = [](const std::vector<NodeId>& loc, NodeId v) {
    return static_cast<std::size_t>(std::lower_bound(loc.begin(), loc.end(), v) - loc.begin());
  };

  // dist[i * col_loc.size() + j] = D(row_loc[i], col_loc[j])
  std::vector<std::int64_t> dist(row_loc.size() * col_loc.size());
  if (row_loc.size() <= col_loc.size()) {
    parallel_for(row_loc.size(), [&](std::size_t i) {
      const auto d = distances_to_targets(graph, row_loc[i], col_loc, false);
      std::copy(d.begin(), d.end(), dist.begin() + static_cast<std::ptrdiff_t>(i * col_loc.size()));
    });
  } else {
    parallel_for(col_loc.size(), [&](std::size_t j) {
      const auto d = distances_to_targets(graph, col_loc[j], row_loc, true);
      for (std::size_t i = 0; i < row_loc.size(); ++i) dist[i * col_loc.size() + j] = d[i];
    });
  }

  CostMatrix costs(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t ri = index_of(row_loc, rows[i].node);
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const std::size_t cj = index_of(col_loc, cols[j].node);
      costs.at(i, j) = dist[ri * col_loc.size() + cj] + (rows[i].bank ? gamma : 0) +
                       (cols[j].bank ? gamma : 0);
    }
  }
  std::vector<std::int64_t> supply, demand;
  for (const Entry& e : rows) supply.push_back(e.mass);
  for (const Entry& e : cols) demand.push_back(e.mass);
  const IntegerPlan plan = solve_integer_transport(supply, demand, costs);
  if (flow_solves) ++*flow_solves;
  return normalized(ExactCost{plan.cost, r.mass_scale});
}

SndResult fast_snd(const NetworkState& g1, const NetworkState& g2, const Network& network,
                   const SndConfig& config) {
  check_states(g1, g2, network);
  if (config.banks != BankPolicy::PerBin) {
    throw ConfigError("the fast path supports only per-bin banks");
  }
  const std::int64_t gamma = resolve_bank_gamma(config);
  SndResult result;
  result.n_delta = count_changes(g1, g2);
  if (result.n_delta == 0) return result;
  const auto terms = eq_terms(g1, g2);
  const std::size_t count = config.symmetric ? 4 : 2;
  for (std::size_t t = 0; t < count; ++t) {
    const Term& term = terms[t];
    const Histogram from = opinion_part(*term.from, term.sign);
    const Histogram to = opinion_part(*term.to, term.sign);
    if (from == to) continue;
    const CostGraph graph =
        build_cost_graph(network, *term.cost_state, sign_of(term.sign), config.model);
    result.terms[t] = emd_star_fast(from, to, graph, gamma, &result.flow_solves);
  }
  finish(result, config.symmetric);
  return result;
}

}  // namespace snd
