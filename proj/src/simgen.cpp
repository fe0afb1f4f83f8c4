#include "snd/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <limits>
#include <random>
#include <unordered_set>

#include "snd/util.hpp"

namespace snd {

namespace {

std::int8_t coin(std::mt19937_64& rng) {
  return std::bernoulli_distribution(0.5)(rng) ? kPositive : kNegative;
}

/// Continuous power law with density ~ k^gamma above k_min, floored to an
/// integer and capped.
std::vector<std::size_t> power_law_degrees(std::size_t n, double gamma, std::size_t k_min,
                                           std::size_t k_max, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double a = -gamma;
  std::vector<std::size_t> deg(n);
  for (auto& k : deg) {
    const double u = 1.0 - unif(rng);  // (0, 1]
    const double x = static_cast<double>(k_min) * std::pow(u, -1.0 / (a - 1.0));
    k = std::min<std::size_t>(k_max, static_cast<std::size_t>(std::floor(x)));
  }
  return deg;
}

}  // namespace

void validate_rates(const AdoptionRates& r) {
  if (!(r.p_nbr >= 0 && r.p_nbr <= 1) || !(r.p_ext >= 0 && r.p_ext <= 1)) {
    throw ConfigError("adoption probabilities must be in [0,1]");
  }
  if (r.p_nbr + r.p_ext > 1 + 1e-12) throw ConfigError("p_nbr + p_ext must not exceed 1");
}

void SimParams::validate() const {
  if (n < 10) throw ConfigError("network size must be at least 10");
  if (!(sf_exponent >= -2.9 && sf_exponent <= -2.1)) {
    throw ConfigError("scale-free exponent must lie in [-2.9, -2.1]");
  }
  validate_rates(rates);
  if (initial_adopters > n) throw ConfigError("more initial adopters than users");
  if (!(activation_fraction >= 0 && activation_fraction <= 1)) {
    throw ConfigError("activation_fraction must be in [0,1]");
  }
}

Network gen_scale_free(std::size_t n, double gamma, std::uint64_t seed) {
  if (n < 10) throw ConfigError("network size must be at least 10");
  if (!(gamma >= -2.9 && gamma <= -2.1)) {
    throw ConfigError("scale-free exponent must lie in [-2.9, -2.1]");
  }
  std::mt19937_64 rng(seed);
  constexpr std::size_t kMinDegree = 2;
  std::vector<std::size_t> out_deg = power_law_degrees(n, gamma, kMinDegree, n - 1, rng);
  std::vector<std::size_t> in_deg = power_law_degrees(n, gamma, kMinDegree, n - 1, rng);

  // Equalize stub totals by topping up random nodes of the smaller side.
  std::size_t out_total = std::accumulate(out_deg.begin(), out_deg.end(), std::size_t{0});
  std::size_t in_total = std::accumulate(in_deg.begin(), in_deg.end(), std::size_t{0});
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  while (out_total != in_total) {
    auto& deg = out_total < in_total ? out_deg : in_deg;
    std::size_t& total = out_total < in_total ? out_total : in_total;
    const std::size_t v = pick(rng);
    if (deg[v] < n - 1) {
      ++deg[v];
      ++total;
    }
  }

  std::vector<NodeId> out_stubs, in_stubs;
  out_stubs.reserve(out_total);
  in_stubs.reserve(in_total);
  for (NodeId v = 0; v < n; ++v) {
    out_stubs.insert(out_stubs.end(), out_deg[v], v);
    in_stubs.insert(in_stubs.end(), in_deg[v], v);
  }
  std::shuffle(in_stubs.begin(), in_stubs.end(), rng);

  std::unordered_set<std::uint64_t> seen;
  seen.reserve(out_total * 2);
  std::vector<Edge> edges;
  edges.reserve(out_total);
  for (std::size_t i = 0; i < out_stubs.size(); ++i) {
    const NodeId u = out_stubs[i];
    const NodeId v = in_stubs[i];
    if (u == v) continue;
    const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | v;
    if (!seen.insert(key).second) continue;
    edges.push_back(Edge{u, v});
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  });
  return Network(n, std::move(edges));
}

NetworkState initial_state(std::size_t n, std::size_t adopters, std::uint64_t seed) {
  if (adopters > n) throw ConfigError("more initial adopters than users");
  std::mt19937_64 rng(seed);
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0U);
  std::vector<std::int8_t> opinions(n, kNeutral);
  for (std::size_t i = 0; i < adopters; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(order[i], order[pick(rng)]);
    opinions[order[i]] = coin(rng);
  }
  return NetworkState(std::move(opinions));
}

NetworkState evolve_state(const Network& network, const NetworkState& state,
                          const AdoptionRates& rates, double activation_fraction,
                          std::uint64_t seed, bool neighborless_coin) {
  validate_rates(rates);
  if (state.size() != network.node_count()) {
    throw ValidationError("state length does not match network node count");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::int8_t> next(state.opinions().begin(), state.opinions().end());
  for (NodeId v = 0; v < state.size(); ++v) {
    if (state.is_active(v)) continue;
    if (unif(rng) >= activation_fraction) continue;
    const double r = unif(rng);
    if (r < rates.p_nbr) {
      std::size_t pos = 0, neg = 0;
      for (std::uint32_t id : network.in_edges(v)) {
        const std::int8_t o = state[network.edge(id).src];
        pos += o == kPositive;
        neg += o == kNegative;
      }
      if (pos + neg > 0) {
        const double p_pos = static_cast<double>(pos) / static_cast<double>(pos + neg);
        next[v] = unif(rng) < p_pos ? kPositive : kNegative;
      } else if (neighborless_coin) {
        next[v] = coin(rng);
      }
    } else if (r < rates.p_nbr + rates.p_ext) {
      next[v] = coin(rng);
    }
  }
  return NetworkState(std::move(next));
}

StateSeries gen_series(const Network& network, const SimParams& params,
                       const std::map<std::size_t, AdoptionRates>& overrides) {
  params.validate();
  if (params.n != network.node_count()) throw ConfigError("params.n does not match network");
  for (const auto& [t, r] : overrides) {
    if (t >= params.steps) throw ConfigError("anomaly step beyond the series");
    validate_rates(r);
  }
  std::vector<NetworkState> states;
  states.reserve(params.steps + 1);
  states.push_back(initial_state(params.n, params.initial_adopters, mix_seed(params.seed, 0)));
  for (std::size_t t = 0; t < params.steps; ++t) {
    const auto it = overrides.find(t);
    const AdoptionRates& rates = it != overrides.end() ? it->second : params.rates;
    states.push_back(evolve_state(network, states.back(), rates, params.activation_fraction,
                                  mix_seed(params.seed, 1000 + t), params.neighborless_coin));
  }
  return StateSeries(std::move(states));
}

SyntheticData generate(const SimParams& params, const AdoptionRates& anomalous,
                       std::size_t anomaly_count) {
  params.validate();
  validate_rates(anomalous);
  if (anomaly_count > 0 && params.steps < anomaly_count + 2) {
    throw ConfigError("too many anomalies for the number of steps");
  }
  Network network = gen_scale_free(params.n, params.sf_exponent, mix_seed(params.seed, 1));
  std::mt19937_64 rng(mix_seed(params.seed, 2));
  std::vector<std::size_t> interior;
  for (std::size_t t = 1; t + 1 < params.steps; ++t) interior.push_back(t);
  std::shuffle(interior.begin(), interior.end(), rng);
  interior.resize(anomaly_count);
  std::sort(interior.begin(), interior.end());
  std::map<std::size_t, AdoptionRates> overrides;
  for (std::size_t t : interior) overrides[t] = anomalous;
  StateSeries series = gen_series(network, params, overrides);
  return SyntheticData{std::move(network), std::move(series), std::move(interior)};
}

NetworkState icc_step(const Network& network, const NetworkState& state, const IccParams& params,
                      std::uint64_t seed, const std::vector<std::uint8_t>* frontier) {
  params.validate();
  if (state.size() != network.node_count()) {
    throw ValidationError("state length does not match network node count");
  }
  if (frontier && frontier->size() != state.size()) {
    throw ValidationError("frontier length does not match network node count");
  }
  const auto& attrs = network.attributes();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::int8_t> next(state.opinions().begin(), state.opinions().end());
  for (NodeId v = 0; v < state.size(); ++v) {
    if (state.is_active(v)) continue;
    double best = std::numeric_limits<double>::infinity();
    double weight_pos = 0, weight_neg = 0;
    for (std::uint32_t id : network.in_edges(v)) {
      const NodeId u = network.edge(id).src;
      if (!state.is_active(u) || (frontier && !(*frontier)[u])) continue;
      const double p = attrs.activation_prob ? (*attrs.activation_prob)[id] : params.default_p;
      if (unif(rng) >= p) continue;
      const double d = attrs.icc_distance ? (*attrs.icc_distance)[id] : params.default_d;
      if (d < best) {
        best = d;
        weight_pos = weight_neg = 0;
      }
      if (d == best) (state[u] == kPositive ? weight_pos : weight_neg) += p;
    }
    if (weight_pos + weight_neg > 0) {
      next[v] = unif(rng) * (weight_pos + weight_neg) < weight_pos ? kPositive : kNegative;
    }
  }
  return NetworkState(std::move(next));
}

NetworkState random_transition(const Network& network, const NetworkState& state, std::size_t k,
                               std::uint64_t seed) {
  if (state.size() != network.node_count()) {
    throw ValidationError("state length does not match network node count");
  }
  std::vector<NodeId> neutral;
  for (NodeId v = 0; v < state.size(); ++v) {
    if (!state.is_active(v)) neutral.push_back(v);
  }
  if (k > neutral.size()) {
    throw ConfigError("cannot activate " + std::to_string(k) + " users, only " +
                      std::to_string(neutral.size()) + " are neutral");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::int8_t> next(state.opinions().begin(), state.opinions().end());
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, neutral.size() - 1);
    std::swap(neutral[i], neutral[pick(rng)]);
    next[neutral[i]] = coin(rng);
  }
  return NetworkState(std::move(next));
}

}  // namespace snd
