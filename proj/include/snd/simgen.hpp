#pragma once

// Synthetic scale-free networks, voting-style opinion evolution, and
// one-round ICC / random-activation transitions.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "snd/grounddist.hpp"
#include "snd/netcore.hpp"

namespace snd {

struct AdoptionRates {
  double p_nbr = 0.12;  ///< adopt from active in-neighbors
  double p_ext = 0.01;  ///< adopt a random opinion
};

struct SimParams {
  std::size_t n = 2000;
  double sf_exponent = -2.3;
  AdoptionRates rates;
  std::size_t initial_adopters = 100;
  std::size_t steps = 40;  ///< transitions; the series holds steps + 1 states
  double activation_fraction = 0.1;
  /// Neighbor adoption by a user without active in-neighbors: false keeps
  /// the user neutral, true draws a fair-coin opinion instead.
  bool neighborless_coin = false;
  std::uint64_t seed = 1;

  /// Throws ConfigError.
  void validate() const;
};

/// Throws ConfigError unless both rates are in [0,1] with sum <= 1.
void validate_rates(const AdoptionRates& rates);

/// Directed configuration model: in- and out-degree sequences drawn
/// independently from P(k) ~ k^gamma on [2, n-1], stubs paired at random,
/// self-loops and repeated edges dropped. gamma must lie in [-2.9, -2.1]
/// and n >= 10 (ConfigError otherwise).
Network gen_scale_free(std::size_t n, double gamma, std::uint64_t seed);

/// `adopters` distinct uniform nodes, each +1 or -1 by a fair coin.
NetworkState initial_state(std::size_t n, std::size_t adopters, std::uint64_t seed);

/// One evolution step. Active users keep their opinion. Each neutral user
/// gets a chance with probability activation_fraction; then with p_nbr it
/// copies an opinion by a vote weighted by its active in-neighbors, with
/// p_ext it takes a fair-coin opinion, otherwise it stays neutral. A neighbor
/// adoption with no active in-neighbor leaves the user neutral unless
/// `neighborless_coin` is set. All decisions read the previous state.
NetworkState evolve_state(const Network& network, const NetworkState& state,
                          const AdoptionRates& rates, double activation_fraction,
                          std::uint64_t seed, bool neighborless_coin = false);

/// Initial state plus params.steps evolution steps. Transition t (state t to
/// t + 1) uses overrides[t] when present.
StateSeries gen_series(const Network& network, const SimParams& params,
                       const std::map<std::size_t, AdoptionRates>& overrides = {});

struct SyntheticData {
  Network network;
  StateSeries series;
  std::vector<std::size_t> anomalies;  ///< transition indices with overridden rates
};

/// Network, series, and `anomaly_count` distinct interior anomalous
/// transitions (never the first or last) drawn from the seed.
SyntheticData generate(const SimParams& params, const AdoptionRates& anomalous,
                       std::size_t anomaly_count);

/// One ICC round: every active node (or only nodes flagged in `frontier`)
/// tries each neutral out-neighbor with probability p_uv. A neutral node
/// reached by several successes takes the opinion arriving over the
/// shortest d_uv; remaining ties are settled by a vote weighted by p_uv.
NetworkState icc_step(const Network& network, const NetworkState& state, const IccParams& params,
                      std::uint64_t seed, const std::vector<std::uint8_t>* frontier = nullptr);

/// k distinct uniformly chosen neutral users take fair-coin opinions.
/// Throws ConfigError when k exceeds the neutral count.
NetworkState random_transition(const Network& network, const NetworkState& state, std::size_t k,
                               std::uint64_t seed);

}  // namespace snd
