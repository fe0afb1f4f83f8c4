#pragma once

// Social Network Distance between two opinion states of one network:
//   SND = 1/2 [ E(G1+, G2+ | D(G1,+)) + E(G1-, G2- | D(G1,-))
//             + E(G2+, G1+ | D(G2,+)) + E(G2-, G1- | D(G2,-)) ]
// with E = EMD-star over the opinion-dependent ground distance D(G, sign).
//
// Two evaluation paths give identical results: a dense one that builds the
// full n x n ground distance, and a fast one that drops unchanged bins and
// runs one Dijkstra per surviving supplier (or consumer).

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "snd/grounddist.hpp"
#include "snd/netcore.hpp"
#include "snd/transport.hpp"
#include "snd/types.hpp"

namespace snd {

enum class BankPolicy { PerBin, Clustered };

struct SndConfig {
  GroundModel model = GroundModel::defaults(Model::Agnostic);
  BankPolicy banks = BankPolicy::PerBin;
  /// Per-bin bank distance. Unset: the cost of one neutral hop, the scale of
  /// distances between a bin and its immediate surroundings.
  std::optional<std::int64_t> bank_gamma;
  /// Clustered policy only (dense path): cluster id per node.
  std::vector<std::uint32_t> clusters;
  std::size_t banks_per_cluster = 1;
  /// false: only the two forward terms (earlier state's costs), summed.
  bool symmetric = true;
};

struct SndResult {
  /// Order: (+, forward), (-, forward), (+, backward), (-, backward).
  std::array<ExactCost, 4> terms{};
  double value = 0;
  std::size_t flow_solves = 0;
  std::size_t n_delta = 0;  ///< users whose opinion differs
};

/// Bank distance used by the per-bin policy.
std::int64_t resolve_bank_gamma(const SndConfig& config);

/// Dense evaluation (n <= kDenseNodeLimit).
SndResult snd_dense(const NetworkState& g1, const NetworkState& g2, const Network& network,
                    const SndConfig& config);
/// Fast exact evaluation; requires the per-bin bank policy.
SndResult fast_snd(const NetworkState& g1, const NetworkState& g2, const Network& network,
                   const SndConfig& config);

/// Value of snd_dense.
double snd(const NetworkState& g1, const NetworkState& g2, const Network& network,
           const SndConfig& config);

/// Transport problem left after dropping the common mass of each bin and
/// attaching one bank per bin of the lighter histogram.
struct ReducedProblem {
  std::vector<NodeId> suppliers;
  std::vector<std::int64_t> supply;
  std::vector<NodeId> consumers;
  std::vector<std::int64_t> demand;
  /// Banks sit at the node of the bin they are attached to.
  std::vector<NodeId> banks;
  std::vector<std::int64_t> bank_mass;
  bool banks_supply = false;  ///< banks on the supplier (lighter P) side
  std::int64_t mass_scale = 1;
  std::size_t n_delta = 0;    ///< bins where P and Q differ

  bool empty() const { return supply.empty() && demand.empty() && bank_mass.empty(); }
};

ReducedProblem reduce(const Histogram& p, const Histogram& q);

/// One EMD-star term through the reduced problem. The ground distance is
/// shortest paths on `graph`; banks are per bin at distance gamma.
ExactCost emd_star_fast(const Histogram& p, const Histogram& q, const CostGraph& graph,
                        std::int64_t gamma, std::size_t* flow_solves = nullptr);

}  // namespace snd
