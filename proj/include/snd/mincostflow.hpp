#pragma once

// Exact min-cost flow by cost-scaling push-relabel (Goldberg-Tarjan).
// Integer capacities and costs; node supplies must balance.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace snd {

class MinCostFlow {
 public:
  explicit MinCostFlow(std::size_t node_count);

  /// Returns the arc id. Costs may be negative; capacity must be >= 0.
  std::size_t add_arc(std::uint32_t from, std::uint32_t to, std::int64_t capacity,
                      std::int64_t cost);
  /// Positive = supply, negative = demand.
  void set_supply(std::uint32_t node, std::int64_t supply);

  /// Solves to optimality and returns the total cost. Throws SolverError
  /// when supplies are unbalanced, the instance is infeasible, or the
  /// scaled costs would overflow.
  __int128 solve();

  std::int64_t flow(std::size_t arc) const;
  std::size_t node_count() const { return node_count_; }
  std::size_t arc_count() const { return from_.size(); }

 private:
  void build_adjacency();
  void refine(__int128 eps);

  std::size_t node_count_;
  std::vector<std::int64_t> supply_;
  // Arc 2k is the k-th added arc, 2k+1 its reverse.
  std::vector<std::uint32_t> from_, head_;
  std::vector<std::int64_t> capacity_, residual_, cost_;
  std::vector<std::uint32_t> first_, adjacent_;  // CSR of arc ids per node
  std::vector<std::int64_t> excess_;
  std::vector<__int128> price_;
};

}  // namespace snd
