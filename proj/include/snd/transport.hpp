#pragma once

// Transportation problems between histograms: plain EMD, the
// mismatch-penalized variants (EMD-hat, EMD with one global bank), and the
// local-bank EMD-star.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "snd/types.hpp"

namespace snd {

struct Shipment {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  std::int64_t units = 0;
};

/// Optimal plan for integer masses.
struct IntegerPlan {
  std::vector<Shipment> shipments;
  std::int64_t cost = 0;     ///< sum of units * cost
  std::int64_t shipped = 0;  ///< min(sum supplies, sum demands)
};

/// Ships min(sum supplies, sum demands) at minimum cost. Costs must be
/// nonnegative. Throws ValidationError on shape errors or negative input,
/// SolverError if the total cost does not fit in 64 bits.
IntegerPlan solve_integer_transport(std::span<const std::int64_t> supplies,
                                    std::span<const std::int64_t> demands,
                                    const CostMatrix& costs);

struct Flow {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  double mass = 0;
};

struct TransportPlan {
  std::vector<Flow> flows;
  ExactCost cost;          ///< exact total cost (units / mass_scale)
  double total_cost = 0;   ///< cost.value()
  double shipped = 0;
};

/// Real-valued masses are converted to integers on a common denominator
/// (exact for rationals with small denominators) and solved exactly.
TransportPlan solve_transport(const Histogram& supplies, const Histogram& demands,
                              const CostMatrix& costs);

/// Total cost divided by shipped mass; 0 when nothing ships.
double emd(const Histogram& p, const Histogram& q, const CostMatrix& d);

/// EMD * min(sum P, sum Q) + alpha * max(D) * |sum P - sum Q|.
double emd_hat(const Histogram& p, const Histogram& q, const CostMatrix& d, double alpha);

struct EmdAlphaResult {
  double value = 0;
  /// Set when alpha < 0.5 or D fails the metric check (checked up to 200 bins).
  bool warning = false;
};

/// One global bank bin per histogram holding the other's total mass, at
/// distance alpha * max(D) from every bin; the result is the total cost of
/// the balanced extended problem.
EmdAlphaResult emd_alpha(const Histogram& p, const Histogram& q, const CostMatrix& d,
                         double alpha);

/// Zero diagonal, positive off-diagonal, symmetric, triangle inequality.
bool is_metric(const CostMatrix& d);
/// Triangle inequality and zero diagonal only (no symmetry requirement).
bool is_semimetric(const CostMatrix& d);

/// Partition of bins into clusters, each with its own bank bins.
struct BankConfig {
  std::vector<std::uint32_t> cluster_of;  ///< cluster id per bin
  std::size_t cluster_count = 0;
  std::size_t banks_per_cluster = 1;
  std::vector<std::int64_t> gamma;  ///< bank distances, cluster-major
  bool metric_mode = false;         ///< enforce 2*gamma >= max intra-cluster D

  std::size_t bank_count() const { return cluster_count * banks_per_cluster; }
  std::int64_t gamma_of(std::size_t cluster, std::size_t bank) const {
    return gamma[cluster * banks_per_cluster + bank];
  }

  static BankConfig single_cluster(std::size_t bins, std::int64_t gamma);
  static BankConfig per_bin(std::size_t bins, std::int64_t gamma);
  /// Every bank gets gamma = max(1, max distance inside its cluster).
  static BankConfig clustered(std::vector<std::uint32_t> cluster_of, const CostMatrix& d,
                              std::size_t banks_per_cluster = 1);

  /// Throws ConfigError unless the partition and gammas are well formed.
  void validate(std::size_t bins) const;
};

/// Histograms extended with bank bins, in integer units sharing mass_scale.
struct ExtendedProblem {
  std::vector<std::int64_t> supplies;
  std::vector<std::int64_t> demands;
  std::int64_t mass_scale = 1;
  CostMatrix distance;          ///< (n + banks) square
  CostMatrix cluster_distance;  ///< min D between members of two clusters
  std::size_t bin_count = 0;
};

/// Bank capacities share the mismatch over the lighter histogram's banks in
/// proportion to that histogram's mass in each cluster (uniformly when the
/// lighter histogram is empty), split equally over a cluster's banks.
/// Throws MetricityError in metric mode when a gamma is too small.
ExtendedProblem extend_for_emd_star(const Histogram& p, const Histogram& q, const CostMatrix& d,
                                    const BankConfig& banks);

/// EMD of the extended problem times max(sum P, sum Q), i.e. its total cost.
ExactCost emd_star_exact(const Histogram& p, const Histogram& q, const CostMatrix& d,
                         const BankConfig& banks);
double emd_star(const Histogram& p, const Histogram& q, const CostMatrix& d,
                const BankConfig& banks);

/// Reference solver for tests: successive shortest augmenting paths with
/// Bellman-Ford in long double. At most kOracleLimit bins per side.
inline constexpr std::size_t kOracleLimit = 64;
TransportPlan lp_oracle(const Histogram& supplies, const Histogram& demands,
                        const CostMatrix& costs);

/// Reduces a fraction so equal values have equal representations.
ExactCost normalized(ExactCost c);

}  // namespace snd
