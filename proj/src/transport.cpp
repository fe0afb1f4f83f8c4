#include "snd/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "snd/mincostflow.hpp"
#include "snd/util.hpp"

namespace snd {

namespace {

void check_shape(std::size_t rows, std::size_t cols, const CostMatrix& costs) {
  if (costs.rows() != rows || costs.cols() != cols) {
    throw ValidationError("cost matrix is " + std::to_string(costs.rows()) + "x" +
                          std::to_string(costs.cols()) + ", histograms need " +
                          std::to_string(rows) + "x" + std::to_string(cols));
  }
}

std::int64_t checked_sum(std::span<const std::int64_t> v) {
  __int128 s = 0;
  for (std::int64_t x : v) {
    if (x < 0) throw ValidationError("negative mass");
    s += x;
  }
  if (s > std::numeric_limits<std::int64_t>::max()) throw SolverError("total mass overflows");
  return static_cast<std::int64_t>(s);
}

IntegerMasses integer_masses(const Histogram& p, const Histogram& q) {
  try {
    return to_integer_masses(p, q);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
}

std::int64_t narrow(__int128 v, const char* what) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw SolverError(std::string(what) + " overflows 64 bits");
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace

ExactCost normalized(ExactCost c) {
  if (c.mass_scale < 0) {
    c.units = -c.units;
    c.mass_scale = -c.mass_scale;
  }
  const std::int64_t g = std::gcd(c.units, c.mass_scale);
  if (g > 1) {
    c.units /= g;
    c.mass_scale /= g;
  }
  if (c.units == 0) c.mass_scale = 1;
  return c;
}

IntegerPlan solve_integer_transport(std::span<const std::int64_t> supplies,
                                    std::span<const std::int64_t> demands,
                                    const CostMatrix& costs) {
  check_shape(supplies.size(), demands.size(), costs);
  for (std::int64_t c : costs.data()) {
    if (c < 0) throw ValidationError("transport costs must be nonnegative");
  }
  const std::int64_t total_supply = checked_sum(supplies);
  const std::int64_t total_demand = checked_sum(demands);
  IntegerPlan plan;
  plan.shipped = std::min(total_supply, total_demand);
  if (plan.shipped == 0) return plan;

  // Only bins with positive mass take part.
  std::vector<std::uint32_t> rows, cols;
  for (std::size_t i = 0; i < supplies.size(); ++i) {
    if (supplies[i] > 0) rows.push_back(static_cast<std::uint32_t>(i));
  }
  for (std::size_t j = 0; j < demands.size(); ++j) {
    if (demands[j] > 0) cols.push_back(static_cast<std::uint32_t>(j));
  }
  const bool dummy = total_supply != total_demand;
  const std::size_t r = rows.size();
  const std::size_t c = cols.size();
  MinCostFlow mcf(r + c + (dummy ? 1 : 0));
  for (std::size_t i = 0; i < r; ++i) mcf.set_supply(static_cast<std::uint32_t>(i), supplies[rows[i]]);
  for (std::size_t j = 0; j < c; ++j) {
    mcf.set_supply(static_cast<std::uint32_t>(r + j), -demands[cols[j]]);
  }
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      const std::int64_t cap = std::min(supplies[rows[i]], demands[cols[j]]);
      mcf.add_arc(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(r + j), cap,
                  costs.at(rows[i], cols[j]));
    }
  }
  // The unshipped excess goes to (or comes from) a free dummy bin.
  if (dummy) {
    const auto d = static_cast<std::uint32_t>(r + c);
    if (total_supply > total_demand) {
      mcf.set_supply(d, -(total_supply - total_demand));
      for (std::size_t i = 0; i < r; ++i) {
        mcf.add_arc(static_cast<std::uint32_t>(i), d, supplies[rows[i]], 0);
      }
    } else {
      mcf.set_supply(d, total_demand - total_supply);
      for (std::size_t j = 0; j < c; ++j) {
        mcf.add_arc(d, static_cast<std::uint32_t>(r + j), demands[cols[j]], 0);
      }
    }
  }
  plan.cost = narrow(mcf.solve(), "transport cost");
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      const std::int64_t f = mcf.flow(i * c + j);
      if (f > 0) plan.shipments.push_back(Shipment{rows[i], cols[j], f});
    }
  }
  return plan;
}

TransportPlan solve_transport(const Histogram& supplies, const Histogram& demands,
                              const CostMatrix& costs) {
  check_shape(supplies.size(), demands.size(), costs);
  const IntegerMasses m = integer_masses(supplies, demands);
  const IntegerPlan ip = solve_integer_transport(m.first, m.second, costs);
  TransportPlan plan;
  plan.cost = normalized(ExactCost{ip.cost, m.scale});
  plan.total_cost = plan.cost.value();
  plan.shipped = static_cast<double>(ip.shipped) / static_cast<double>(m.scale);
  plan.flows.reserve(ip.shipments.size());
  for (const Shipment& s : ip.shipments) {
    plan.flows.push_back(
        Flow{s.from, s.to, static_cast<double>(s.units) / static_cast<double>(m.scale)});
  }
  return plan;
}

double emd(const Histogram& p, const Histogram& q, const CostMatrix& d) {
  check_shape(p.size(), q.size(), d);
  const IntegerMasses m = integer_masses(p, q);
  const IntegerPlan ip = solve_integer_transport(m.first, m.second, d);
  if (ip.shipped == 0) return 0.0;
  return static_cast<double>(ip.cost) / static_cast<double>(ip.shipped);
}

double emd_hat(const Histogram& p, const Histogram& q, const CostMatrix& d, double alpha) {
  check_shape(p.size(), q.size(), d);
  const IntegerMasses m = integer_masses(p, q);
  const IntegerPlan ip = solve_integer_transport(m.first, m.second, d);
  const std::int64_t sp = checked_sum(m.first);
  const std::int64_t sq = checked_sum(m.second);
  const double scale = static_cast<double>(m.scale);
  const double transport = static_cast<double>(ip.cost) / scale;
  const double mismatch = static_cast<double>(sp > sq ? sp - sq : sq - sp) / scale;
  return transport + alpha * static_cast<double>(d.max_entry()) * mismatch;
}

EmdAlphaResult emd_alpha(const Histogram& p, const Histogram& q, const CostMatrix& d,
                         double alpha) {
  check_shape(p.size(), q.size(), d);
  if (!(alpha >= 0) || !std::isfinite(alpha)) throw ConfigError("alpha must be >= 0");
  if (d.rows() != d.cols()) throw ValidationError("EMD with banks needs a square ground distance");
  EmdAlphaResult result;
  result.warning = alpha < 0.5 || (d.rows() <= 200 && !is_metric(d));

  // alpha = a / b exactly (or on a fine grid); scale D by b so gamma is integral.
  std::int64_t b = rational_denominator(alpha, 1'000'000);
  if (b == 0) b = std::int64_t{1} << 20;
  const auto a = static_cast<std::int64_t>(std::llround(alpha * static_cast<double>(b)));

  const std::size_t n = d.rows();
  const IntegerMasses m = integer_masses(p, q);
  const std::int64_t sp = checked_sum(m.first);
  const std::int64_t sq = checked_sum(m.second);
  if (sp == 0 && sq == 0) return result;

  CostMatrix ext(n + 1, n + 1, 0);
  const __int128 gamma = static_cast<__int128>(a) * d.max_entry();
  const std::int64_t g = narrow(gamma, "bank distance");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      ext.at(i, j) = narrow(static_cast<__int128>(d.at(i, j)) * b, "scaled ground distance");
    }
    ext.at(i, n) = g;
    ext.at(n, i) = g;
  }
  std::vector<std::int64_t> ps(m.first), qs(m.second);
  ps.push_back(sq);
  qs.push_back(sp);
  const IntegerPlan ip = solve_integer_transport(ps, qs, ext);
  result.value = static_cast<double>(ip.cost) /
                 (static_cast<double>(m.scale) * static_cast<double>(b));
  return result;
}

bool is_semimetric(const CostMatrix& d) {
  if (d.rows() != d.cols()) return false;
  const std::size_t n = d.rows();
  for (std::size_t i = 0; i < n; ++i) {
    if (d.at(i, i) != 0) return false;
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::int64_t dik = d.at(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        if (d.at(i, j) > dik + d.at(k, j)) return false;
      }
    }
  }
  return true;
}

bool is_metric(const CostMatrix& d) {
  if (d.rows() != d.cols()) return false;
  const std::size_t n = d.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (d.at(i, j) != d.at(j, i)) return false;
      if (i != j && d.at(i, j) <= 0) return false;
    }
  }
  return is_semimetric(d);
}

// ---------------------------------------------------------------------------
// Banks

BankConfig BankConfig::single_cluster(std::size_t bins, std::int64_t gamma) {
  BankConfig b;
  b.cluster_of.assign(bins, 0);
  b.cluster_count = 1;
  b.gamma = {gamma};
  return b;
}

BankConfig BankConfig::per_bin(std::size_t bins, std::int64_t gamma) {
  BankConfig b;
  b.cluster_of.resize(bins);
  std::iota(b.cluster_of.begin(), b.cluster_of.end(), 0U);
  b.cluster_count = bins;
  b.gamma.assign(bins, gamma);
  return b;
}

BankConfig BankConfig::clustered(std::vector<std::uint32_t> cluster_of, const CostMatrix& d,
                                 std::size_t banks_per_cluster) {
  BankConfig b;
  b.cluster_of = std::move(cluster_of);
  b.cluster_count = b.cluster_of.empty()
                        ? 0
                        : *std::max_element(b.cluster_of.begin(), b.cluster_of.end()) + 1;
  b.banks_per_cluster = banks_per_cluster;
  if (d.rows() != b.cluster_of.size() || d.cols() != b.cluster_of.size()) {
    throw ConfigError("cluster assignment does not match ground distance size");
  }
  std::vector<std::int64_t> widest(b.cluster_count, 0);
  for (std::size_t i = 0; i < d.rows(); ++i) {
    for (std::size_t j = 0; j < d.cols(); ++j) {
      if (b.cluster_of[i] == b.cluster_of[j]) {
        widest[b.cluster_of[i]] = std::max(widest[b.cluster_of[i]], d.at(i, j));
      }
    }
  }
  for (std::size_t c = 0; c < b.cluster_count; ++c) {
    for (std::size_t k = 0; k < banks_per_cluster; ++k) {
      b.gamma.push_back(std::max<std::int64_t>(1, widest[c]));
    }
  }
  return b;
}

void BankConfig::validate(std::size_t bins) const {
  if (cluster_of.size() != bins) {
    throw ConfigError("bank config covers " + std::to_string(cluster_of.size()) +
                      " bins, histograms have " + std::to_string(bins));
  }
  if (banks_per_cluster == 0) throw ConfigError("banks_per_cluster must be positive");
  if (gamma.size() != bank_count()) throw ConfigError("one gamma per bank required");
  for (std::int64_t g : gamma) {
    if (g < 0) throw ConfigError("bank distances must be nonnegative");
  }
  std::vector<std::uint8_t> seen(cluster_count, 0);
  for (std::uint32_t c : cluster_of) {
    if (c >= cluster_count) throw ConfigError("cluster id out of range");
    seen[c] = 1;
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw ConfigError("every cluster needs at least one bin");
  }
}

ExtendedProblem extend_for_emd_star(const Histogram& p, const Histogram& q, const CostMatrix& d,
                                    const BankConfig& banks) {
  const std::size_t n = p.size();
  if (q.size() != n) throw ValidationError("histograms differ in length");
  check_shape(n, n, d);
  banks.validate(n);
  const std::size_t nc = banks.cluster_count;
  const std::size_t nb = banks.banks_per_cluster;
  const std::size_t total_bins = n + banks.bank_count();

  ExtendedProblem ext;
  ext.bin_count = n;

  // Cluster-to-cluster distances: closest pair of members.
  ext.cluster_distance = CostMatrix(nc, nc, std::numeric_limits<std::int64_t>::max());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::int64_t& slot = ext.cluster_distance.at(banks.cluster_of[i], banks.cluster_of[j]);
      slot = std::min(slot, d.at(i, j));
    }
  }
  std::vector<std::int64_t> widest(nc, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (banks.cluster_of[i] == banks.cluster_of[j]) {
        widest[banks.cluster_of[i]] = std::max(widest[banks.cluster_of[i]], d.at(i, j));
      }
    }
  }
  if (banks.metric_mode) {
    for (std::size_t c = 0; c < nc; ++c) {
      for (std::size_t k = 0; k < nb; ++k) {
        if (2 * banks.gamma_of(c, k) < widest[c]) {
          throw MetricityError("bank distance " + std::to_string(banks.gamma_of(c, k)) +
                               " of cluster " + std::to_string(c) +
                               " is below half its widest distance " +
                               std::to_string(widest[c]));
        }
      }
    }
  }

  // Masses.
  const IntegerMasses m = integer_masses(p, q);
  const std::int64_t sp = checked_sum(m.first);
  const std::int64_t sq = checked_sum(m.second);
  const bool p_lighter = sp < sq;
  const std::int64_t delta = p_lighter ? sq - sp : sp - sq;
  const std::vector<std::int64_t>& light = p_lighter ? m.first : m.second;
  const std::int64_t light_total = p_lighter ? sp : sq;

  std::vector<__int128> bins_p(m.first.begin(), m.first.end());
  std::vector<__int128> bins_q(m.second.begin(), m.second.end());
  std::vector<__int128> bank_mass(banks.bank_count(), 0);
  __int128 factor = 1;
  if (delta > 0) {
    if (light_total > 0) {
      // capacity of bank (c, k) = delta * mass_c / (light_total * nb)
      factor = static_cast<__int128>(light_total) * static_cast<__int128>(nb);
      std::vector<__int128> cluster_mass(nc, 0);
      for (std::size_t i = 0; i < n; ++i) cluster_mass[banks.cluster_of[i]] += light[i];
      for (std::size_t c = 0; c < nc; ++c) {
        for (std::size_t k = 0; k < nb; ++k) bank_mass[c * nb + k] = delta * cluster_mass[c];
      }
    } else {
      factor = static_cast<__int128>(nc) * static_cast<__int128>(nb);
      std::fill(bank_mass.begin(), bank_mass.end(), static_cast<__int128>(delta));
    }
  }
  for (auto& x : bins_p) x *= factor;
  for (auto& x : bins_q) x *= factor;
  __int128 scale = static_cast<__int128>(m.scale) * factor;

  // Reduce by the common gcd so units stay small.
  auto gcd128 = [](__int128 a, __int128 b) {
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  };
  __int128 g = scale;
  for (auto x : bins_p) g = gcd128(g, x);
  for (auto x : bins_q) g = gcd128(g, x);
  for (auto x : bank_mass) g = gcd128(g, x);
  if (g > 1) {
    for (auto& x : bins_p) x /= g;
    for (auto& x : bins_q) x /= g;
    for (auto& x : bank_mass) x /= g;
    scale /= g;
  }
  ext.mass_scale = narrow(scale, "mass scale");
  ext.supplies.resize(total_bins, 0);
  ext.demands.resize(total_bins, 0);
  for (std::size_t i = 0; i < n; ++i) {
    ext.supplies[i] = narrow(bins_p[i], "extended mass");
    ext.demands[i] = narrow(bins_q[i], "extended mass");
  }
  std::vector<std::int64_t>& bank_side = p_lighter ? ext.supplies : ext.demands;
  for (std::size_t b = 0; b < banks.bank_count(); ++b) {
    bank_side[n + b] = narrow(bank_mass[b], "bank capacity");
  }

  // Extended ground distance.
  ext.distance = CostMatrix(total_bins, total_bins, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) ext.distance.at(i, j) = d.at(i, j);
  }
  for (std::size_t c = 0; c < nc; ++c) {
    for (std::size_t k = 0; k < nb; ++k) {
      const std::size_t bank = n + c * nb + k;
      const std::int64_t gam = banks.gamma_of(c, k);
      for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t ci = banks.cluster_of[i];
        ext.distance.at(i, bank) = gam + ext.cluster_distance.at(ci, c);
        ext.distance.at(bank, i) = gam + ext.cluster_distance.at(c, ci);
      }
      for (std::size_t c2 = 0; c2 < nc; ++c2) {
        for (std::size_t k2 = 0; k2 < nb; ++k2) {
          const std::size_t other = n + c2 * nb + k2;
          ext.distance.at(bank, other) =
              bank == other ? 0 : gam + banks.gamma_of(c2, k2) + ext.cluster_distance.at(c, c2);
        }
      }
    }
  }
  return ext;
}

ExactCost emd_star_exact(const Histogram& p, const Histogram& q, const CostMatrix& d,
                         const BankConfig& banks) {
  const ExtendedProblem ext = extend_for_emd_star(p, q, d, banks);
  const IntegerPlan ip = solve_integer_transport(ext.supplies, ext.demands, ext.distance);
  return normalized(ExactCost{ip.cost, ext.mass_scale});
}

double emd_star(const Histogram& p, const Histogram& q, const CostMatrix& d,
                const BankConfig& banks) {
  return emd_star_exact(p, q, d, banks).value();
}

}  // namespace snd
