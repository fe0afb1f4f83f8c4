#include "snd/mincostflow.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "snd/types.hpp"

namespace snd {

namespace {

constexpr std::int64_t kAlpha = 8;  // cost-scaling factor
constexpr std::int64_t kMaxScaledCost = std::int64_t{1} << 62;

}  // namespace

MinCostFlow::MinCostFlow(std::size_t node_count)
    : node_count_(node_count), supply_(node_count, 0) {}

std::size_t MinCostFlow::add_arc(std::uint32_t from, std::uint32_t to, std::int64_t capacity,
                                 std::int64_t cost) {
  if (from >= node_count_ || to >= node_count_) throw std::out_of_range("arc endpoint");
  if (capacity < 0) throw std::invalid_argument("negative arc capacity");
  const std::size_t id = from_.size();
  from_.push_back(from);
  head_.push_back(to);
  capacity_.push_back(capacity);
  cost_.push_back(cost);
  return id;
}

void MinCostFlow::set_supply(std::uint32_t node, std::int64_t supply) {
  if (node >= node_count_) throw std::out_of_range("supply node");
  supply_[node] = supply;
}

std::int64_t MinCostFlow::flow(std::size_t arc) const {
  if (residual_.empty()) return 0;
  return capacity_[arc] - residual_[2 * arc];
}

void MinCostFlow::build_adjacency() {
  const std::size_t m = from_.size();
  first_.assign(node_count_ + 1, 0);
  for (std::size_t k = 0; k < m; ++k) {
    ++first_[from_[k] + 1];
    ++first_[head_[k] + 1];
  }
  std::partial_sum(first_.begin(), first_.end(), first_.begin());
  adjacent_.resize(2 * m);
  std::vector<std::uint32_t> fill(first_.begin(), first_.end() - 1);
  for (std::size_t k = 0; k < m; ++k) {
    adjacent_[fill[from_[k]]++] = static_cast<std::uint32_t>(2 * k);
    adjacent_[fill[head_[k]]++] = static_cast<std::uint32_t>(2 * k + 1);
  }
}

__int128 MinCostFlow::solve() {
  const std::size_t m = from_.size();
  __int128 balance = 0;
  for (std::int64_t s : supply_) balance += s;
  if (balance != 0) throw SolverError("min-cost flow: supplies do not balance");

  build_adjacency();
  // Residual arrays indexed by paired arc id (2k forward, 2k+1 backward).
  residual_.assign(2 * m, 0);
  std::vector<std::int64_t> scaled(2 * m);
  const std::int64_t multiplier = static_cast<std::int64_t>(node_count_) + 1;
  std::int64_t max_cost = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const std::int64_t c = cost_[k];
    const std::int64_t magnitude = c < 0 ? -c : c;
    if (magnitude > kMaxScaledCost / multiplier) {
      throw SolverError("min-cost flow: arc cost too large to scale exactly");
    }
    scaled[2 * k] = c * multiplier;
    scaled[2 * k + 1] = -c * multiplier;
    residual_[2 * k] = capacity_[k];
    max_cost = std::max(max_cost, magnitude * multiplier);
  }
  excess_.assign(supply_.begin(), supply_.end());
  price_.assign(node_count_, 0);

  // refine() reads scaled costs through cost_; swap them in for the run.
  std::vector<std::int64_t> original = std::move(cost_);
  cost_ = std::move(scaled);
  try {
    __int128 eps = max_cost;
    do {
      eps = std::max<__int128>(1, eps / kAlpha);
      refine(eps);
    } while (eps > 1);
  } catch (...) {
    cost_ = std::move(original);
    throw;
  }
  cost_ = std::move(original);

  __int128 total = 0;
  for (std::size_t k = 0; k < m; ++k) {
    total += static_cast<__int128>(capacity_[k] - residual_[2 * k]) * cost_[k];
  }
  return total;
}

void MinCostFlow::refine(__int128 eps) {
  const std::size_t n = node_count_;
  const std::size_t arcs = residual_.size();
  auto tail = [&](std::uint32_t a) { return (a & 1U) ? head_[a >> 1] : from_[a >> 1]; };
  auto tip = [&](std::uint32_t a) { return (a & 1U) ? from_[a >> 1] : head_[a >> 1]; };
  auto reduced = [&](std::uint32_t a) -> __int128 {
    return static_cast<__int128>(cost_[a]) + price_[tail(a)] - price_[tip(a)];
  };
  auto push = [&](std::uint32_t a, std::int64_t amount) {
    residual_[a] -= amount;
    residual_[a ^ 1U] += amount;
    excess_[tail(a)] -= amount;
    excess_[tip(a)] += amount;
  };

  // Saturating every admissible arc makes the flow 0-optimal w.r.t. prices.
  for (std::uint32_t a = 0; a < arcs; ++a) {
    if (residual_[a] > 0 && reduced(a) < 0) push(a, residual_[a]);
  }

  std::deque<std::uint32_t> active;
  std::vector<std::uint8_t> queued(n, 0);
  for (std::uint32_t v = 0; v < n; ++v) {
    if (excess_[v] > 0) {
      active.push_back(v);
      queued[v] = 1;
    }
  }
  std::vector<std::uint32_t> current(first_.begin(), first_.end() - 1);
  std::vector<std::uint32_t> relabels(n, 0);
  const std::size_t relabel_limit = 4 * (static_cast<std::size_t>(kAlpha) + 2) * n + 16;

  while (!active.empty()) {
    const std::uint32_t v = active.front();
    active.pop_front();
    queued[v] = 0;
    while (excess_[v] > 0) {
      if (current[v] == first_[v + 1]) {
        // Relabel: lower the price just enough to create an admissible arc.
        bool any = false;
        __int128 best = 0;
        for (std::uint32_t i = first_[v]; i < first_[v + 1]; ++i) {
          const std::uint32_t a = adjacent_[i];
          if (residual_[a] <= 0) continue;
          const __int128 candidate = price_[tip(a)] - cost_[a];
          if (!any || candidate > best) {
            best = candidate;
            any = true;
          }
        }
        if (!any || ++relabels[v] > relabel_limit) {
          throw SolverError("min-cost flow: instance is infeasible");
        }
        price_[v] = best - eps;
        current[v] = first_[v];
        continue;
      }
      const std::uint32_t a = adjacent_[current[v]];
      if (residual_[a] > 0 && reduced(a) < 0) {
        const std::uint32_t w = tip(a);
        const std::int64_t amount = std::min(excess_[v], residual_[a]);
        push(a, amount);
        if (excess_[w] > 0 && !queued[w]) {
          active.push_back(w);
          queued[w] = 1;
        }
        if (residual_[a] == 0) ++current[v];
      } else {
        ++current[v];
      }
    }
  }
}

}  // namespace snd
