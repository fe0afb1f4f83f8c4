#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "snd/baselines.hpp"

using namespace snd;

namespace {

double dense_quadratic(const Laplacian& l, const NetworkState& p, const NetworkState& q) {
  const std::size_t n = l.size();
  auto m = l.dense();
  double sum = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      sum += static_cast<double>(p[i] - q[i]) * m[i * n + j] * static_cast<double>(p[j] - q[j]);
  return sum;
}

Network undirected(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& pairs) {
  std::vector<Edge> edges;
  for (auto [a, b] : pairs) {
    edges.push_back({a, b});
    edges.push_back({b, a});
  }
  return Network(n, edges);
}

}  // namespace

TEST_SUITE("baselines") {

TEST_CASE("hamming") {
  CHECK(hamming(NetworkState({1, 0, -1}), NetworkState({1, 1, -1})) == 1);
  CHECK(hamming(NetworkState({1, 0, -1}), NetworkState({1, 0, -1})) == 0);
  CHECK(hamming(NetworkState({1, 1, 1, 1, 1}), NetworkState({0, -1, 0, -1, 0})) == 5);
  CHECK_THROWS_AS(hamming(NetworkState({1}), NetworkState({1, 0})), ValidationError);
}

TEST_CASE("laplacian rows sum to zero and it is symmetric") {
  std::mt19937_64 rng(131);
  Network net = oracle::random_network(12, 0.2, rng);
  Laplacian l(net);
  auto m = l.dense();
  for (std::size_t i = 0; i < 12; ++i) {
    double row = 0;
    for (std::size_t j = 0; j < 12; ++j) {
      row += m[i * 12 + j];
      CHECK(m[i * 12 + j] == m[j * 12 + i]);
    }
    CHECK(row == 0.0);
  }
}

TEST_CASE("quad_form on a three-node path") {
  Network path = undirected(3, {{0, 1}, {1, 2}});
  Laplacian l(path);
  NetworkState p({1, -1, 0}), zero = NetworkState::neutral(3);
  // (1 - (-1))^2 + (-1 - 0)^2 = 5
  CHECK(quad_form(p, zero, l) == doctest::Approx(std::sqrt(5.0)));
  CHECK(quad_form(p, zero, l) == doctest::Approx(std::sqrt(dense_quadratic(l, p, zero))));
  CHECK(quad_form(p, p, l) == 0.0);
}

TEST_CASE("quad_form vanishes on differences constant over a component") {
  Network net = undirected(5, {{0, 1}, {1, 2}, {3, 4}});
  Laplacian l(net);
  CHECK(quad_form(NetworkState({1, 1, 1, 0, 0}), NetworkState({0, 0, 0, 0, 0}), l) == 0.0);
  CHECK(quad_form(NetworkState({1, 1, 1, -1, -1}), NetworkState({0, 0, 0, 0, 0}), l) == 0.0);
}

TEST_CASE("quad_form matches dense evaluation and depends only on the difference") {
  std::mt19937_64 rng(137);
  for (int trial = 0; trial < 20; ++trial) {
    Network net = oracle::random_network(15, 0.15, rng);
    Laplacian l(net);
    NetworkState p = oracle::random_state(15, 0.6, rng), q = oracle::random_state(15, 0.6, rng);
    CHECK(quad_form(p, q, l) == doctest::Approx(std::sqrt(dense_quadratic(l, p, q))));
    CHECK(quad_form(p, q, l) == quad_form(q, p, l));
  }
  Network path = undirected(3, {{0, 1}, {1, 2}});
  Laplacian l(path);
  CHECK(quad_form(NetworkState({1, 0, 0}), NetworkState({0, 0, 0}), l) ==
        quad_form(NetworkState({0, -1, 1}), NetworkState({-1, -1, 1}), l));
}

TEST_CASE("walk_dist") {
  std::mt19937_64 rng(139);
  Network net = oracle::random_network(10, 0.2, rng);
  NetworkState s = oracle::random_state(10, 0.5, rng);
  CHECK(walk_dist(s, s, net) == 0.0);

  Network isolated(4, {});
  CHECK(walk_dist(NetworkState({1, 1, 1, 1}), NetworkState({-1, 0, 1, -1}), isolated) == 0.0);

  // Star: leaves 1..3 point at center 0.
  Network star(4, {{1, 0}, {2, 0}, {3, 0}});
  NetworkState p({1, 1, 1, -1}), q({1, 1, -1, -1});
  // Center contention: 1 - 1/3 = 2/3 in p, 1 - (-1/3) = 4/3 in q; leaves have none.
  CHECK(walk_dist(p, q, star) == doctest::Approx((4.0 / 3 - 2.0 / 3) / 4));
  CHECK(walk_dist(p, q, star) == walk_dist(q, p, star));
}

TEST_CASE("neighborhood voting") {
  Network net(5, {{0, 2}, {1, 2}, {0, 3}, {1, 3}});
  std::vector<NodeId> t2{2}, t4{4}, t3{3};
  SUBCASE("unanimous in-neighbors") {
    for (std::uint64_t seed = 0; seed < 50; ++seed)
      CHECK(nhood_voting_predict(NetworkState({1, 1, 0, 0, 0}), t2, net, seed)[2] == 1);
  }
  SUBCASE("no active in-neighbors falls back to a fair coin") {
    int pos = 0;
    for (std::uint64_t seed = 0; seed < 2000; ++seed)
      pos += nhood_voting_predict(NetworkState({1, 1, 0, 0, 0}), t4, net, seed)[4] == 1;
    CHECK(pos == doctest::Approx(1000).epsilon(0.1));
  }
  SUBCASE("mixed in-neighbors split evenly") {
    int pos = 0;
    for (std::uint64_t seed = 0; seed < 10000; ++seed)
      pos += nhood_voting_predict(NetworkState({1, -1, 0, 0, 0}), t3, net, seed)[3] == 1;
    CHECK(std::abs(pos / 10000.0 - 0.5) <= 0.02);
  }
  SUBCASE("deterministic under a seed") {
    std::vector<NodeId> all{2, 3, 4};
    NetworkState s({1, -1, 0, 0, 0});
    CHECK(nhood_voting_predict(s, all, net, 9) == nhood_voting_predict(s, all, net, 9));
  }
}

TEST_CASE("label propagation") {
  SUBCASE("two disconnected cliques form two communities") {
    std::vector<std::pair<NodeId, NodeId>> pairs;
    for (NodeId a = 0; a < 4; ++a)
      for (NodeId b = a + 1; b < 4; ++b) {
        pairs.push_back({a, b});
        pairs.push_back({a + 4, b + 4});
      }
    Network net = undirected(8, pairs);
    auto labels = label_propagation(net, 7);
    for (NodeId i = 0; i < 4; ++i) {
      CHECK(labels[i] == labels[0]);
      CHECK(labels[i + 4] == labels[4]);
    }
    CHECK(labels[0] != labels[4]);
    std::vector<NodeId> targets{1, 6};
    NetworkState s({1, 0, 1, 1, -1, -1, 0, -1});
    NetworkState out = community_lp_predict(s, targets, net, 1);
    CHECK(out[1] == 1);
    CHECK(out[6] == -1);
  }
  SUBCASE("majority of known opinions in one community") {
    std::vector<std::pair<NodeId, NodeId>> pairs;
    for (NodeId a = 0; a < 5; ++a)
      for (NodeId b = a + 1; b < 5; ++b) pairs.push_back({a, b});
    Network net = undirected(5, pairs);
    std::vector<NodeId> targets{4};
    for (std::uint64_t seed = 0; seed < 20; ++seed)
      CHECK(community_lp_predict(NetworkState({1, 1, 1, -1, 0}), targets, net, seed)[4] == 1);
  }
  SUBCASE("ring of 30 with two planted communities") {
    // Two groups of 15 along a ring; each node links to the next three in its group.
    std::vector<std::pair<NodeId, NodeId>> pairs;
    for (NodeId g = 0; g < 2; ++g)
      for (NodeId i = 0; i < 15; ++i)
        for (NodeId step = 1; step <= 3 && i + step < 15; ++step)
          pairs.push_back({15 * g + i, 15 * g + i + step});
    pairs.push_back({14, 15});
    pairs.push_back({29, 0});
    Network net = undirected(30, pairs);
    std::vector<NodeId> targets{1, 4, 7, 10, 13, 16, 19, 22, 25, 28};
    std::vector<std::int8_t> v(30);
    for (NodeId i = 0; i < 30; ++i) v[i] = i < 15 ? 1 : -1;
    NetworkState truth(v);
    for (NodeId t : targets) v[t] = 0;
    std::size_t hits = 0, total = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      NetworkState out = community_lp_predict(NetworkState(v), targets, net, seed);
      for (NodeId t : targets) hits += out[t] == truth[t];
      total += targets.size();
    }
    CHECK(static_cast<double>(hits) >= 0.9 * static_cast<double>(total));
  }
}

}  // TEST_SUITE
