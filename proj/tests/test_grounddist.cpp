#include <cmath>
#include <numeric>

#include "doctest.h"
#include "oracles.hpp"
#include "snd/grounddist.hpp"

using namespace snd;

namespace {

// Hand evaluation: no comm data (one unit per hop), no adoption data.
std::int64_t expected_cost(double spread_probability, double scale = 100.0) {
  return std::llround(scale * (1.0 - std::log(spread_probability)));
}

Network four_node_icc() {
  return parse_network(R"({"n": 4, "edges": [
    {"src": 0, "dst": 1, "p": 0.5, "d": 1}, {"src": 1, "dst": 2, "p": 0.5, "d": 1},
    {"src": 0, "dst": 2, "p": 0.5, "d": 1}, {"src": 2, "dst": 3, "p": 0.5, "d": 1},
    {"src": 3, "dst": 0, "p": 0.5, "d": 1}]})");
}

GroundModel icc_model(double epsilon) {
  GroundModel m = GroundModel::defaults(Model::Icc);
  m.icc.epsilon = epsilon;
  return m;
}

}  // namespace

TEST_SUITE("grounddist") {

TEST_CASE("agnostic case split") {
  Network net = parse_network(R"({"n": 2, "edges": [{"src": 0, "dst": 1, "comm": 1, "adopt": 1}]})");
  GroundModel m = GroundModel::defaults(Model::Agnostic);
  SUBCASE("friendly spreader into a neutral user") {
    auto g = build_cost_graph(net, NetworkState({1, 0}), Sign::Positive, m);
    CHECK(g.edge_costs()[0] == m.agnostic.c_friendly);
  }
  SUBCASE("adverse receiver") {
    auto g = build_cost_graph(net, NetworkState({1, -1}), Sign::Positive, m);
    CHECK(g.edge_costs()[0] == m.agnostic.c_adverse);
  }
  SUBCASE("adverse spreader") {
    auto g = build_cost_graph(net, NetworkState({1, 0}), Sign::Negative, m);
    CHECK(g.edge_costs()[0] == m.agnostic.c_adverse);
  }
  SUBCASE("neutral spreader") {
    auto g = build_cost_graph(net, NetworkState({0, 0}), Sign::Positive, m);
    CHECK(g.edge_costs()[0] == m.agnostic.c_neutral);
  }
}

TEST_CASE("missing comm data costs one unit per hop") {
  Network net = parse_network(R"({"n": 2, "edges": [{"src": 0, "dst": 1}]})");
  GroundModel m = GroundModel::defaults(Model::Agnostic);
  auto g = build_cost_graph(net, NetworkState({1, 0}), Sign::Positive, m);
  CHECK(g.edge_costs()[0] == 1 + m.agnostic.c_friendly);
}

TEST_CASE("ICC costs match a hand-evaluated table, one active seed") {
  const double eps = 1e-6;
  Network net = four_node_icc();
  NetworkState s({1, 0, 0, 0});
  auto pos = build_cost_graph(net, s, Sign::Positive, icc_model(eps));
  // Nearest-active distances: 0, 1, 1, 2; p_a(1) = p_a(2) = 0.5.
  const std::int64_t reach = expected_cost((0.5 - eps) / 0.5);
  const std::int64_t blocked = expected_cost(eps);
  CHECK(pos.edge_costs() == std::vector<std::int64_t>{reach, blocked, reach, blocked, blocked});
  auto neg = build_cost_graph(net, s, Sign::Negative, icc_model(eps));
  CHECK(neg.edge_costs() == std::vector<std::int64_t>(5, blocked));
}

TEST_CASE("ICC costs match a hand-evaluated table, two active seeds") {
  const double eps = 1e-6;
  Network net = four_node_icc();
  auto g = build_cost_graph(net, NetworkState({1, 1, 0, 0}), Sign::Positive, icc_model(eps));
  // Node 2 is reached at distance 1 from both seeds: p_a(2) = 1.0.
  const std::int64_t shared = expected_cost((0.5 - eps) / 1.0);
  const std::int64_t blocked = expected_cost(eps);
  CHECK(g.edge_costs() == std::vector<std::int64_t>{expected_cost(1.0), shared, shared, blocked, blocked});
}

TEST_CASE("LTC costs match a hand-evaluated table") {
  Network net = parse_network(
      R"({"n": 3, "edges": [{"src": 0, "dst": 2}, {"src": 1, "dst": 2}, {"src": 2, "dst": 0}]})");
  GroundModel m = GroundModel::defaults(Model::Ltc);
  auto g = build_cost_graph(net, NetworkState({1, -1, 0}), Sign::Positive, m);
  const double eps = m.ltc.epsilon;
  // Default weights 1/in-degree: 0.5 each, total active influence on node 2 is 1.
  CHECK(g.edge_costs() ==
        std::vector<std::int64_t>{expected_cost((1 - eps) * 0.5), expected_cost(eps), expected_cost(eps)});
}

TEST_CASE("nearest active seeds") {
  Network net = parse_network(R"({"n": 4, "edges": [
    {"src": 0, "dst": 1}, {"src": 1, "dst": 2}, {"src": 2, "dst": 3}]})");
  IccParams p;
  SUBCASE("single source gives hop distances") {
    auto r = icc_nearest_active(net, NetworkState({1, 0, 0, 0}), p);
    CHECK(r.distance == std::vector<double>{0, 1, 2, 3});
  }
  SUBCASE("no active nodes") {
    auto r = icc_nearest_active(net, NetworkState::neutral(4), p);
    for (double d : r.distance) CHECK(std::isinf(d));
    for (double a : r.p_active) CHECK(a == 0.0);
  }
  SUBCASE("equidistant active in-neighbors sum their probabilities") {
    Network tie = parse_network(
        R"({"n": 3, "edges": [{"src": 0, "dst": 2, "p": 0.3}, {"src": 1, "dst": 2, "p": 0.4}]})");
    auto r = icc_nearest_active(tie, NetworkState({1, -1, 0}), p);
    CHECK(r.p_active[2] == doctest::Approx(0.7));
  }
}

TEST_CASE("quantization") {
  Quantization q{1.0, 100};
  CHECK(quantize_cost(2.5, q) == 3);
  CHECK(quantize_cost(2.49, q) == 2);
  CHECK(quantize_cost(0.2, q) == 1);
  CHECK(quantize_cost(0.0, q) == 1);
  CHECK(quantize_cost(1e9, q) == 100);
}

TEST_CASE("model config parsing") {
  GroundModel m = parse_ground_model(R"({"model": "icc", "epsilon": 0.01, "scale": 50, "cap": 1000})");
  CHECK(m.kind == Model::Icc);
  CHECK(m.icc.epsilon == 0.01);
  CHECK(m.quant.scale == 50.0);
  CHECK(m.quant.cap == 1000);
  CHECK_THROWS_AS(parse_ground_model(R"({"model": "bogus"})"), ConfigError);
  CHECK_THROWS_AS(parse_ground_model(R"({"unknown": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_ground_model(R"({"c_friendly": 5, "c_neutral": 4})"), ConfigError);
  CHECK(parse_ground_model(ground_model_to_json(m)).icc.epsilon == 0.01);
}

TEST_CASE("shortest paths on a chain") {
  std::vector<Edge> edges{{0, 1}, {1, 2}};
  CostGraph g(4, edges, {2, 3}, Sign::Positive, 100);
  auto d = shortest_paths_from(g, 0);
  CHECK(d[0] == 0);
  CHECK(d[1] == 2);
  CHECK(d[2] == 5);
  CHECK(d[3] == g.unreachable());
  CHECK(g.unreachable() == 3 * 100);
}

TEST_CASE("dense distance of a single edge") {
  std::vector<Edge> edges{{0, 1}};
  CostGraph g(2, edges, {4}, Sign::Positive, 1000);
  GroundDistance d = dense_ground_distance(g);
  CHECK(d == CostMatrix::from_rows({{0, 4}, {1000, 0}}));
}

TEST_CASE("symmetric graph gives a symmetric distance") {
  std::mt19937_64 rng(3);
  std::vector<Edge> edges;
  std::vector<std::int64_t> costs;
  std::uniform_int_distribution<std::int64_t> c(1, 9);
  for (NodeId u = 0; u < 12; ++u)
    for (NodeId v = u + 1; v < 12; ++v)
      if (rng() % 3 == 0) {
        std::int64_t w = c(rng);
        edges.push_back({u, v});
        costs.push_back(w);
        edges.push_back({v, u});
        costs.push_back(w);
      }
  CostGraph g(12, edges, costs, Sign::Positive, 50);
  GroundDistance d = dense_ground_distance(g);
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = 0; j < 12; ++j) CHECK(d.at(i, j) == d.at(j, i));
}

TEST_CASE("shortest paths agree with Bellman-Ford and Floyd-Warshall") {
  std::mt19937_64 rng(17);
  const Model models[] = {Model::Agnostic, Model::Icc, Model::Ltc};
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 5 + rng() % 46;
    Network net = oracle::random_network(n, 3.0 / static_cast<double>(n), rng, trial % 2 == 0,
                                         trial % 3 == 0);
    NetworkState s = oracle::random_state(n, 0.3, rng);
    GroundModel m = GroundModel::defaults(models[trial % 3]);
    CostGraph g = build_cost_graph(net, s, trial % 2 ? Sign::Positive : Sign::Negative, m);
    std::vector<Edge> edges(net.edges().begin(), net.edges().end());
    CostMatrix fw = oracle::floyd_warshall(n, edges, g.edge_costs(), g.unreachable());
    CHECK(dense_ground_distance(g) == fw);
    for (NodeId src = 0; src < n; src += 7) {
      CHECK(shortest_paths_from(g, src) ==
            oracle::bellman_ford(n, edges, g.edge_costs(), src, g.unreachable()));
      auto to = shortest_paths_to(g, src);
      for (std::size_t i = 0; i < n; ++i) CHECK(to[i] == fw.at(i, src));
      std::vector<NodeId> targets;
      for (NodeId t = 0; t < n; t += 3) targets.push_back(t);
      auto fwd = distances_to_targets(g, src, targets, false);
      auto bwd = distances_to_targets(g, src, targets, true);
      for (std::size_t k = 0; k < targets.size(); ++k) {
        CHECK(fwd[k] == fw.at(src, targets[k]));
        CHECK(bwd[k] == fw.at(targets[k], src));
      }
    }
  }
}

TEST_CASE("dense distance satisfies the triangle inequality") {
  std::mt19937_64 rng(23);
  Network net = oracle::random_network(30, 0.1, rng);
  NetworkState s = oracle::random_state(30, 0.4, rng);
  GroundDistance d =
      dense_ground_distance(build_cost_graph(net, s, Sign::Positive, GroundModel::defaults(Model::Agnostic)));
  for (std::size_t i = 0; i < 30; ++i) {
    CHECK(d.at(i, i) == 0);
    for (std::size_t j = 0; j < 30; ++j)
      for (std::size_t k = 0; k < 30; ++k) REQUIRE(d.at(i, j) <= d.at(i, k) + d.at(k, j));
  }
}

TEST_CASE("every cost lies in [1, U]") {
  std::mt19937_64 rng(29);
  for (Model kind : {Model::Agnostic, Model::Icc, Model::Ltc}) {
    GroundModel m = GroundModel::defaults(kind);
    m.quant.cap = 600;
    Network net = oracle::random_network(25, 0.2, rng, true, true);
    for (int trial = 0; trial < 5; ++trial) {
      NetworkState s = oracle::random_state(25, 0.5, rng);
      for (Sign sign : {Sign::Positive, Sign::Negative}) {
        const CostGraph g = build_cost_graph(net, s, sign, m);
        for (auto c : g.edge_costs()) {
          CHECK(c >= 1);
          CHECK(c <= 600);
        }
      }
    }
  }
}

TEST_CASE("agnostic costs are equivariant under node relabeling") {
  std::mt19937_64 rng(31);
  const std::size_t n = 20;
  Network net = oracle::random_network(n, 0.2, rng);
  NetworkState s = oracle::random_state(n, 0.5, rng);
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Edge> relabeled;
  for (const Edge& e : net.edges()) relabeled.push_back({perm[e.src], perm[e.dst]});
  std::vector<std::int8_t> moved(n);
  for (std::size_t i = 0; i < n; ++i) moved[perm[i]] = s[i];
  Network net2(n, relabeled);
  GroundModel m = GroundModel::defaults(Model::Agnostic);
  auto a = build_cost_graph(net, s, Sign::Positive, m).edge_costs();
  auto b = build_cost_graph(net2, NetworkState(moved), Sign::Positive, m).edge_costs();
  CHECK(a == b);
}

TEST_CASE("smaller ICC epsilon makes impossible transitions costlier until the cap") {
  Network net = four_node_icc();
  NetworkState s({1, 0, 0, 0});
  GroundModel m = icc_model(1e-2);
  m.quant.cap = 3000;
  std::int64_t last = 0;
  bool capped = false;
  for (double eps : {1e-2, 1e-4, 1e-6, 1e-9, 1e-12, 1e-20}) {
    m.icc.epsilon = eps;
    std::int64_t blocked = build_cost_graph(net, s, Sign::Positive, m).edge_costs()[1];
    if (capped) {
      CHECK(blocked == 3000);
    } else {
      CHECK(blocked > last);
    }
    capped = blocked == 3000;
    last = blocked;
  }
  CHECK(capped);
}

TEST_CASE("neutral hop cost") {
  CHECK(neutral_hop_cost(GroundModel::defaults(Model::Agnostic)) == 5);
  GroundModel icc = GroundModel::defaults(Model::Icc);
  CHECK(neutral_hop_cost(icc) == expected_cost(icc.icc.epsilon));
}

TEST_CASE("dense path refuses oversized networks") {
  std::vector<Edge> none;
  CostGraph g(kDenseNodeLimit + 1, none, {}, Sign::Positive, 10);
  CHECK_THROWS_AS(dense_ground_distance(g), ConfigError);
}

}  // TEST_SUITE
