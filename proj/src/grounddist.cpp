#include "snd/grounddist.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>

#include "json.hpp"
#include "snd/util.hpp"

namespace snd {

std::string to_string(Model m) {
  switch (m) {
    case Model::Agnostic: return "agnostic";
    case Model::Icc: return "icc";
    case Model::Ltc: return "ltc";
  }
  return "unknown";
}

Model model_from_string(const std::string& name) {
  if (name == "agnostic") return Model::Agnostic;
  if (name == "icc") return Model::Icc;
  if (name == "ltc") return Model::Ltc;
  throw ConfigError("unknown ground-distance model '" + name + "'");
}

void ModelAgnosticParams::validate() const {
  if (c_friendly <= 0 || c_neutral <= 0 || c_adverse <= 0) {
    throw ConfigError("agnostic penalties must be positive");
  }
  if (!(c_friendly < c_neutral && c_neutral < c_adverse)) {
    throw ConfigError("agnostic penalties must satisfy c_friendly < c_neutral < c_adverse");
  }
  if (!(epsilon > 0 && epsilon < 1)) throw ConfigError("epsilon must be in (0,1)");
}

void IccParams::validate() const {
  if (!(epsilon > 0 && epsilon < 1)) throw ConfigError("icc epsilon must be in (0,1)");
  if (!(default_p >= epsilon && default_p <= 1)) {
    throw ConfigError("icc default_p must be in [epsilon, 1]");
  }
  if (!(default_d > 0) || !std::isfinite(default_d)) {
    throw ConfigError("icc default_d must be positive");
  }
}

void LtcParams::validate() const {
  if (!(epsilon > 0 && epsilon < 1)) throw ConfigError("ltc epsilon must be in (0,1)");
  if (default_w && !(*default_w >= 0)) throw ConfigError("ltc default_w must be >= 0");
  if (!(default_theta >= 0)) throw ConfigError("ltc default_theta must be >= 0");
}

void Quantization::validate() const {
  if (!(scale > 0) || !std::isfinite(scale)) throw ConfigError("scale must be positive");
  if (cap < 1) throw ConfigError("cost cap must be a positive integer");
}

GroundModel GroundModel::defaults(Model kind) {
  GroundModel m;
  m.kind = kind;
  m.quant.scale = kind == Model::Agnostic ? 1.0 : 100.0;
  return m;
}

void GroundModel::validate() const {
  quant.validate();
  switch (kind) {
    case Model::Agnostic: agnostic.validate(); break;
    case Model::Icc: icc.validate(); break;
    case Model::Ltc: ltc.validate(); break;
  }
}

GroundModel parse_ground_model(const std::string& json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("model config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("model config must be a JSON object");
  Model kind = Model::Agnostic;
  if (auto it = doc.find("model"); it != doc.end()) {
    if (!it->is_string()) throw ConfigError("'model' must be a string");
    kind = model_from_string(it->get<std::string>());
  }
  GroundModel m = GroundModel::defaults(kind);
  auto number = [&](const json& v, const std::string& key) {
    if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
    return v.get<double>();
  };
  auto integer = [&](const json& v, const std::string& key) {
    if (!v.is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
    return v.get<std::int64_t>();
  };
  for (const auto& [key, value] : doc.items()) {
    if (key == "model") continue;
    if (key == "c_friendly") m.agnostic.c_friendly = integer(value, key);
    else if (key == "c_neutral") m.agnostic.c_neutral = integer(value, key);
    else if (key == "c_adverse") m.agnostic.c_adverse = integer(value, key);
    else if (key == "epsilon") {
      const double e = number(value, key);
      m.agnostic.epsilon = m.icc.epsilon = m.ltc.epsilon = e;
    } else if (key == "default_p") m.icc.default_p = number(value, key);
    else if (key == "default_d") m.icc.default_d = number(value, key);
    else if (key == "default_w") m.ltc.default_w = number(value, key);
    else if (key == "default_theta") m.ltc.default_theta = number(value, key);
    else if (key == "scale") m.quant.scale = number(value, key);
    else if (key == "cap") m.quant.cap = integer(value, key);
    else if (key == "use_comm") {
      if (!value.is_boolean()) throw ConfigError("'use_comm' must be a boolean");
      m.use_comm = value.get<bool>();
    } else if (key == "use_adoption") {
      if (!value.is_boolean()) throw ConfigError("'use_adoption' must be a boolean");
      m.use_adoption = value.get<bool>();
    } else {
      throw ConfigError("unknown model config key '" + key + "'");
    }
  }
  m.validate();
  return m;
}

std::string ground_model_to_json(const GroundModel& m) {
  nlohmann::json doc;
  doc["model"] = to_string(m.kind);
  doc["scale"] = m.quant.scale;
  doc["cap"] = m.quant.cap;
  doc["use_comm"] = m.use_comm;
  doc["use_adoption"] = m.use_adoption;
  switch (m.kind) {
    case Model::Agnostic:
      doc["c_friendly"] = m.agnostic.c_friendly;
      doc["c_neutral"] = m.agnostic.c_neutral;
      doc["c_adverse"] = m.agnostic.c_adverse;
      doc["epsilon"] = m.agnostic.epsilon;
      break;
    case Model::Icc:
      doc["epsilon"] = m.icc.epsilon;
      doc["default_p"] = m.icc.default_p;
      doc["default_d"] = m.icc.default_d;
      break;
    case Model::Ltc:
      doc["epsilon"] = m.ltc.epsilon;
      if (m.ltc.default_w) doc["default_w"] = *m.ltc.default_w;
      doc["default_theta"] = m.ltc.default_theta;
      break;
  }
  return doc.dump();
}

std::int64_t quantize_cost(double neg_log_probability, const Quantization& quant) {
  const double x = quant.scale * neg_log_probability;
  if (!(x < static_cast<double>(quant.cap))) return quant.cap;  // also catches +inf/NaN
  const auto rounded = static_cast<std::int64_t>(std::floor(x + 0.5));
  return std::clamp<std::int64_t>(rounded, 1, quant.cap);
}

// ---------------------------------------------------------------------------
// CostGraph

CostGraph::CostGraph(std::size_t node_count, std::span<const Edge> edges,
                     std::vector<std::int64_t> costs, Sign sign, std::int64_t cap)
    : node_count_(node_count),
      sign_(sign),
      cap_(cap),
      unreachable_(static_cast<std::int64_t>(std::max<std::size_t>(node_count, 2) - 1) * cap),
      edge_costs_(std::move(costs)) {
  if (edge_costs_.size() != edges.size()) {
    throw std::invalid_argument("CostGraph: one cost per edge required");
  }
  for (std::int64_t c : edge_costs_) {
    if (c < 1 || c > cap_) throw std::invalid_argument("CostGraph: edge cost outside [1, cap]");
  }
  out_offsets_.assign(node_count_ + 1, 0);
  in_offsets_.assign(node_count_ + 1, 0);
  for (const Edge& e : edges) {
    ++out_offsets_[e.src + 1];
    ++in_offsets_[e.dst + 1];
  }
  for (std::size_t i = 0; i < node_count_; ++i) {
    out_offsets_[i + 1] += out_offsets_[i];
    in_offsets_[i + 1] += in_offsets_[i];
  }
  out_arcs_.resize(edges.size());
  in_arcs_.resize(edges.size());
  std::vector<std::uint32_t> out_fill(out_offsets_.begin(), out_offsets_.end() - 1);
  std::vector<std::uint32_t> in_fill(in_offsets_.begin(), in_offsets_.end() - 1);
  for (std::size_t id = 0; id < edges.size(); ++id) {
    const Edge& e = edges[id];
    out_arcs_[out_fill[e.src]++] = CostArc{e.dst, edge_costs_[id]};
    in_arcs_[in_fill[e.dst]++] = CostArc{e.src, edge_costs_[id]};
  }
}

// ---------------------------------------------------------------------------
// Models

namespace {

double attribute_or(const std::optional<std::vector<double>>& attr, std::size_t id,
                    double fallback) {
  return attr ? (*attr)[id] : fallback;
}

double neg_log(double p, double epsilon) {
  if (p <= 0) p = epsilon;
  return -std::log(std::min(p, 1.0));
}

constexpr double kTieTolerance = 1e-9;

bool approx_equal(double a, double b) {
  if (a == b) return true;
  return std::fabs(a - b) <= kTieTolerance * std::max({1.0, std::fabs(a), std::fabs(b)});
}

std::vector<double> agnostic_penalties(const Network& net, const NetworkState& state, Sign sign,
                                       const ModelAgnosticParams& p) {
  const std::int8_t op = opinion_of(sign);
  std::vector<double> out(net.edge_count());
  for (std::size_t id = 0; id < net.edge_count(); ++id) {
    const Edge& e = net.edge(id);
    const std::int8_t gu = state[e.src];
    const std::int8_t gv = state[e.dst];
    if (gu == -op || gv == -op) out[id] = static_cast<double>(p.c_adverse);
    else if (gu == kNeutral) out[id] = static_cast<double>(p.c_neutral);
    else out[id] = static_cast<double>(p.c_friendly);
  }
  return out;
}

std::vector<double> icc_penalties(const Network& net, const NetworkState& state, Sign sign,
                                  const IccParams& p) {
  const std::int8_t op = opinion_of(sign);
  const NearestActive nearest = icc_nearest_active(net, state, p);
  const auto& attrs = net.attributes();
  std::vector<double> out(net.edge_count());
  for (std::size_t id = 0; id < net.edge_count(); ++id) {
    const Edge& e = net.edge(id);
    const std::int8_t gu = state[e.src];
    const std::int8_t gv = state[e.dst];
    const double d_uv = attribute_or(attrs.icc_distance, id, p.default_d);
    const double p_uv = attribute_or(attrs.activation_prob, id, p.default_p);
    // Time at which u's influence reaches v through this edge.
    const double arrival = (gu != kNeutral ? 0.0 : nearest.distance[e.src]) + d_uv;
    const double best = nearest.distance[e.dst];
    double prob;
    if (gu == op && gv == op) {
      prob = 1.0;
    } else if (arrival > best && !approx_equal(arrival, best)) {
      prob = 0.0;
    } else if (gu == op && gv == kNeutral) {
      const double pa = nearest.p_active[e.dst];
      prob = pa > 0 ? std::max(0.0, p_uv - p.epsilon) / pa : 0.0;
    } else {
      prob = p.epsilon;
    }
    out[id] = neg_log(prob, p.epsilon);
  }
  return out;
}

std::vector<double> ltc_penalties(const Network& net, const NetworkState& state, Sign sign,
                                  const LtcParams& p) {
  const std::int8_t op = opinion_of(sign);
  const auto& attrs = net.attributes();
  auto weight = [&](std::size_t id) {
    if (attrs.influence) return (*attrs.influence)[id];
    if (p.default_w) return *p.default_w;
    return 1.0 / static_cast<double>(net.in_degree(net.edge(id).dst));
  };
  std::vector<double> omega_in(net.node_count(), 0.0);
  for (std::size_t id = 0; id < net.edge_count(); ++id) {
    const Edge& e = net.edge(id);
    if (state[e.src] != kNeutral) omega_in[e.dst] += weight(id);
  }
  std::vector<double> out(net.edge_count());
  for (std::size_t id = 0; id < net.edge_count(); ++id) {
    const Edge& e = net.edge(id);
    const std::int8_t gu = state[e.src];
    const std::int8_t gv = state[e.dst];
    const double theta =
        net.thresholds() ? (*net.thresholds())[e.dst] : p.default_theta;
    double prob;
    if (gu == kNeutral) {
      prob = 0.0;
    } else if (gu == op && gv == op) {
      prob = 1.0;
    } else if (gu == op && gv == kNeutral && omega_in[e.dst] >= theta && omega_in[e.dst] > 0) {
      prob = (1.0 - p.epsilon) * weight(id) / omega_in[e.dst];
    } else {
      prob = p.epsilon;
    }
    out[id] = neg_log(prob, p.epsilon);
  }
  return out;
}

}  // namespace

NearestActive icc_nearest_active(const Network& net, const NetworkState& state,
                                 const IccParams& p) {
  const std::size_t n = net.node_count();
  const double inf = std::numeric_limits<double>::infinity();
  NearestActive result{std::vector<double>(n, inf), std::vector<double>(n, 0.0)};
  const auto& attrs = net.attributes();

  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (NodeId v = 0; v < n; ++v) {
    if (state.is_active(v)) {
      result.distance[v] = 0.0;
      heap.emplace(0.0, v);
    }
  }
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > result.distance[u]) continue;
    for (std::uint32_t id : net.out_edges(u)) {
      const NodeId v = net.edge(id).dst;
      const double nd = d + attribute_or(attrs.icc_distance, id, p.default_d);
      if (nd < result.distance[v]) {
        result.distance[v] = nd;
        heap.emplace(nd, v);
      }
    }
  }
  for (std::size_t id = 0; id < net.edge_count(); ++id) {
    const Edge& e = net.edge(id);
    if (!state.is_active(e.src)) continue;
    const double d_uv = attribute_or(attrs.icc_distance, id, p.default_d);
    if (approx_equal(d_uv, result.distance[e.dst])) {
      result.p_active[e.dst] += attribute_or(attrs.activation_prob, id, p.default_p);
    }
  }
  return result;
}

std::vector<double> spreading_penalties(const Network& network, const NetworkState& state,
                                        Sign sign, const GroundModel& model) {
  if (state.size() != network.node_count()) {
    throw ValidationError("state length does not match network node count");
  }
  switch (model.kind) {
    case Model::Agnostic: return agnostic_penalties(network, state, sign, model.agnostic);
    case Model::Icc: return icc_penalties(network, state, sign, model.icc);
    case Model::Ltc: return ltc_penalties(network, state, sign, model.ltc);
  }
  throw ConfigError("unknown model");
}

CostGraph build_cost_graph(const Network& network, const NetworkState& state, Sign sign,
                           const GroundModel& model) {
  model.validate();
  const std::vector<double> spread = spreading_penalties(network, state, sign, model);
  const double epsilon = model.kind == Model::Agnostic ? model.agnostic.epsilon
                         : model.kind == Model::Icc    ? model.icc.epsilon
                                                       : model.ltc.epsilon;
  const auto& attrs = network.attributes();
  std::vector<std::int64_t> costs(network.edge_count());
  for (std::size_t id = 0; id < network.edge_count(); ++id) {
    // Missing communication data: one unit per hop (connectivity penalty).
    const double comm =
        model.use_comm && attrs.comm ? neg_log((*attrs.comm)[id], epsilon) : 1.0;
    const double adopt =
        model.use_adoption && attrs.adopt ? neg_log((*attrs.adopt)[id], epsilon) : 0.0;
    costs[id] = quantize_cost(comm + adopt + spread[id], model.quant);
  }
  return CostGraph(network.node_count(), network.edges(), std::move(costs), sign,
                   model.quant.cap);
}

// ---------------------------------------------------------------------------
// Shortest paths

namespace {

constexpr std::int64_t kInfinity = std::numeric_limits<std::int64_t>::max();

/// Reusable per-thread Dijkstra buffers; only touched entries are reset.
struct DijkstraWorkspace {
  std::vector<std::int64_t> dist;
  std::vector<std::uint8_t> settled;
  std::vector<std::uint8_t> wanted;
  std::vector<NodeId> touched;

  void prepare(std::size_t n) {
    if (dist.size() != n) {
      dist.assign(n, kInfinity);
      settled.assign(n, 0);
      wanted.assign(n, 0);
      touched.clear();
    }
  }
  void reset() {
    for (NodeId v : touched) {
      dist[v] = kInfinity;
      settled[v] = 0;
      wanted[v] = 0;
    }
    touched.clear();
  }
};

DijkstraWorkspace& workspace() {
  thread_local DijkstraWorkspace ws;
  return ws;
}

/// Runs Dijkstra from `source`; stops early once `remaining` wanted nodes are
/// settled (remaining == 0 means run to exhaustion).
template <typename ArcsOf>
void dijkstra(DijkstraWorkspace& ws, NodeId source, ArcsOf arcs_of, std::size_t remaining) {
  using Item = std::pair<std::int64_t, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  const bool run_all = remaining == 0;
  ws.dist[source] = 0;
  ws.touched.push_back(source);
  heap.emplace(0, source);
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (ws.settled[u]) continue;
    ws.settled[u] = 1;
    if (!run_all && ws.wanted[u] && --remaining == 0) return;
    for (const CostArc& a : arcs_of(u)) {
      const std::int64_t nd = d + a.cost;
      if (nd < ws.dist[a.to]) {
        if (ws.dist[a.to] == kInfinity && !ws.wanted[a.to]) ws.touched.push_back(a.to);
        ws.dist[a.to] = nd;
        heap.emplace(nd, a.to);
      }
    }
  }
}

std::vector<std::int64_t> full_run(const CostGraph& g, NodeId source, bool reverse) {
  if (source >= g.node_count()) throw std::out_of_range("source node out of range");
  auto& ws = workspace();
  ws.prepare(g.node_count());
  if (reverse) {
    dijkstra(ws, source, [&](NodeId u) { return g.in(u); }, 0);
  } else {
    dijkstra(ws, source, [&](NodeId u) { return g.out(u); }, 0);
  }
  std::vector<std::int64_t> out(g.node_count());
  for (std::size_t v = 0; v < out.size(); ++v) {
    out[v] = ws.dist[v] == kInfinity ? g.unreachable() : std::min(ws.dist[v], g.unreachable());
  }
  ws.reset();
  return out;
}

}  // namespace

std::vector<std::int64_t> shortest_paths_from(const CostGraph& graph, NodeId source) {
  return full_run(graph, source, false);
}

std::vector<std::int64_t> shortest_paths_to(const CostGraph& graph, NodeId target) {
  return full_run(graph, target, true);
}

std::vector<std::int64_t> distances_to_targets(const CostGraph& graph, NodeId source,
                                               std::span<const NodeId> targets, bool reverse) {
  if (source >= graph.node_count()) throw std::out_of_range("source node out of range");
  auto& ws = workspace();
  ws.prepare(graph.node_count());
  std::size_t distinct = 0;
  for (NodeId t : targets) {
    if (t >= graph.node_count()) throw std::out_of_range("target node out of range");
    if (!ws.wanted[t]) {
      ws.wanted[t] = 1;
      ws.touched.push_back(t);
      ++distinct;
    }
  }
  if (distinct > 0) {
    if (reverse) {
      dijkstra(ws, source, [&](NodeId u) { return graph.in(u); }, distinct);
    } else {
      dijkstra(ws, source, [&](NodeId u) { return graph.out(u); }, distinct);
    }
  }
  std::vector<std::int64_t> out(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const std::int64_t d = ws.dist[targets[i]];
    out[i] = d == kInfinity ? graph.unreachable() : std::min(d, graph.unreachable());
  }
  ws.reset();
  return out;
}

GroundDistance dense_ground_distance(const CostGraph& graph) {
  const std::size_t n = graph.node_count();
  if (n > kDenseNodeLimit) {
    throw ConfigError("dense ground distance limited to " + std::to_string(kDenseNodeLimit) +
                      " nodes, network has " + std::to_string(n));
  }
  GroundDistance d(n, n);
  for (NodeId s = 0; s < n; ++s) {
    const auto row = shortest_paths_from(graph, s);
    std::copy(row.begin(), row.end(), &d.at(s, 0));
  }
  return d;
}

std::int64_t neutral_hop_cost(const GroundModel& model) {
  double spread = 0;
  switch (model.kind) {
    case Model::Agnostic: spread = static_cast<double>(model.agnostic.c_neutral); break;
    case Model::Icc: spread = -std::log(model.icc.epsilon); break;
    case Model::Ltc: spread = -std::log(model.ltc.epsilon); break;
  }
  return quantize_cost(1.0 + spread, model.quant);
}

}  // namespace snd
