#include "snd/netcore.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace snd {

namespace {

using nlohmann::json;

void check_attribute(const std::optional<std::vector<double>>& values, std::size_t expected,
                     const char* name, double lo, double hi, bool lo_open) {
  if (!values) return;
  if (values->size() != expected) {
    throw ValidationError(std::string("attribute '") + name + "' has " +
                          std::to_string(values->size()) + " entries, expected " +
                          std::to_string(expected));
  }
  for (double v : *values) {
    const bool below = lo_open ? !(v > lo) : !(v >= lo);
    if (!std::isfinite(v) || below || v > hi) {
      throw ValidationError(std::string("attribute '") + name + "' value out of range: " +
                            std::to_string(v));
    }
  }
}

void build_csr(std::size_t n, const std::vector<Edge>& edges, bool by_src,
               std::vector<std::uint32_t>& offsets, std::vector<std::uint32_t>& ids) {
  offsets.assign(n + 1, 0);
  for (const Edge& e : edges) ++offsets[(by_src ? e.src : e.dst) + 1];
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  ids.assign(edges.size(), 0);
  std::vector<std::uint32_t> fill(offsets.begin(), offsets.end() - 1);
  for (std::uint32_t id = 0; id < edges.size(); ++id) {
    const NodeId key = by_src ? edges[id].src : edges[id].dst;
    ids[fill[key]++] = id;
  }
}

}  // namespace

Network::Network(std::size_t node_count, std::vector<Edge> edges, EdgeAttributes attributes,
                 std::optional<std::vector<double>> thresholds)
    : node_count_(node_count),
      edges_(std::move(edges)),
      attributes_(std::move(attributes)),
      thresholds_(std::move(thresholds)) {
  if (node_count_ == 0) throw ValidationError("network must have at least one node");
  if (node_count_ > std::numeric_limits<NodeId>::max()) {
    throw ValidationError("node count exceeds supported range");
  }
  for (const Edge& e : edges_) {
    if (e.src >= node_count_ || e.dst >= node_count_) {
      throw ValidationError("edge (" + std::to_string(e.src) + "," + std::to_string(e.dst) +
                            ") references a node id out of range [0," +
                            std::to_string(node_count_) + ")");
    }
    if (e.src == e.dst) {
      throw ValidationError("self-loop at node " + std::to_string(e.src));
    }
  }
  std::vector<std::pair<NodeId, NodeId>> pairs;
  pairs.reserve(edges_.size());
  for (const Edge& e : edges_) pairs.emplace_back(e.src, e.dst);
  std::sort(pairs.begin(), pairs.end());
  if (auto dup = std::adjacent_find(pairs.begin(), pairs.end()); dup != pairs.end()) {
    throw ValidationError("duplicate edge (" + std::to_string(dup->first) + "," +
                          std::to_string(dup->second) + ")");
  }

  const std::size_t m = edges_.size();
  const double inf = std::numeric_limits<double>::infinity();
  check_attribute(attributes_.comm, m, "comm", 0.0, inf, false);
  check_attribute(attributes_.adopt, m, "adopt", 0.0, 1.0, true);
  check_attribute(attributes_.activation_prob, m, "p", 0.0, 1.0, false);
  check_attribute(attributes_.icc_distance, m, "d", 0.0, inf, true);
  check_attribute(attributes_.influence, m, "w", 0.0, inf, false);
  check_attribute(thresholds_, node_count_, "thresholds", 0.0, inf, false);

  build_csr(node_count_, edges_, true, out_offsets_, out_ids_);
  build_csr(node_count_, edges_, false, in_offsets_, in_ids_);
}

std::span<const std::uint32_t> Network::out_edges(NodeId u) const {
  return std::span(out_ids_).subspan(out_offsets_[u], out_offsets_[u + 1] - out_offsets_[u]);
}

std::span<const std::uint32_t> Network::in_edges(NodeId v) const {
  return std::span(in_ids_).subspan(in_offsets_[v], in_offsets_[v + 1] - in_offsets_[v]);
}

bool Network::operator==(const Network& other) const {
  return node_count_ == other.node_count_ && edges_ == other.edges_ &&
         attributes_ == other.attributes_ && thresholds_ == other.thresholds_;
}

NetworkState::NetworkState(std::vector<std::int8_t> opinions) : opinions_(std::move(opinions)) {
  for (std::size_t i = 0; i < opinions_.size(); ++i) {
    const auto v = opinions_[i];
    if (v != kNegative && v != kNeutral && v != kPositive) {
      throw ValidationError("opinion at node " + std::to_string(i) + " is " +
                            std::to_string(v) + ", expected -1, 0 or 1");
    }
  }
}

std::size_t NetworkState::active_count() const {
  return static_cast<std::size_t>(
      std::count_if(opinions_.begin(), opinions_.end(), [](auto v) { return v != kNeutral; }));
}

NetworkState NetworkState::with(std::span<const NodeId> nodes,
                                std::span<const std::int8_t> values) const {
  if (nodes.size() != values.size()) {
    throw std::invalid_argument("NetworkState::with: nodes/values size mismatch");
  }
  std::vector<std::int8_t> copy = opinions_;
  for (std::size_t i = 0; i < nodes.size(); ++i) copy.at(nodes[i]) = values[i];
  return NetworkState(std::move(copy));
}

StateSeries::StateSeries(std::vector<NetworkState> states, std::vector<std::int64_t> timestamps)
    : states_(std::move(states)), timestamps_(std::move(timestamps)) {
  if (states_.empty()) throw ValidationError("at least one state required");
  if (timestamps_.size() != states_.size()) {
    throw ValidationError("timestamp count does not match state count");
  }
  for (const auto& s : states_) {
    if (s.size() != states_.front().size()) {
      throw ValidationError("all states in a series must have the same length");
    }
  }
  for (std::size_t i = 1; i < timestamps_.size(); ++i) {
    if (timestamps_[i] <= timestamps_[i - 1]) {
      throw ValidationError("timestamps must be strictly increasing");
    }
  }
}

namespace {
std::vector<std::int64_t> iota_timestamps(std::size_t n) {
  std::vector<std::int64_t> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<std::int64_t>(i);
  return t;
}
}  // namespace

StateSeries::StateSeries(std::vector<NetworkState> states) : states_(std::move(states)) {
  *this = StateSeries(std::move(states_), iota_timestamps(states_.size()));
}

Histogram opinion_part(const NetworkState& state, std::int8_t sign) {
  Histogram h(state.size(), 0.0);
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (state[i] == sign) h[i] = 1.0;
  }
  return h;
}

Histogram positive_part(const NetworkState& state) { return opinion_part(state, kPositive); }
Histogram negative_part(const NetworkState& state) { return opinion_part(state, kNegative); }

// ---------------------------------------------------------------------------
// Network JSON

namespace {

constexpr std::pair<const char*, std::optional<std::vector<double>> EdgeAttributes::*>
    kAttributeKeys[] = {
        {"comm", &EdgeAttributes::comm},
        {"adopt", &EdgeAttributes::adopt},
        {"p", &EdgeAttributes::activation_prob},
        {"d", &EdgeAttributes::icc_distance},
        {"w", &EdgeAttributes::influence},
};

std::int64_t require_int(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string("missing field '") + key + "'");
  if (!it->is_number_integer()) {
    throw ParseError(std::string("field '") + key + "' must be an integer");
  }
  return it->get<std::int64_t>();
}

}  // namespace

Network parse_network(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("network file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("network file must be a JSON object");
  const std::int64_t n = require_int(doc, "n");
  if (n <= 0) throw ValidationError("n must be positive");

  auto edges_it = doc.find("edges");
  if (edges_it == doc.end() || !edges_it->is_array()) {
    throw ParseError("network file needs an 'edges' array");
  }
  std::vector<Edge> edges;
  edges.reserve(edges_it->size());
  EdgeAttributes attrs;
  std::vector<std::size_t> present(std::size(kAttributeKeys), 0);
  std::vector<std::vector<double>> values(std::size(kAttributeKeys));

  for (const json& e : *edges_it) {
    if (!e.is_object()) throw ParseError("each edge must be an object");
    const std::int64_t src = require_int(e, "src");
    const std::int64_t dst = require_int(e, "dst");
    if (src < 0 || dst < 0 || src >= n || dst >= n) {
      throw ValidationError("edge (" + std::to_string(src) + "," + std::to_string(dst) +
                            ") references a node id out of range [0," + std::to_string(n) + ")");
    }
    edges.push_back(Edge{static_cast<NodeId>(src), static_cast<NodeId>(dst)});
    for (std::size_t k = 0; k < std::size(kAttributeKeys); ++k) {
      auto it = e.find(kAttributeKeys[k].first);
      if (it == e.end() || it->is_null()) continue;
      if (!it->is_number()) {
        throw ParseError(std::string("edge attribute '") + kAttributeKeys[k].first +
                         "' must be a number");
      }
      values[k].resize(edges.size(), 0.0);
      values[k].back() = it->get<double>();
      ++present[k];
    }
  }
  for (std::size_t k = 0; k < std::size(kAttributeKeys); ++k) {
    if (present[k] == 0) continue;
    if (present[k] != edges.size()) {
      throw ValidationError(std::string("edge attribute '") + kAttributeKeys[k].first +
                            "' must be given for all edges or none");
    }
    attrs.*(kAttributeKeys[k].second) = std::move(values[k]);
  }

  std::optional<std::vector<double>> thresholds;
  if (auto it = doc.find("thresholds"); it != doc.end() && !it->is_null()) {
    if (!it->is_array()) throw ParseError("'thresholds' must be an array");
    std::vector<double> t;
    for (const json& v : *it) {
      if (!v.is_number()) throw ParseError("thresholds must be numbers");
      t.push_back(v.get<double>());
    }
    thresholds = std::move(t);
  }
  return Network(static_cast<std::size_t>(n), std::move(edges), std::move(attrs),
                 std::move(thresholds));
}

Network load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open network file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_network(buf.str());
}

std::string network_to_json(const Network& network) {
  json doc;
  doc["n"] = network.node_count();
  json edges = json::array();
  const auto& attrs = network.attributes();
  for (std::size_t id = 0; id < network.edge_count(); ++id) {
    json e;
    e["src"] = network.edge(id).src;
    e["dst"] = network.edge(id).dst;
    for (const auto& [key, member] : kAttributeKeys) {
      if (const auto& v = attrs.*member) e[key] = (*v)[id];
    }
    edges.push_back(std::move(e));
  }
  doc["edges"] = std::move(edges);
  if (network.thresholds()) doc["thresholds"] = *network.thresholds();
  return doc.dump();
}

void write_network(const Network& network, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write network file: " + path);
  out << network_to_json(network) << '\n';
}

// ---------------------------------------------------------------------------
// State series CSV

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

StateSeries parse_state_series(std::istream& in, const Network& network) {
  const std::size_t n = network.node_count();
  std::vector<NetworkState> states;
  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view row = trim(line);
    if (row.empty()) continue;
    if (first_content) {
      first_content = false;
      if (row.front() == 't' || row.front() == 'T') continue;  // header
    }
    std::vector<std::int8_t> values;
    values.reserve(n);
    std::size_t pos = 0;
    while (true) {
      const std::size_t comma = row.find(',', pos);
      std::string_view field =
          trim(row.substr(pos, comma == std::string_view::npos ? row.npos : comma - pos));
      int v = 0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ParseError("line " + std::to_string(line_no) + ": '" + std::string(field) +
                         "' is not an integer");
      }
      if (v < -1 || v > 1) {
        throw ValidationError("line " + std::to_string(line_no) + ": opinion " +
                              std::to_string(v) + " not in {-1,0,1}");
      }
      values.push_back(static_cast<std::int8_t>(v));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (values.size() != n) {
      throw ValidationError("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(n) + " values, got " + std::to_string(values.size()));
    }
    states.emplace_back(std::move(values));
  }
  if (states.empty()) throw ValidationError("at least one state required");
  return StateSeries(std::move(states));
}

StateSeries load_state_series(const std::string& path, const Network& network) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open state series file: " + path);
  return parse_state_series(in, network);
}

void write_state_series(const StateSeries& series, std::ostream& out) {
  const std::size_t n = series.node_count();
  for (std::size_t i = 0; i < n; ++i) out << (i ? ",t" : "t") << i;
  out << '\n';
  for (const auto& s : series.states()) {
    for (std::size_t i = 0; i < n; ++i) {
      if (i) out << ',';
      out << static_cast<int>(s[i]);
    }
    out << '\n';
  }
}

void write_state_series(const StateSeries& series, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write state series file: " + path);
  write_state_series(series, out);
}

}  // namespace snd
