// Copyright 2026 The mrsplit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mrsplit/graph.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <istream>
#include <iterator>
#include <queue>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "mrsplit/error.hpp"

namespace mrs {
namespace {

std::uint64_t arc_key(NodeId src, NodeId dst) {
  return (static_cast<std::uint64_t>(src) << 32) | dst;
}

void build_index(std::size_t n, const std::vector<Edge>& edges, bool by_src,
                 std::vector<std::size_t>& offsets, std::vector<std::size_t>& index) {
  offsets.assign(n + 1, 0);
  for (const auto& e : edges) ++offsets[(by_src ? e.src : e.dst) + 1];
  for (std::size_t v = 0; v < n; ++v) offsets[v + 1] += offsets[v];
  index.resize(edges.size());
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (std::size_t k = 0; k < edges.size(); ++k)
    index[cursor[by_src ? edges[k].src : edges[k].dst]++] = k;
}

// Shared by the TSV and JSON readers: `positions[k]` is the record number
// reported for raw edge k.
Graph build_checked(std::optional<std::size_t> declared_n, std::vector<Edge> raw,
                    const std::vector<std::size_t>& positions, bool undirected) {
  std::size_t n = declared_n.value_or(0);
  if (!declared_n) {
    for (const auto& e : raw) n = std::max<std::size_t>(n, std::max(e.src, e.dst) + std::size_t{1});
  }
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(raw.size() * 2);
  for (std::size_t k = 0; k < raw.size(); ++k) {
    const auto& e = raw[k];
    if (e.src >= n || e.dst >= n)
      throw ParseError("node index out of declared range [0, " + std::to_string(n) + ")",
                       positions[k]);
    const bool fresh = seen.insert(arc_key(e.src, e.dst)).second;
    const bool fresh_back =
        !undirected || e.src == e.dst || seen.insert(arc_key(e.dst, e.src)).second;
    if (!fresh || !fresh_back)
      throw ParseError("duplicate edge (" + std::to_string(e.src) + "," + std::to_string(e.dst) + ")",
                       positions[k]);
  }
  return Graph::from_edges(n, std::move(raw), undirected);
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos
                                                                        : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

Graph load_tsv(std::istream& in, bool undirected) {
  std::optional<std::size_t> declared_n;
  std::vector<Edge> raw;
  std::vector<std::size_t> positions;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("#n=", 0) == 0) {
      std::size_t count = 0;
      if (!parse_number(std::string_view(line).substr(3), count))
        throw ParseError("malformed node count header '" + line + "'", line_no);
      declared_n = count;
      continue;
    }
    const auto fields = split_fields(line);
    if (fields.size() < 2 || fields.size() > 3)
      throw ParseError("expected src<TAB>dst[<TAB>weight], got '" + line + "'", line_no);
    Edge e;
    if (!parse_number(fields[0], e.src) || !parse_number(fields[1], e.dst))
      throw ParseError("malformed node index in '" + line + "'", line_no);
    if (fields.size() == 3 && !parse_number(fields[2], e.weight))
      throw ParseError("malformed weight in '" + line + "'", line_no);
    raw.push_back(e);
    positions.push_back(line_no);
  }
  return build_checked(declared_n, std::move(raw), positions, undirected);
}

NodeId json_index(const nlohmann::json& v, std::size_t pos) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0 ||
      v.get<std::int64_t>() > static_cast<std::int64_t>(std::numeric_limits<NodeId>::max()))
    throw ParseError("node index must be a non-negative integer", pos);
  return static_cast<NodeId>(v.get<std::int64_t>());
}

Graph load_json(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
  }
  if (!doc.is_object()) throw ParseError("top-level JSON value must be an object", 0);

  std::optional<std::size_t> declared_n;
  if (doc.contains("n")) {
    if (!doc["n"].is_number_integer() || doc["n"].get<std::int64_t>() < 0)
      throw ParseError("\"n\" must be a non-negative integer", 0);
    declared_n = doc["n"].get<std::size_t>();
  }
  bool undirected = false;
  if (doc.contains("undirected")) {
    if (!doc["undirected"].is_boolean()) throw ParseError("\"undirected\" must be a boolean", 0);
    undirected = doc["undirected"].get<bool>();
  }
  std::vector<Edge> raw;
  std::vector<std::size_t> positions;
  if (doc.contains("edges")) {
    if (!doc["edges"].is_array()) throw ParseError("\"edges\" must be an array", 0);
    std::size_t pos = 0;
    for (const auto& item : doc["edges"]) {
      ++pos;
      if (!item.is_array() || item.size() < 2 || item.size() > 3)
        throw ParseError("edge must be [src, dst] or [src, dst, weight]", pos);
      Edge e{json_index(item[0], pos), json_index(item[1], pos), 1.0};
      if (item.size() == 3) {
        if (!item[2].is_number()) throw ParseError("edge weight must be a number", pos);
        e.weight = item[2].get<double>();
      }
      raw.push_back(e);
      positions.push_back(pos);
    }
  }
  return build_checked(declared_n, std::move(raw), positions, undirected);
}

}  // namespace

Graph Graph::from_edges(std::size_t n, std::vector<Edge> edges, bool undirected) {
  if (!undirected) return from_arcs(n, std::move(edges), false);
  std::vector<Edge> expanded;
  expanded.reserve(edges.size() * 2);
  for (const auto& e : edges) {
    expanded.push_back(e);
    if (e.src != e.dst) expanded.push_back({e.dst, e.src, e.weight});
  }
  return from_arcs(n, std::move(expanded), true);
}

Graph Graph::from_arcs(std::size_t n, std::vector<Edge> edges, bool symmetric) {
  if (n > std::numeric_limits<NodeId>::max()) throw Error("node count exceeds index range");
  Graph g;
  g.n_ = n;
  g.symmetric_ = symmetric;
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.src >= n || e.dst >= n)
      throw Error("edge (" + std::to_string(e.src) + "," + std::to_string(e.dst) +
                  ") references a node outside [0, " + std::to_string(n) + ")");
    if (!seen.insert(arc_key(e.src, e.dst)).second)
      throw Error("duplicate edge (" + std::to_string(e.src) + "," + std::to_string(e.dst) + ")");
  }
  g.edges_ = std::move(edges);
  build_index(n, g.edges_, true, g.out_offsets_, g.out_index_);
  build_index(n, g.edges_, false, g.in_offsets_, g.in_index_);
  return g;
}

std::span<const std::size_t> Graph::out_edges(NodeId v) const {
  return std::span<const std::size_t>(out_index_).subspan(out_offsets_[v],
                                                          out_offsets_[v + 1] - out_offsets_[v]);
}

std::span<const std::size_t> Graph::in_edges(NodeId v) const {
  return std::span<const std::size_t>(in_index_).subspan(in_offsets_[v],
                                                         in_offsets_[v + 1] - in_offsets_[v]);
}

bool Graph::has_edge(NodeId src, NodeId dst) const {
  if (src >= n_) return false;
  return std::ranges::any_of(out_edges(src), [&](std::size_t e) { return edges_[e].dst == dst; });
}

bool Graph::has_self_loops() const noexcept {
  return std::ranges::any_of(edges_, [](const Edge& e) { return e.src == e.dst; });
}

DegreeVector degrees(const Graph& g) {
  const auto n = g.num_nodes();
  DegreeVector d{std::vector<std::size_t>(n, 0), std::vector<std::size_t>(n, 0),
                 std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (const auto& e : g.edges()) {
    ++d.out[e.src];
    ++d.in[e.dst];
    d.out_weighted[e.src] += e.weight;
    d.in_weighted[e.dst] += e.weight;
  }
  return d;
}

Graph load_edge_list(std::istream& in, EdgeListFormat format, bool undirected) {
  switch (format) {
    case EdgeListFormat::tsv:
      return load_tsv(in, undirected);
    case EdgeListFormat::json:
      return load_json(in);
  }
  throw Error("unknown edge list format");
}

Graph reverse(const Graph& g) {
  std::vector<Edge> flipped;
  flipped.reserve(g.num_edges());
  for (const auto& e : g.edges()) flipped.push_back({e.dst, e.src, e.weight});
  return Graph::from_arcs(g.num_nodes(), std::move(flipped), g.symmetric());
}

DagCheck is_dag(const Graph& g) {
  const auto n = g.num_nodes();
  std::vector<std::size_t> pending(n);
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
  for (NodeId v = 0; v < n; ++v) {
    pending[v] = g.in_degree(v);
    if (pending[v] == 0) ready.push(v);
  }
  std::vector<NodeId> order;
  order.reserve(n);
  while (!ready.empty()) {
    const NodeId v = ready.top();
    ready.pop();
    order.push_back(v);
    for (auto e : g.out_edges(v)) {
      const NodeId w = g.edge(e).dst;
      if (--pending[w] == 0) ready.push(w);
    }
  }
  if (order.size() != n) return {false, std::nullopt};
  return {true, std::move(order)};
}

Graph add_leaf_self_loops(const Graph& g) {
  if (!is_dag(g).acyclic) throw Error("add_leaf_self_loops requires a DAG");
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  for (NodeId v = 0; v < g.num_nodes(); ++v)
    if (g.out_degree(v) == 0) edges.push_back({v, v, 1.0});
  return Graph::from_arcs(g.num_nodes(), std::move(edges), false);
}

std::size_t longest_path_length(const Graph& g) {
  const auto check = is_dag(g);
  if (!check.acyclic) throw Error("longest_path_length requires a DAG");
  std::vector<std::size_t> depth(g.num_nodes(), 0);
  std::size_t longest = 0;
  for (NodeId v : *check.order) {
    for (auto e : g.out_edges(v)) {
      const NodeId w = g.edge(e).dst;
      depth[w] = std::max(depth[w], depth[v] + 1);
      longest = std::max(longest, depth[w]);
    }
  }
  return longest;
}

Graph relabel(const Graph& g, std::span<const NodeId> perm) {
  if (perm.size() != g.num_nodes()) throw DimensionError("permutation length must equal node count");
  std::vector<bool> hit(perm.size(), false);
  for (auto p : perm) {
    if (p >= perm.size() || hit[p]) throw Error("relabel: not a permutation");
    hit[p] = true;
  }
  std::vector<Edge> edges;
  edges.reserve(g.num_edges());
  for (const auto& e : g.edges()) edges.push_back({perm[e.src], perm[e.dst], e.weight});
  return Graph::from_arcs(g.num_nodes(), std::move(edges), g.symmetric());
}

}  // namespace mrs
