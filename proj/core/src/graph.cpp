#include "corxc/graph.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "corxc/error.hpp"

namespace corxc {

VariableId VariableId::vertex(std::string label) {
  return VariableId{Kind::vertex, std::move(label), {}};
}

VariableId VariableId::edge(std::string a, std::string b) {
  if (b < a) std::swap(a, b);
  return VariableId{Kind::edge, std::move(a), std::move(b)};
}

VariableId VariableId::parse(std::string_view text) {
  const auto sep = text.find(kEdgeSeparator);
  if (sep == std::string_view::npos) {
    if (text.empty()) throw ParseError("empty variable id");
    return vertex(std::string(text));
  }
  const auto a = text.substr(0, sep);
  const auto b = text.substr(sep + 1);
  if (a.empty() || b.empty() || b.find(kEdgeSeparator) != std::string_view::npos) {
    throw ParseError("malformed edge variable id '" + std::string(text) + "'");
  }
  return edge(std::string(a), std::string(b));
}

std::string VariableId::str() const {
  return is_vertex() ? first : first + kEdgeSeparator + second;
}

void check_label(std::string_view label, bool allow_tilde) {
  if (label.empty()) throw InvalidArgument("empty vertex label");
  for (const char c : label) {
    if (std::isspace(static_cast<unsigned char>(c)) || (!allow_tilde && c == kEdgeSeparator)) {
      throw InvalidArgument("vertex label '" + std::string(label) +
                            "' contains whitespace or '~'");
    }
  }
}

std::uint64_t Graph::key(std::size_t u, std::size_t v) {
  if (v < u) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint64_t>(v);
}

Graph::Graph(std::vector<std::string> vertices,
             const std::vector<std::pair<std::string, std::string>>& edges)
    : Graph(std::move(vertices), edges, false) {}

Graph Graph::with_edge_nodes(std::vector<std::string> vertices,
                             const std::vector<std::pair<std::string, std::string>>& edges) {
  return Graph(std::move(vertices), edges, true);
}

Graph::Graph(std::vector<std::string> vertices,
             const std::vector<std::pair<std::string, std::string>>& edges, bool allow_tilde)
    : labels_(std::move(vertices)) {
  std::sort(labels_.begin(), labels_.end());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    check_label(labels_[i], allow_tilde);
    if (i > 0 && labels_[i] == labels_[i - 1]) {
      throw InvalidArgument("duplicate vertex label '" + labels_[i] + "'");
    }
    index_.emplace(labels_[i], i);
  }
  edges_.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    const auto ia = vertex_index(a);
    const auto ib = vertex_index(b);
    if (!ia || !ib) {
      throw InvalidArgument("edge " + a + "~" + b + " has an endpoint outside the vertex set");
    }
    if (*ia == *ib) throw InvalidArgument("self-loop at '" + a + "'");
    edges_.push_back(Edge{std::min(*ia, *ib), std::max(*ia, *ib)});
  }
  std::sort(edges_.begin(), edges_.end());
  adjacency_.assign(labels_.size(), {});
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (e > 0 && edges_[e] == edges_[e - 1]) {
      throw InvalidArgument("duplicate edge " + labels_[edges_[e].u] + "~" + labels_[edges_[e].v]);
    }
    edge_lookup_.emplace(key(edges_[e].u, edges_[e].v), e);
    adjacency_[edges_[e].u].push_back(edges_[e].v);
    adjacency_[edges_[e].v].push_back(edges_[e].u);
  }
  for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
}

std::optional<std::size_t> Graph::vertex_index(std::string_view label) const {
  const auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Graph::require_vertex(std::string_view label) const {
  const auto v = vertex_index(label);
  if (!v) throw PreconditionError("unknown vertex '" + std::string(label) + "'");
  return *v;
}

std::optional<std::size_t> Graph::edge_index(std::size_t u, std::size_t v) const {
  if (u == v) return std::nullopt;
  const auto it = edge_lookup_.find(key(u, v));
  if (it == edge_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Graph::edge_index(std::string_view a, std::string_view b) const {
  const auto u = vertex_index(a);
  const auto v = vertex_index(b);
  if (!u || !v) return std::nullopt;
  return edge_index(*u, *v);
}

VariableId Graph::vertex_variable(std::size_t v) const { return VariableId::vertex(labels_.at(v)); }

VariableId Graph::edge_variable(std::size_t e) const {
  const Edge& ed = edges_.at(e);
  return VariableId::edge(labels_[ed.u], labels_[ed.v]);
}

std::vector<VariableId> Graph::variables() const {
  std::vector<VariableId> out;
  out.reserve(vertex_count() + edge_count());
  for (std::size_t v = 0; v < vertex_count(); ++v) out.push_back(vertex_variable(v));
  for (std::size_t e = 0; e < edge_count(); ++e) out.push_back(edge_variable(e));
  return out;
}

std::optional<std::size_t> Graph::variable_position(const VariableId& id) const {
  if (id.is_vertex()) return vertex_index(id.first);
  const auto e = edge_index(id.first, id.second);
  if (!e) return std::nullopt;
  return vertex_count() + *e;
}

std::vector<std::pair<std::string, std::string>> Graph::edge_labels() const {
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(edges_.size());
  for (const Edge& e : edges_) out.emplace_back(labels_[e.u], labels_[e.v]);
  return out;
}

// --- families ----------------------------------------------------------------

Graph make_grid(std::size_t h) {
  if (h == 0) throw InvalidArgument("grid height must be positive");
  auto name = [](std::size_t a, std::size_t b) {
    return std::to_string(a) + "," + std::to_string(b);
  };
  std::vector<std::string> vs;
  std::vector<std::pair<std::string, std::string>> es;
  for (std::size_t a = 1; a <= h; ++a) {
    for (std::size_t b = 1; b <= h; ++b) {
      vs.push_back(name(a, b));
      if (a < h) es.emplace_back(name(a, b), name(a + 1, b));
      if (b < h) es.emplace_back(name(a, b), name(a, b + 1));
    }
  }
  return Graph(std::move(vs), es);
}

Graph make_complete(std::size_t n) {
  if (n == 0) throw InvalidArgument("complete graph needs at least one vertex");
  std::vector<std::string> vs;
  std::vector<std::pair<std::string, std::string>> es;
  for (std::size_t i = 1; i <= n; ++i) vs.push_back("v" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) es.emplace_back(vs[i], vs[j]);
  return Graph(std::move(vs), es);
}

Graph make_complete_bipartite(std::size_t a, std::size_t b) {
  if (a == 0 || b == 0) throw InvalidArgument("complete bipartite sides must be nonempty");
  std::vector<std::string> vs;
  std::vector<std::pair<std::string, std::string>> es;
  for (std::size_t i = 1; i <= a; ++i) vs.push_back("L" + std::to_string(i));
  for (std::size_t j = 1; j <= b; ++j) vs.push_back("R" + std::to_string(j));
  for (std::size_t i = 1; i <= a; ++i)
    for (std::size_t j = 1; j <= b; ++j)
      es.emplace_back("L" + std::to_string(i), "R" + std::to_string(j));
  return Graph(std::move(vs), es);
}

Graph make_path(std::size_t n) {
  if (n == 0) throw InvalidArgument("path needs at least one vertex");
  std::vector<std::string> vs;
  std::vector<std::pair<std::string, std::string>> es;
  for (std::size_t i = 1; i <= n; ++i) {
    vs.push_back("p" + std::to_string(i));
    if (i > 1) es.emplace_back(vs[i - 2], vs[i - 1]);
  }
  return Graph(std::move(vs), es);
}

Graph make_cycle(std::size_t n) {
  if (n < 3) throw InvalidArgument("cycle needs at least three vertices");
  std::vector<std::string> vs;
  std::vector<std::pair<std::string, std::string>> es;
  for (std::size_t i = 1; i <= n; ++i) vs.push_back("c" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i) es.emplace_back(vs[i], vs[(i + 1) % n]);
  return Graph(std::move(vs), es);
}

Graph make_petersen() {
  std::vector<std::string> vs;
  std::vector<std::pair<std::string, std::string>> es;
  for (int i = 0; i < 5; ++i) {
    vs.push_back("o" + std::to_string(i));
    vs.push_back("i" + std::to_string(i));
  }
  for (int i = 0; i < 5; ++i) {
    es.emplace_back("o" + std::to_string(i), "o" + std::to_string((i + 1) % 5));
    es.emplace_back("i" + std::to_string(i), "i" + std::to_string((i + 2) % 5));
    es.emplace_back("o" + std::to_string(i), "i" + std::to_string(i));
  }
  return Graph(std::move(vs), es);
}

// --- minor operations ----------------------------------------------------------

Graph delete_edge(const Graph& g, std::string_view a, std::string_view b) {
  const auto e = g.edge_index(a, b);
  if (!e) {
    throw PreconditionError("edge " + std::string(a) + "~" + std::string(b) + " not in graph");
  }
  auto es = g.edge_labels();
  es.erase(es.begin() + static_cast<std::ptrdiff_t>(*e));
  return Graph(g.labels(), es);
}

std::string contraction_label(const Graph& g, std::string_view a, std::string_view b) {
  std::string x(a), y(b);
  if (y < x) std::swap(x, y);
  std::string merged = x + "+" + y;
  while (g.vertex_index(merged)) merged += '\'';
  return merged;
}

Graph contract_edge(const Graph& g, std::string_view a, std::string_view b) {
  if (!g.edge_index(a, b)) {
    throw PreconditionError("edge " + std::string(a) + "~" + std::string(b) + " not in graph");
  }
  const std::string merged = contraction_label(g, a, b);
  std::vector<std::string> vs;
  for (const auto& l : g.labels()) {
    if (l != a && l != b) vs.push_back(l);
  }
  vs.push_back(merged);
  std::set<std::pair<std::string, std::string>> es;
  for (auto [x, y] : g.edge_labels()) {
    if (x == a || x == b) x = merged;
    if (y == a || y == b) y = merged;
    if (x == y) continue;
    if (y < x) std::swap(x, y);
    es.emplace(x, y);
  }
  return Graph(std::move(vs), {es.begin(), es.end()});
}

Graph remove_isolated(const Graph& g, std::string_view v) {
  const auto idx = g.vertex_index(v);
  if (!idx) throw PreconditionError("unknown vertex '" + std::string(v) + "'");
  if (g.degree(*idx) != 0) throw PreconditionError("vertex '" + std::string(v) + "' is not isolated");
  std::vector<std::string> vs;
  for (const auto& l : g.labels()) {
    if (l != v) vs.push_back(l);
  }
  return Graph(std::move(vs), g.edge_labels());
}

Graph subdivide_all(const Graph& g) {
  std::vector<std::string> vs = g.labels();
  std::set<std::string> taken(vs.begin(), vs.end());
  std::vector<std::pair<std::string, std::string>> es;
  for (const auto& [a, b] : g.edge_labels()) {
    std::string mid = "s[" + a + "|" + b + "]";
    while (taken.count(mid)) mid += '\'';
    taken.insert(mid);
    vs.push_back(mid);
    es.emplace_back(a, mid);
    es.emplace_back(mid, b);
  }
  return Graph(std::move(vs), es);
}

Graph constraint_graph(const Graph& g) {
  std::vector<std::string> vs = g.labels();
  std::vector<std::pair<std::string, std::string>> es = g.edge_labels();
  for (const auto& [a, b] : g.edge_labels()) {
    // '~' is outside the label alphabet, so this never clashes with a vertex.
    const std::string node = VariableId::edge(a, b).str();
    vs.push_back(node);
    es.emplace_back(a, node);
    es.emplace_back(b, node);
  }
  return Graph::with_edge_nodes(std::move(vs), es);
}

Graph induced_subgraph(const Graph& g, const std::vector<std::size_t>& vertices) {
  std::vector<std::string> vs;
  std::vector<char> keep(g.vertex_count(), 0);
  for (const auto v : vertices) {
    if (!keep.at(v)) vs.push_back(g.label(v));
    keep[v] = 1;
  }
  std::vector<std::pair<std::string, std::string>> es;
  for (const Edge& e : g.edges()) {
    if (keep[e.u] && keep[e.v]) es.emplace_back(g.label(e.u), g.label(e.v));
  }
  return Graph::with_edge_nodes(std::move(vs), es);
}

}  // namespace corxc
