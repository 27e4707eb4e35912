#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace corxc {

/// Separator between the two endpoint labels of an edge variable. Vertex
/// labels may not contain it, so "u~v" never collides with a vertex label.
inline constexpr char kEdgeSeparator = '~';

/// Coordinate of R^{V ∪ E}: either x_v or x_{uv}. Edge endpoints are stored
/// sorted, so the ordering puts all vertex variables before edge variables and
/// edges in lexicographic order of their endpoint pair.
struct VariableId {
  enum class Kind : std::uint8_t { vertex, edge };

  Kind kind = Kind::vertex;
  std::string first;
  std::string second;

  static VariableId vertex(std::string label);
  static VariableId edge(std::string a, std::string b);
  /// Accepts "u" or "u~v" (either endpoint order).
  static VariableId parse(std::string_view text);

  bool is_vertex() const { return kind == Kind::vertex; }
  bool is_edge() const { return kind == Kind::edge; }
  std::string str() const;

  auto operator<=>(const VariableId&) const = default;
  bool operator==(const VariableId&) const = default;
};

/// Edge by vertex index, u < v.
struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  auto operator<=>(const Edge&) const = default;
};

/// Finite simple undirected graph with unique string labels.
///
/// Vertices are kept sorted by label, so vertex index order is label order;
/// edges are kept sorted by (u, v). Instances are immutable after
/// construction and every operation in this header returns a new graph.
class Graph {
 public:
  Graph() = default;

  /// Throws InvalidArgument on empty/duplicate labels, labels containing
  /// whitespace or '~', self-loops, unknown endpoints or duplicate edges.
  Graph(std::vector<std::string> vertices,
        const std::vector<std::pair<std::string, std::string>>& edges);

  /// Same checks, except that labels may contain '~'. Used for graphs whose
  /// vertices are themselves variable ids (constraint graphs).
  static Graph with_edge_nodes(std::vector<std::string> vertices,
                               const std::vector<std::pair<std::string, std::string>>& edges);

  std::size_t vertex_count() const { return labels_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return labels_.empty(); }

  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t v) const { return labels_.at(v); }
  std::optional<std::size_t> vertex_index(std::string_view label) const;
  /// Like vertex_index but throws PreconditionError for unknown labels.
  std::size_t require_vertex(std::string_view label) const;

  const std::vector<Edge>& edges() const { return edges_; }
  std::optional<std::size_t> edge_index(std::size_t u, std::size_t v) const;
  std::optional<std::size_t> edge_index(std::string_view a, std::string_view b) const;

  const std::vector<std::size_t>& neighbours(std::size_t v) const { return adjacency_.at(v); }
  std::size_t degree(std::size_t v) const { return adjacency_.at(v).size(); }
  bool adjacent(std::size_t u, std::size_t v) const { return edge_index(u, v).has_value(); }

  VariableId vertex_variable(std::size_t v) const;
  VariableId edge_variable(std::size_t e) const;
  /// All coordinates of R^{V ∪ E}: vertices in index order, then edges.
  std::vector<VariableId> variables() const;
  /// Position of a variable in variables(), if it belongs to this graph.
  std::optional<std::size_t> variable_position(const VariableId& id) const;

  std::vector<std::pair<std::string, std::string>> edge_labels() const;

  bool operator==(const Graph& other) const {
    return labels_ == other.labels_ && edges_ == other.edges_;
  }

 private:
  Graph(std::vector<std::string> vertices,
        const std::vector<std::pair<std::string, std::string>>& edges, bool allow_tilde);

  static std::uint64_t key(std::size_t u, std::size_t v);

  std::vector<std::string> labels_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::unordered_map<std::uint64_t, std::size_t> edge_lookup_;
};

/// Checks the label alphabet; throws InvalidArgument.
void check_label(std::string_view label, bool allow_tilde = false);

// --- standard families -----------------------------------------------------

/// h x h grid; vertex (a, b) is labelled "a,b" with 1-based coordinates.
Graph make_grid(std::size_t h);
/// K_n on labels v1..vn.
Graph make_complete(std::size_t n);
/// K_{a,b} with sides labelled L1..La and R1..Rb.
Graph make_complete_bipartite(std::size_t a, std::size_t b);
/// Path p1 - p2 - ... - pn.
Graph make_path(std::size_t n);
/// Cycle c1 ... cn, n >= 3.
Graph make_cycle(std::size_t n);
/// Petersen graph: outer o0..o4, inner i0..i4.
Graph make_petersen();

// --- minor operations ------------------------------------------------------

Graph delete_edge(const Graph& g, std::string_view a, std::string_view b);
/// Merges a and b into one vertex labelled contraction_label(a, b).
Graph contract_edge(const Graph& g, std::string_view a, std::string_view b);
Graph remove_isolated(const Graph& g, std::string_view v);
/// Label given to the merged vertex: "a+b" with a < b, primed until fresh.
std::string contraction_label(const Graph& g, std::string_view a, std::string_view b);

/// Replaces every edge uv by u - s[u|v] - v.
Graph subdivide_all(const Graph& g);

/// G plus one node per edge uv, labelled "u~v" and joined to u and v.
Graph constraint_graph(const Graph& g);

Graph induced_subgraph(const Graph& g, const std::vector<std::size_t>& vertices);

}  // namespace corxc
