#pragma once

#include <nlohmann/json.hpp>

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "corxc/graph.hpp"

namespace corxc {

/// Tree decomposition of a specific graph. Nodes are 0..bags.size()-1; each
/// bag holds sorted vertex indices of that graph. The node order is the
/// canonical order used wherever "least node" matters.
struct TreeDecomposition {
  std::vector<std::vector<std::size_t>> bags;
  std::vector<std::pair<std::size_t, std::size_t>> tree_edges;

  std::size_t node_count() const { return bags.size(); }
  /// max |bag| - 1, or -1 when there are no bags.
  int width() const;
};

struct ValidityReport {
  bool tree = true;              ///< tree_edges form a tree on the nodes
  bool vertex_coverage = true;   ///< every vertex lies in a bag
  bool edge_coverage = true;     ///< every edge lies inside a bag
  bool connectivity = true;      ///< bags containing a vertex form a subtree
  bool bag_contents = true;      ///< bag entries are in range and not repeated
  std::vector<std::string> violations;

  bool ok() const { return tree && vertex_coverage && edge_coverage && connectivity && bag_contents; }
};

ValidityReport validate_decomposition(const Graph& g, const TreeDecomposition& td);

enum class EliminationHeuristic { min_degree, min_fill };

/// Greedy elimination ordering; ties go to the smallest vertex index, i.e.
/// label order. Throws InvalidArgument for the empty graph.
std::vector<std::size_t> elimination_ordering(const Graph& g, EliminationHeuristic heuristic);

/// Clique-bag decomposition of an elimination ordering, with every bag that
/// is contained in a neighbouring bag merged away. Components are chained
/// together so the result is always a single tree.
TreeDecomposition decomposition_from_ordering(const Graph& g, const std::vector<std::size_t>& order);

TreeDecomposition heuristic_decomposition(const Graph& g, EliminationHeuristic heuristic);

/// Maximum number of vertices left after the safe reductions for which
/// exact_treewidth will run its exhaustive search.
inline constexpr std::size_t kExactKernelLimit = 16;
/// Hard cap on the input size of exact_treewidth (bitset width).
inline constexpr std::size_t kExactVertexLimit = 64;

struct ExactOptions {
  /// Apply the simplicial and almost-simplicial elimination rules before
  /// searching. Disabling them gives a plain search used as a cross-check.
  bool reductions = true;
  std::size_t kernel_limit = kExactKernelLimit;
};

struct ExactTreewidth {
  int width = 0;
  TreeDecomposition decomposition;
  std::vector<std::size_t> ordering;
  std::size_t kernel_size = 0;
};

/// Exact treewidth by search over elimination orderings with memoisation on
/// eliminated sets, pruned by a degeneracy lower bound. Throws LimitExceeded
/// ("too large for exact mode") beyond the documented caps.
ExactTreewidth exact_treewidth(const Graph& g, const ExactOptions& options = {});

/// {"nodes": [0, 1, ...], "tree_edges": [[a, b], ...], "bags": {"0": [labels], ...}}
nlohmann::json decomposition_to_json(const Graph& g, const TreeDecomposition& td);
/// Node ids may be integers or strings; integers sort numerically, strings
/// lexicographically, and that order becomes the node order.
TreeDecomposition decomposition_from_json(const Graph& g, const nlohmann::json& j);

}  // namespace corxc
