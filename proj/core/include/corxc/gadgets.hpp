#pragma once

#include <nlohmann/json.hpp>

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "corxc/graph.hpp"
#include "corxc/polytope.hpp"
#include "corxc/rational.hpp"

namespace corxc {

struct Literal {
  std::string variable;
  bool positive = true;
};

struct Clause {
  std::vector<Literal> literals;
};

std::string to_string(const Clause& clause);

/// A planar 2/3-SAT gadget whose satisfying assignments force b = t and
/// l = r. `roles` maps the role names b, t, l, r, alpha, beta, gamma, delta
/// and center to variable labels.
struct CrossoverGadget {
  std::vector<std::string> variables;
  std::map<std::string, std::string> roles;
  std::vector<Clause> clauses;
  std::string source;
};

/// The built-in crossover gadget: 9 variables, 18 clauses.
CrossoverGadget crossover_clause_table();

/// A gadget after clause replacement: the graph on the variables plus the
/// auxiliary vertices, and the face equations.
struct ReplacedGadget {
  Graph graph;
  FaceSystem faces;
  std::map<std::string, std::string> roles;  ///< role -> vertex label
};

/// Replaces every clause by its graph fragment with fresh auxiliary vertices.
/// All labels are prefixed with `prefix`. Negated literals are listed first
/// within a clause. Throws InvalidArgument naming the clause for shapes
/// without a rule (both-positive 2-clauses, other arities, repeated
/// variables).
///   (¬i ∨ ¬j)      edge ij, x_ij = 0
///   (¬i ∨ j)       path i - j̄ - j, x_{i j̄} = 0, XOR(j, j̄)
///   3 literals     triangle on i', j', k' with ONE-OF-THREE; a negated
///                  literal L gets edge L L' with x_{L L'} = 0, a positive one
///                  gets the path L - L̄ - L' with XOR(L, L̄) and x_{L̄ L'} = 0
ReplacedGadget replace_clauses(const CrossoverGadget& gadget, const std::string& prefix = "");

/// Cap on face vertices counted per consistent boundary pattern.
inline constexpr std::size_t kCompletionCap = std::size_t{1} << 20;

struct CrossoverReport {
  /// No face vertex has b != t or l != r.
  bool consistent = true;
  /// Each (b, l) pattern has at least one face vertex.
  bool all_patterns = true;
  /// Face vertices per (b, l) pattern, index b + 2 l.
  std::array<std::size_t, 4> completions{};
  bool capped = false;
  /// (b, t, l, r) patterns with b != t or l != r that do occur.
  std::vector<std::array<int, 4>> violations;
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t equations = 0;
  bool ok() const { return consistent && all_patterns; }
};

/// Checks the replaced gadget's face pattern by pattern: for each of the
/// 12 inconsistent (b, t, l, r) patterns it looks for one face vertex, and
/// for the 4 consistent ones it counts all completions (up to the cap).
CrossoverReport verify_crossover(const ReplacedGadget& gadget);
CrossoverReport verify_crossover();

/// Per-pattern face-vertex count of the built-in gadget, measured and kept
/// as a regression constant.
inline constexpr std::size_t kCrossoverCompletions = 2;

// --- grid with gadgets -------------------------------------------------------------

/// Built from the (h+1) x (h+1) grid. Vertex names: r<i>_<j> grid vertices,
/// rp<i>_<j> the midpoint of r<i>_<j> - r<i>_<j+1>, cp<i>_<j> the midpoint of
/// r<i>_<j> - r<i+1>_<j>, g<i>_<j>.* the gadget copy replacing r<i>_<j>.
/// Rows and columns are 1-based; row 1 is the bottom, column 1 the left.
struct GridWithGadgets {
  std::size_t h = 0;
  Graph graph;
  FaceSystem faces;
  std::vector<std::string> bottom;  ///< b_1..b_h = r1_2..r1_{h+1}
  std::vector<std::string> left;    ///< l_1..l_h = r2_1..r{h+1}_1
  /// Diagonal edges; entry (a-1)*h + (b-1) projects to the edge L_a R_b.
  std::vector<std::pair<std::string, std::string>> diagonals;
  std::vector<std::pair<std::string, std::string>> solid_edges;
  std::vector<std::string> gadget_prefixes;
  Graph target;  ///< K_{h,h}
  /// Onto target.variables(): b_a -> L_a, l_b -> R_b, diagonal -> L_a R_b.
  AffineMap projection;
};

/// Throws InvalidArgument for h < 2.
GridWithGadgets build_grid_with_gadgets(std::size_t h);

/// Largest height verify_projection enumerates.
inline constexpr std::size_t kGridExhaustiveLimit = 3;

struct ProjectionReport {
  std::size_t h = 0;
  std::size_t face_vertices = 0;
  std::size_t projected_points = 0;
  std::size_t expected_points = 0;
  bool set_equal = false;
  bool diagonal_products = true;
  /// Face vertices per boundary pattern (bits: bottom 0..h-1, left h..2h-1).
  std::map<std::uint64_t, std::size_t> pattern_counts;
  bool ok() const { return set_equal && diagonal_products; }
};

/// Enumerates the face (boundary vertices branched first), projects it and
/// compares with the vertices of COR(K_{h,h}). Throws LimitExceeded
/// ("exhaustive limit") when h exceeds kGridExhaustiveLimit.
ProjectionReport verify_projection(const GridWithGadgets& gw);

/// |E| <= 3|V| - 6. Necessary for planarity only. Needs |V| >= 3.
bool planarity_necessary_check(const Graph& g);

struct LowerBoundReport {
  std::size_t n = 0;
  std::size_t h = 0;
  Rational cited;      ///< (3/2)^h, quoted from the literature, not computed
  Rational radicand;   ///< n * (3/2)^h
  bool exact_root = false;
  Rational root;       ///< valid when exact_root
  std::string root_decimal;
};

LowerBoundReport lower_bound_report(std::size_t n, std::size_t h);

nlohmann::json to_json(const CrossoverReport& r);
nlohmann::json to_json(const ProjectionReport& r);
nlohmann::json to_json(const LowerBoundReport& r);
/// Boundary, diagonals, gadget prefixes and the projection map.
nlohmann::json grid_descriptor_to_json(const GridWithGadgets& gw);

}  // namespace corxc
