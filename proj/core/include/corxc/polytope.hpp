#pragma once

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "corxc/graph.hpp"
#include "corxc/rational.hpp"

namespace corxc {

/// Coordinate labels shared by a family of points.
using VariableIndex = std::shared_ptr<const std::vector<VariableId>>;

VariableIndex make_index(std::vector<VariableId> ids);
VariableIndex variable_index(const Graph& g);

/// A point of R^I for an index set I (for COR(G), I = V ∪ E).
struct CorPoint {
  VariableIndex index;
  std::vector<Rational> values;

  const Rational& at(const VariableId& id) const;
};

/// The vertex (χ(X), χ(E(X))) of COR(G), stored as 0/1 coordinates in the
/// order of Graph::variables().
struct CorVertex {
  std::vector<std::uint8_t> coordinates;

  std::uint8_t vertex_value(std::size_t v) const { return coordinates[v]; }
  /// Labels of X.
  std::vector<std::string> members(const Graph& g) const;
  bool operator==(const CorVertex&) const = default;
  auto operator<=>(const CorVertex&) const = default;
};

CorVertex cor_vertex(const Graph& g, const std::vector<std::uint8_t>& membership);
CorPoint to_point(const Graph& g, const CorVertex& v, const VariableIndex& index);
std::vector<CorPoint> to_points(const Graph& g, const std::vector<CorVertex>& vertices);

/// Cap on |V| for full vertex enumeration.
inline constexpr std::size_t kEnumerationLimit = 20;

/// All 2^n vertices; vertex number s is X = {v : bit v of s is set}.
std::vector<CorVertex> cor_vertices(const Graph& g);

using Weights = std::map<VariableId, Rational>;

struct MapSolution {
  Rational value;
  std::vector<std::string> members;  ///< optimal X, sorted labels
};

/// Checks that every weighted variable belongs to g; throws PreconditionError.
void check_weights(const Graph& g, const Weights& w);

/// Exhaustive MAP; ties go to the smallest subset bitmask.
MapSolution map_brute_force(const Graph& g, const Weights& w);

/// Dimension of the affine hull, by exact elimination.
std::size_t dimension(const std::vector<CorPoint>& points);

// --- faces -------------------------------------------------------------------------

enum class FaceTag { nonneg_edge, edge_eq, exclusive_or, one_of_three };

std::string to_string(FaceTag tag);
FaceTag parse_face_tag(std::string_view text);

/// Σ coeffs[i]·x_{vars[i]} = rhs, the tight form of a catalogued valid
/// inequality of COR(G).
struct FaceEquation {
  FaceTag tag = FaceTag::nonneg_edge;
  std::vector<VariableId> vars;
  std::vector<Rational> coeffs;
  Rational rhs;
};

struct FaceSystem {
  std::vector<FaceEquation> equations;

  void append(const FaceSystem& other);
};

/// x_{ab} = 0
FaceEquation nonneg_edge(const std::string& a, const std::string& b);
/// x_u - x_{uv} = 0, the tight form of x_{uv} <= x_u.
FaceEquation edge_eq(const std::string& u, const std::string& v);
/// x_a + x_b - 2x_{ab} = 1
FaceEquation exclusive_or(const std::string& a, const std::string& b);
/// x_a + x_b + x_c - 2x_{ab} - 2x_{ac} - 2x_{bc} = 1
FaceEquation one_of_three(const std::string& a, const std::string& b, const std::string& c);
/// Both halves of x_u = x_{uv} = x_v.
FaceSystem edge_equalities(const std::string& u, const std::string& v);

/// Throws PreconditionError unless every equation has its tag's exact shape
/// and only mentions variables (and, for ONE-OF-THREE, edges) of g.
void validate_face_system(const Graph& g, const FaceSystem& fs);

/// Σ coeffs·x <= rhs.
struct LinearInequality {
  std::vector<VariableId> vars;
  std::vector<Rational> coeffs;
  Rational rhs;
};

/// The catalogue inequality whose tight form is the equation.
LinearInequality underlying_inequality(const FaceEquation& eq);

/// True iff every vertex of COR(g) satisfies the inequality. Enumerates
/// 2^k subsets of the k vertices the inequality touches.
bool check_valid_inequality(const Graph& g, const LinearInequality& ineq);

bool satisfies(const Graph& g, const CorVertex& v, const FaceEquation& eq);

struct FaceSearch {
  /// Vertices to branch on first, before the rest in label order.
  std::vector<std::size_t> priority;
  /// Vertices pinned to a value before the search starts.
  std::vector<std::pair<std::size_t, std::uint8_t>> fixed;
  /// Stop after this many vertices have been reported.
  std::optional<std::size_t> limit;
};

/// Visits each vertex of COR(g) satisfying every equation of fs exactly
/// once. Backtracks over vertex values (0 before 1), deriving edge values as
/// products and propagating any equation left with one free vertex. The
/// visitor returns false to stop. Returns the number of vertices visited.
std::size_t for_each_face_vertex(const Graph& g, const FaceSystem& fs, const FaceSearch& search,
                                 const std::function<bool(const CorVertex&)>& visit);

/// Vertices of the face, in the order the search finds them.
std::vector<CorVertex> restrict_to_face(const Graph& g, const FaceSystem& fs,
                                        const FaceSearch& search = {});

// --- affine maps ---------------------------------------------------------------------

struct AffineForm {
  std::vector<std::pair<VariableId, Rational>> terms;
  Rational offset;
};

/// π: R^inputs -> R^outputs; outputs[i] = forms[i](x).
struct AffineMap {
  std::vector<VariableId> outputs;
  std::vector<AffineForm> forms;

  static AffineMap identity(const std::vector<VariableId>& ids);
  /// Keeps the listed coordinates (in order) and drops the rest.
  static AffineMap coordinate_projection(const std::vector<VariableId>& keep);
};

/// Reads the coordinates of delete_edge(g, a, b) off a point of R^{V ∪ E}:
/// every variable except x_ab is kept.
AffineMap deletion_map(const Graph& g, std::string_view a, std::string_view b);

/// Reads the coordinates of contract_edge(g, a, b) off a point of the face
/// x_a = x_ab = x_b. The merged vertex takes x_a; an edge from the merged
/// vertex to z takes the smaller (in VariableId order) of x_az and x_bz among
/// those present. Both choices agree on the face.
AffineMap contraction_map(const Graph& g, std::string_view a, std::string_view b);

/// Reads the coordinates of remove_isolated(g, v): drops x_v.
AffineMap isolated_removal_map(const Graph& g, std::string_view v);

/// Image set, deduplicated and sorted. Throws PreconditionError when a form
/// references a coordinate missing from an input point.
std::vector<CorPoint> apply_affine(const AffineMap& map, const std::vector<CorPoint>& points);

/// Set equality of two point families over the same index set (as sets of
/// ids; coordinate order may differ).
bool same_point_set(const std::vector<CorPoint>& a, const std::vector<CorPoint>& b);

// --- JSON ------------------------------------------------------------------------------

nlohmann::json face_system_to_json(const FaceSystem& fs);
FaceSystem face_system_from_json(const nlohmann::json& j);
/// [{"u": "1", "v": "0", "u~v": "0"}, ...]
nlohmann::json points_to_json(const std::vector<CorPoint>& points);
Weights weights_from_json(const nlohmann::json& j);
nlohmann::json weights_to_json(const Weights& w);

}  // namespace corxc
