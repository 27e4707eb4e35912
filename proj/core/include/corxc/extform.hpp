#pragma once

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "corxc/graph.hpp"
#include "corxc/lp.hpp"
#include "corxc/polytope.hpp"
#include "corxc/random.hpp"
#include "corxc/treewidth.hpp"

namespace corxc {

/// One λ-variable: a tree node and a locally consistent 0/1 assignment to its
/// bag (bit i of `assignment` is the value of the i-th bag element).
struct LambdaVariable {
  std::size_t node = 0;
  std::uint64_t assignment = 0;
};

struct EfAccounting {
  std::size_t lambda_count = 0;
  std::size_t equality_count = 0;
  std::size_t inequality_count = 0;  ///< one nonnegativity per λ
  int width = -1;                    ///< width of the decomposition used
  std::size_t node_count = 0;

  /// (n+m)·2^{w+1}, as a decimal string (it can exceed 64 bits in principle).
  std::string budget(const Graph& g) const;
  bool within_budget(const Graph& g) const;
};

/// Largest bag the builder enumerates assignments for.
inline constexpr std::size_t kMaxBagSize = 24;

/// Extended formulation of COR(G) from a tree decomposition of the
/// constraint graph G'. LP variable k is lambdas[k]; rows are one
/// normalisation per node followed by the marginal-consistency rows of each
/// tree edge in td order.
struct ExtendedFormulation {
  Graph graph;
  Graph constraint;
  TreeDecomposition td;
  LinearProgram lp;
  std::vector<LambdaVariable> lambdas;
  /// For position k of graph.variables(): the λ indices summed into x_k.
  std::vector<std::vector<std::size_t>> projection;
  /// For position k of graph.variables(): its canonical (least) node.
  std::vector<std::size_t> canonical_node;
  EfAccounting accounting;

  /// The projection as an affine map whose inputs are the λ names, viewed as
  /// vertex ids.
  AffineMap projection_map() const;
};

/// Throws PreconditionError naming the violated condition when td is not a
/// tree decomposition of constraint_graph(g).
ExtendedFormulation build_ef(const Graph& g, const TreeDecomposition& td);

/// Decomposition of constraint_graph(g) by the better of the two elimination
/// heuristics (min-fill on ties).
TreeDecomposition constraint_decomposition(const Graph& g);

/// λ-point of X (membership indexed by vertex).
std::vector<Rational> lift_vertex(const ExtendedFormulation& ef, const std::vector<std::uint8_t>& membership);

/// π(λ) as a point of R^{V∪E}.
CorPoint project(const ExtendedFormulation& ef, std::span<const Rational> lambda);

/// c∘π as an LP objective over the λ-variables.
std::vector<LinearTerm> pulled_back_objective(const ExtendedFormulation& ef, const Weights& w);

/// Max-sum dynamic programming over the bags. Each variable's weight is
/// counted at its canonical node. Among optimal sets the one with the
/// smallest bitmask (bit v = vertex v) is returned, as in map_brute_force.
MapSolution map_dp(const Graph& g, const TreeDecomposition& td, const Weights& w);

/// Uniform integer weights in [lo, hi] for every variable of g, drawn in
/// graph.variables() order.
Weights random_weights(const Graph& g, PortableRandom& rng, std::int64_t lo = -10, std::int64_t hi = 10);

struct EfTrial {
  Weights weights;
  LpStatus lp_status = LpStatus::optimal;
  Rational lp_value;
  Rational dp_value;
  Rational brute_force_value;
  bool projection_in_unit_cube = true;
  bool match() const {
    return lp_status == LpStatus::optimal && lp_value == brute_force_value && dp_value == brute_force_value && projection_in_unit_cube;
  }
};

struct EfVerifyReport {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t matches = 0;
  std::vector<EfTrial> mismatches;
  bool lift_checked = false;
  std::size_t lift_failures = 0;
  std::size_t lp_pivots = 0;
  bool ok() const { return matches == trials && mismatches.empty() && lift_failures == 0; }
};

/// Largest n for which verify_ef also checks every lift.
inline constexpr std::size_t kLiftCheckLimit = 12;

/// Compares the LP optimum of c∘π over the EF, the DP optimum and the
/// brute-force optimum for `trials` seeded objectives; when n <= 12 also
/// checks that every lift is feasible and projects to its vertex.
EfVerifyReport verify_ef(const Graph& g, const ExtendedFormulation& ef, std::size_t trials, std::uint64_t seed);

nlohmann::json accounting_to_json(const Graph& g, const EfAccounting& a);
nlohmann::json verify_report_to_json(const EfVerifyReport& r);
/// λ catalogue, projection and decomposition; the sidecar of an LP export.
nlohmann::json ef_to_json(const ExtendedFormulation& ef);

}  // namespace corxc
