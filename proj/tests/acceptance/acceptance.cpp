// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "corxc/corpus.hpp"
#include "corxc/extform.hpp"
#include "corxc/gadgets.hpp"
#include "corxc/graph.hpp"
#include "corxc/lp.hpp"
#include "corxc/polytope.hpp"
#include "corxc/treewidth.hpp"
#include "oracles.hpp"

using namespace corxc;

namespace {

// Every comparison below is exact; the only pinned tolerances are these
// wall-clock budgets, in seconds.
constexpr double kBudgetEfExactness = 300.0;
constexpr double kBudgetLift = 120.0;
constexpr double kBudgetSize = 60.0;
constexpr double kBudgetTreewidth = 300.0;
constexpr double kBudgetMinors = 120.0;
constexpr double kBudgetDimension = 120.0;
constexpr double kBudgetCrossover = 10.0;
constexpr double kBudgetGrid = 120.0;
constexpr double kBudgetValidity = 60.0;
constexpr double kBudgetSolver = 60.0;

constexpr std::size_t kObjectivesPerGraph = 20;
constexpr std::size_t kTreewidthSamples = 150;
constexpr std::size_t kRandomLpInstances = 10;

struct Outcome {
  bool pass = true;
  std::ostringstream note;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) note << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

std::string name_of(const Graph& g) {
  std::ostringstream os;
  os << "n=" << g.vertex_count() << " m=" << g.edge_count() << " [";
  for (const auto& [a, b] : g.edge_labels()) os << a << '-' << b << ' ';
  os << ']';
  return os.str();
}

std::vector<Graph> exactness_corpus() {
  std::vector<Graph> out;
  for (std::size_t n = 1; n <= 5; ++n) {
    for (auto& g : graph_classes(n, true)) out.push_back(std::move(g));
  }
  out.push_back(make_cycle(6));
  out.push_back(make_grid(3));
  out.push_back(make_petersen());
  return out;
}

std::vector<Graph> all_small_graphs(std::size_t max_n) {
  std::vector<Graph> out;
  for (std::size_t n = 1; n <= max_n; ++n) {
    for (auto& g : graph_classes(n, false)) out.push_back(std::move(g));
  }
  return out;
}

// 1, 3 and part of 10: LP over the EF = DP = brute force, exactly.
void ef_exactness(Outcome& o, Outcome& size, Outcome& solver) {
  std::size_t graphs = 0, solves = 0;
  for (const Graph& g : exactness_corpus()) {
    const auto td = constraint_decomposition(g);
    const auto ef = build_ef(g, td);
    size.require(ef.accounting.within_budget(g), "budget exceeded on " + name_of(g));
    const SimplexSolver lp(ef.lp);
    o.require(lp.feasible(), "EF infeasible on " + name_of(g));
    PortableRandom rng(1000 + graphs);
    for (std::size_t t = 0; t < kObjectivesPerGraph; ++t) {
      const Weights w = random_weights(g, rng);
      const auto obj = pulled_back_objective(ef, w);
      const auto out = lp.maximize(obj);
      ++solves;
      o.require(out.status == LpStatus::optimal, "LP not optimal on " + name_of(g));
      solver.require(is_feasible(ef.lp, out.point), "returned LP point infeasible on " + name_of(g));
      const auto dp = map_dp(g, td, w);
      const auto bf = map_brute_force(g, w);
      const auto oracle = testing::oracle_map_value(g, w);
      o.require(out.value == bf.value && dp.value == bf.value && bf.value == oracle,
                "optima differ on " + name_of(g) + " (lp " + to_string(out.value) + ", dp " + to_string(dp.value) +
                    ", bf " + to_string(bf.value) + ")");
    }
    ++graphs;
  }
  o.note << graphs << " graphs, " << solves << " objectives";
  solver.note << solves << " EF optima checked; ";
}

// 2: every vertex lifts to a feasible λ that projects back to it.
void lift_completeness(Outcome& o) {
  std::size_t lifts = 0;
  for (const Graph& g : exactness_corpus()) {
    if (g.vertex_count() > 5) continue;
    const auto ef = build_ef(g, constraint_decomposition(g));
    const auto vertices = cor_vertices(g);
    for (std::uint64_t s = 0; s < vertices.size(); ++s) {
      std::vector<std::uint8_t> membership(g.vertex_count());
      for (std::size_t i = 0; i < membership.size(); ++i) membership[i] = static_cast<std::uint8_t>((s >> i) & 1U);
      const auto lambda = lift_vertex(ef, membership);
      o.require(is_feasible(ef.lp, lambda), "lift infeasible on " + name_of(g));
      const auto x = project(ef, lambda);
      bool same = x.values.size() == vertices[s].coordinates.size();
      for (std::size_t k = 0; same && k < x.values.size(); ++k) same = x.values[k] == vertices[s].coordinates[k];
      o.require(same, "lift projects elsewhere on " + name_of(g));
      ++lifts;
    }
  }
  o.note << lifts << " lifts";
}

// 3: K2 is exactly 4; the rest is checked while building in criterion 1.
void size_accounting(Outcome& o) {
  const auto ef = build_ef(make_complete(2), constraint_decomposition(make_complete(2)));
  o.require(ef.accounting.inequality_count == 4, "K2 inequality count " + std::to_string(ef.accounting.inequality_count));
  for (const Graph& g : {make_complete(5), make_complete_bipartite(3, 3), make_grid(4)}) {
    const auto e = build_ef(g, constraint_decomposition(g));
    o.require(e.accounting.within_budget(g), "budget exceeded on " + name_of(g));
  }
  o.note << "K2 count 4";
}

// 4: tw(G') = max(tw(G), 2) whenever G has an edge.
// The lower bound is structural (G is a subgraph of G', and G' has a
// triangle), so a validated witness of that width settles tw(G'). For
// n <= 5 the subset DP oracle also computes tw(G') directly.
void constraint_treewidth(Outcome& o) {
  std::size_t checked = 0;
  auto check = [&](const Graph& g, bool direct) {
    if (g.edge_count() == 0) return;
    const int tw = testing::oracle_treewidth(g);
    const Graph cg = constraint_graph(g);
    const auto exact = exact_treewidth(cg);
    const int expected = tw == 1 ? 2 : tw;
    o.require(validate_decomposition(cg, exact.decomposition).ok(), "invalid witness on " + name_of(g));
    o.require(exact.decomposition.width() == exact.width, "witness width mismatch on " + name_of(g));
    o.require(exact.width == expected, "tw(G') = " + std::to_string(exact.width) + " on " + name_of(g));
    if (direct) o.require(testing::oracle_treewidth(cg) == expected, "oracle disagrees on " + name_of(g));
    ++checked;
  };
  for (std::size_t n = 2; n <= 5; ++n) {
    for (const Graph& g : graph_classes(n, true)) check(g, true);
  }
  for (const Graph& g : graph_classes(6, true)) check(g, false);
  PortableRandom rng(4);
  for (const std::size_t n : {6, 7}) {
    for (std::size_t i = 0; i < kTreewidthSamples; ++i) {
      const auto num = static_cast<std::uint64_t>(rng.uniform(0, 4));
      check(random_connected_graph(n, num, 4, rng), false);
    }
  }
  o.note << checked << " graphs, no counterexample";
}

// 5: deletion, contraction and isolated-vertex removal as exact point-set
// equalities.
void minor_equivalences(Outcome& o) {
  std::size_t cases = 0;
  for (const Graph& g : all_small_graphs(5)) {
    const auto points = to_points(g, cor_vertices(g));
    for (const auto& [a, b] : g.edge_labels()) {
      const Graph d = delete_edge(g, a, b);
      o.require(same_point_set(apply_affine(deletion_map(g, a, b), points), to_points(d, cor_vertices(d))),
                "deletion of " + a + b + " on " + name_of(g));
      const Graph c = contract_edge(g, a, b);
      const auto face = restrict_to_face(g, edge_equalities(a, b));
      o.require(same_point_set(apply_affine(contraction_map(g, a, b), to_points(g, face)), to_points(c, cor_vertices(c))),
                "contraction of " + a + b + " on " + name_of(g));
      cases += 2;
    }
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
      if (g.degree(v) != 0 || g.vertex_count() == 1) continue;
      const Graph r = remove_isolated(g, g.label(v));
      o.require(same_point_set(apply_affine(isolated_removal_map(g, g.label(v)), points), to_points(r, cor_vertices(r))),
                "isolated removal on " + name_of(g));
      ++cases;
    }
  }
  o.note << cases << " identities";
}

// 6: full dimension, cross-checked by rank modulo a prime.
void dimension_check(Outcome& o) {
  std::size_t graphs = 0;
  for (const Graph& g : all_small_graphs(6)) {
    const auto pts = to_points(g, cor_vertices(g));
    const auto full = g.vertex_count() + g.edge_count();
    o.require(dimension(pts) == full, "dimension on " + name_of(g));
    std::vector<std::vector<Rational>> diffs;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      std::vector<Rational> row(full);
      for (std::size_t k = 0; k < full; ++k) row[k] = pts[i].values[k] - pts[0].values[k];
      diffs.push_back(std::move(row));
    }
    o.require(testing::rank_mod_prime(diffs) == full, "rank mod p on " + name_of(g));
    ++graphs;
  }
  o.note << graphs << " graphs";
}

// 7: crossover face, twice, against the regression constant.
void crossover(Outcome& o) {
  const auto first = verify_crossover();
  const auto second = verify_crossover();
  o.require(first.consistent, "inconsistent boundary pattern on the face");
  o.require(first.all_patterns, "a boundary pattern is missing");
  o.require(!first.capped, "completion count capped");
  o.require(first.completions == second.completions, "completion counts differ between runs");
  for (const auto c : first.completions) o.require(c == kCrossoverCompletions, "completion count " + std::to_string(c));
  o.note << "completions";
  for (const auto c : first.completions) o.note << ' ' << c;
}

// 8: projection of the grid-with-gadgets face onto COR(K_{h,h}).
void grid_projection(Outcome& o) {
  for (const std::size_t h : {2, 3}) {
    const auto gw = build_grid_with_gadgets(h);
    const auto r = verify_projection(gw);
    const std::size_t expected = std::size_t{1} << (2 * h);
    o.require(r.expected_points == expected, "expected point count at h=" + std::to_string(h));
    o.require(r.set_equal, "projected set differs at h=" + std::to_string(h));
    o.require(r.diagonal_products, "diagonal coordinate is not a product at h=" + std::to_string(h));
    o.note << "h=" << h << ": " << r.face_vertices << " face vertices -> " << r.projected_points << " points; ";
  }
}

// 9: every emitted equation is the tight form of a valid inequality on its
// support.
void equation_validity(Outcome& o) {
  std::size_t count = 0;
  auto check = [&](const Graph& g, const FaceSystem& fs, const std::string& where) {
    validate_face_system(g, fs);
    for (const auto& eq : fs.equations) {
      o.require(check_valid_inequality(g, underlying_inequality(eq)), to_string(eq.tag) + " in " + where);
      ++count;
    }
  };
  check(replace_clauses(crossover_clause_table()).graph, replace_clauses(crossover_clause_table()).faces, "crossover");
  for (const std::size_t h : {2, 3, 4}) {
    const auto gw = build_grid_with_gadgets(h);
    check(gw.graph, gw.faces, "grid h=" + std::to_string(h));
  }
  for (const Graph& g : all_small_graphs(4)) {
    for (const auto& [a, b] : g.edge_labels()) check(g, edge_equalities(a, b), "contraction face");
  }
  o.note << count << " equations";
}

// 10: cycling instance, and primal = dual on seeded instances.
void solver_soundness(Outcome& o) {
  testing::DenseLp beale;
  beale.a = {{1, 0, 0, Rational(1, 4), -8, -1, 9},
             {0, 1, 0, Rational(1, 2), -12, Rational(-1, 2), 3},
             {0, 0, 1, 0, 0, 1, 0}};
  beale.b = {0, 0, 1};
  beale.c = {0, 0, 0, Rational(3, 4), -20, Rational(1, 2), -6};
  const auto lp = beale.to_program();
  const auto out = solve(lp);
  o.require(out.status == LpStatus::optimal && out.value == Rational(5, 4), "cycling instance");
  o.require(is_feasible(lp, out.point), "cycling instance point");
  o.note << "cycling instance in " << out.pivots << " pivots; ";

  PortableRandom rng(10);
  for (std::size_t i = 0; i < kRandomLpInstances; ++i) {
    const auto d = testing::random_bounded_lp(3, 6, rng);
    const auto p = d.to_program();
    const auto r = solve(p);
    o.require(r.status == LpStatus::optimal, "random instance not optimal");
    o.require(is_feasible(p, r.point), "random instance point infeasible");
    const auto dual = testing::oracle_dual_min(d);
    o.require(dual.has_value() && *dual == r.value, "primal != dual on instance " + std::to_string(i));
  }
  o.note << kRandomLpInstances << " primal = dual";
}

struct Criterion {
  int number;
  const char* title;
  double budget;
  Outcome* outcome;
  double seconds = 0;
};

double timed(const std::function<void()>& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main() {
  Outcome c[11];
  std::vector<Criterion> list{
      {1, "EF exactness", kBudgetEfExactness, &c[1]},
      {2, "lift completeness", kBudgetLift, &c[2]},
      {3, "size accounting", kBudgetSize, &c[3]},
      {4, "constraint-graph treewidth", kBudgetTreewidth, &c[4]},
      {5, "minor-operation equivalences", kBudgetMinors, &c[5]},
      {6, "dimension", kBudgetDimension, &c[6]},
      {7, "crossover gadget", kBudgetCrossover, &c[7]},
      {8, "grid-with-gadgets projection", kBudgetGrid, &c[8]},
      {9, "validity of face equations", kBudgetValidity, &c[9]},
      {10, "LP solver soundness", kBudgetSolver, &c[10]},
  };
  auto guarded = [&](Outcome& o, const std::function<void()>& f) {
    return timed([&] {
      try {
        f();
      } catch (const std::exception& e) {
        o.require(false, std::string("exception: ") + e.what());
      }
    });
  };
  // Criterion 1 also feeds 3 and 10, so it runs first and its time counts
  // only against its own budget.
  list[0].seconds = guarded(c[1], [&] { ef_exactness(c[1], c[3], c[10]); });
  list[1].seconds = guarded(c[2], [&] { lift_completeness(c[2]); });
  list[2].seconds = guarded(c[3], [&] { size_accounting(c[3]); });
  list[3].seconds = guarded(c[4], [&] { constraint_treewidth(c[4]); });
  list[4].seconds = guarded(c[5], [&] { minor_equivalences(c[5]); });
  list[5].seconds = guarded(c[6], [&] { dimension_check(c[6]); });
  list[6].seconds = guarded(c[7], [&] { crossover(c[7]); });
  list[7].seconds = guarded(c[8], [&] { grid_projection(c[8]); });
  list[8].seconds = guarded(c[9], [&] { equation_validity(c[9]); });
  list[9].seconds = guarded(c[10], [&] { solver_soundness(c[10]); });

  int failures = 0;
  for (auto& k : list) {
    k.outcome->require(k.seconds <= k.budget, "over the " + std::to_string(static_cast<int>(k.budget)) + " s budget");
    const bool pass = k.outcome->pass;
    if (!pass) ++failures;
    std::printf("%s  criterion %2d  %-30s  %8.2fs  %s\n", pass ? "PASS" : "FAIL", k.number, k.title, k.seconds,
                k.outcome->note.str().c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(list.size()) - failures, list.size());
  return failures == 0 ? 0 : 1;
}
