#include <doctest.h>

#include <algorithm>
#include <set>

#include "corxc/error.hpp"
#include "corxc/gadgets.hpp"
#include "corxc/graph.hpp"
#include "oracles.hpp"

using namespace corxc;

namespace {

// Satisfying assignments of the gadget projected onto its variables, read
// off the face of the replaced gadget.
std::set<std::uint32_t> face_models(const CrossoverGadget& gadget) {
  const ReplacedGadget r = replace_clauses(gadget);
  std::set<std::uint32_t> out;
  for (const auto& v : restrict_to_face(r.graph, r.faces)) {
    std::uint32_t m = 0;
    for (std::size_t i = 0; i < gadget.variables.size(); ++i) {
      if (v.vertex_value(*r.graph.vertex_index(gadget.variables[i]))) m |= 1U << i;
    }
    out.insert(m);
  }
  return out;
}

CrossoverGadget single(std::vector<Literal> lits) {
  CrossoverGadget g;
  for (const auto& l : lits) g.variables.push_back(l.variable);
  g.clauses.push_back(Clause{std::move(lits)});
  return g;
}

}  // namespace

TEST_CASE("clause table shape") {
  const auto gadget = crossover_clause_table();
  CHECK(gadget.variables.size() == 9);
  CHECK(gadget.clauses.size() == 18);
  for (const char* role : {"b", "t", "l", "r", "alpha", "beta", "gamma", "delta", "center"}) {
    CHECK(gadget.roles.count(role) == 1);
  }
}

TEST_CASE("clause table semantics by direct enumeration") {
  const auto gadget = crossover_clause_table();
  const auto models = testing::oracle_gadget_models(gadget);
  auto pos = [&](const char* role) {
    const auto& label = gadget.roles.at(role);
    return static_cast<std::size_t>(std::find(gadget.variables.begin(), gadget.variables.end(), label) -
                                    gadget.variables.begin());
  };
  std::array<std::size_t, 4> per_pattern{};
  for (const auto m : models) {
    const auto bit = [&](const char* role) { return (m >> pos(role)) & 1U; };
    CHECK(bit("b") == bit("t"));
    CHECK(bit("l") == bit("r"));
    ++per_pattern[bit("b") + 2 * bit("l")];
  }
  for (const auto c : per_pattern) CHECK(c > 0);
}

TEST_CASE("each replacement rule has exactly the clause's models") {
  const std::vector<std::vector<Literal>> shapes{
      {{"x", false}, {"y", false}},
      {{"x", false}, {"y", true}},
      {{"x", true}, {"y", true}, {"z", true}},
      {{"x", false}, {"y", true}, {"z", true}},
      {{"x", false}, {"y", false}, {"z", true}},
      {{"x", false}, {"y", false}, {"z", false}},
  };
  for (const auto& lits : shapes) {
    const auto gadget = single(lits);
    const auto expected = testing::oracle_gadget_models(gadget);
    CHECK(face_models(gadget) == std::set<std::uint32_t>(expected.begin(), expected.end()));
    const auto r = replace_clauses(gadget);
    const auto by_filter = testing::oracle_face(r.graph, r.faces);
    CHECK(by_filter.size() == restrict_to_face(r.graph, r.faces).size());
  }
}

TEST_CASE("unsupported clause shapes") {
  CHECK_THROWS_AS(replace_clauses(single({{"x", true}, {"y", true}})), InvalidArgument);
  CHECK_THROWS_AS(replace_clauses(single({{"x", true}})), InvalidArgument);
  CrossoverGadget repeated;
  repeated.variables = {"x"};
  repeated.clauses.push_back(Clause{{{"x", false}, {"x", false}}});
  CHECK_THROWS_AS(replace_clauses(repeated), InvalidArgument);
}

TEST_CASE("crossover face") {
  const auto report = verify_crossover();
  CHECK(report.ok());
  CHECK(report.violations.empty());
  CHECK_FALSE(report.capped);
  for (const auto c : report.completions) CHECK(c == kCrossoverCompletions);
  CHECK(report.vertices == 44);
  CHECK(report.edges == 65);
  CHECK(report.equations == 53);
  // One model per boundary pattern; the face doubles each through the
  // auxiliary vertices.
  const auto models = testing::oracle_gadget_models(crossover_clause_table());
  CHECK(models.size() == 4);
  CHECK(face_models(crossover_clause_table()) == std::set<std::uint32_t>(models.begin(), models.end()));
}

TEST_CASE("emptied face system is caught") {
  auto gadget = replace_clauses(crossover_clause_table());
  gadget.faces.equations.clear();
  const auto report = verify_crossover(gadget);
  CHECK_FALSE(report.consistent);
  CHECK_FALSE(report.ok());
  CHECK(report.violations.size() == 12);
}

TEST_CASE("every emitted equation is the tight form of a valid inequality") {
  const auto gadget = replace_clauses(crossover_clause_table(), "q.");
  validate_face_system(gadget.graph, gadget.faces);
  for (const auto& eq : gadget.faces.equations) CHECK(check_valid_inequality(gadget.graph, underlying_inequality(eq)));
  const auto grid = build_grid_with_gadgets(2);
  validate_face_system(grid.graph, grid.faces);
  for (const auto& eq : grid.faces.equations) CHECK(check_valid_inequality(grid.graph, underlying_inequality(eq)));
}

TEST_CASE("grid with gadgets, h = 2") {
  const auto gw = build_grid_with_gadgets(2);
  CHECK(gw.graph.vertex_count() == 58);
  CHECK(gw.graph.edge_count() == 81);
  CHECK(gw.faces.equations.size() == 77);
  CHECK(gw.bottom == std::vector<std::string>{"r1_2", "r1_3"});
  CHECK(gw.left == std::vector<std::string>{"r2_1", "r3_1"});
  CHECK(gw.diagonals.size() == 4);
  CHECK(gw.gadget_prefixes.size() == 1);
  CHECK(planarity_necessary_check(gw.graph));
  const auto report = verify_projection(gw);
  CHECK(report.ok());
  CHECK(report.face_vertices == 32);
  CHECK(report.projected_points == 16);
  CHECK(report.expected_points == 16);
  CHECK_THROWS_AS(build_grid_with_gadgets(1), InvalidArgument);
}

TEST_CASE("grid with one edge equality removed is caught") {
  auto gw = build_grid_with_gadgets(2);
  auto& eqs = gw.faces.equations;
  const auto it = std::find_if(eqs.begin(), eqs.end(), [](const FaceEquation& e) { return e.tag == FaceTag::edge_eq; });
  REQUIRE(it != eqs.end());
  eqs.erase(it);
  const auto report = verify_projection(gw);
  CHECK_FALSE(report.ok());
}

TEST_CASE("grid exhaustive limit") {
  CHECK_THROWS_AS(verify_projection(build_grid_with_gadgets(4)), LimitExceeded);
}

TEST_CASE("lower bound report") {
  const auto a = lower_bound_report(16, 4);
  CHECK(a.cited == Rational(81, 16));
  CHECK(a.radicand == 81);
  CHECK(a.exact_root);
  CHECK(a.root == 9);
  const auto b = lower_bound_report(10, 3);
  CHECK(b.radicand == Rational(135, 4));
  CHECK_FALSE(b.exact_root);
  CHECK(b.root_decimal == "5.809475");
}

TEST_CASE("planarity necessary condition") {
  CHECK(planarity_necessary_check(make_complete(4)));
  CHECK_FALSE(planarity_necessary_check(make_complete(5)));
  CHECK_THROWS(planarity_necessary_check(make_complete(2)));
}
