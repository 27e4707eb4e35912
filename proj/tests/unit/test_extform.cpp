#include <doctest.h>

#include <algorithm>

#include "corxc/corpus.hpp"
#include "corxc/error.hpp"
#include "corxc/extform.hpp"
#include "corxc/graph.hpp"
#include "oracles.hpp"

using namespace corxc;

namespace {

// Locally consistent bag assignments counted straight from the constraint
// graph labels: an edge node whose endpoints are both in the bag must carry
// their product.
std::size_t expected_lambda_count(const Graph& g, const TreeDecomposition& td) {
  const Graph cg = constraint_graph(g);
  std::size_t total = 0;
  for (const auto& bag : td.bags) {
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << bag.size()); ++s) {
      auto value = [&](const std::string& label) -> int {
        for (std::size_t i = 0; i < bag.size(); ++i) {
          if (cg.label(bag[i]) == label) return static_cast<int>((s >> i) & 1U);
        }
        return -1;
      };
      bool ok = true;
      for (std::size_t i = 0; i < bag.size() && ok; ++i) {
        const auto& label = cg.label(bag[i]);
        const auto tilde = label.find('~');
        if (tilde == std::string::npos) continue;
        const int a = value(label.substr(0, tilde));
        const int b = value(label.substr(tilde + 1));
        if (a >= 0 && b >= 0 && static_cast<int>((s >> i) & 1U) != (a & b)) ok = false;
      }
      if (ok) ++total;
    }
  }
  return total;
}

ExtendedFormulation build(const Graph& g) { return build_ef(g, constraint_decomposition(g)); }

}  // namespace

TEST_CASE("K2 formulation") {
  const auto ef = build(make_complete(2));
  CHECK(ef.accounting.lambda_count == 4);
  CHECK(ef.accounting.inequality_count == 4);
  CHECK(ef.accounting.equality_count == 1);
  CHECK(ef.accounting.width == 2);
  CHECK(ef.accounting.budget(ef.graph) == "24");
  CHECK(ef.accounting.within_budget(ef.graph));
  CHECK(verify_ef(ef.graph, ef, 20, 1).ok());
}

TEST_CASE("frozen sizes of named graphs") {
  struct Row {
    Graph g;
    std::size_t lambdas;
    int width;
  };
  const std::vector<Row> rows{
      {make_complete(3), 20, 2},
      {make_cycle(6), 56, 2},
      {make_grid(3), 112, 3},
      {make_complete_bipartite(3, 3), 84, 3},
  };
  for (const auto& r : rows) {
    const auto td = constraint_decomposition(r.g);
    const auto ef = build_ef(r.g, td);
    CHECK(ef.accounting.lambda_count == expected_lambda_count(r.g, td));
    CHECK(ef.accounting.lambda_count == r.lambdas);
    CHECK(ef.accounting.width == r.width);
    CHECK(ef.accounting.inequality_count == ef.accounting.lambda_count);
    CHECK(ef.accounting.within_budget(r.g));
    CHECK(ef.lp.variables.size() == ef.lambdas.size());
  }
}

TEST_CASE("build rejects decompositions of the wrong graph") {
  const Graph k3 = make_complete(3);
  const auto td_of_g = heuristic_decomposition(k3, EliminationHeuristic::min_fill);
  CHECK_THROWS_AS(build_ef(k3, td_of_g), PreconditionError);
}

TEST_CASE("property: LP = DP = brute force on random graphs") {
  PortableRandom rng(53);
  for (int trial = 0; trial < 40; ++trial) {
    const auto n = 1 + static_cast<std::size_t>(rng.uniform(0, 6));
    const Graph g = testing::random_graph(n, 1, 2, rng);
    const auto td = constraint_decomposition(g);
    CHECK(validate_decomposition(constraint_graph(g), td).ok());
    const auto ef = build_ef(g, td);
    CHECK(ef.accounting.lambda_count == expected_lambda_count(g, td));
    CHECK(ef.accounting.within_budget(g));
    const auto report = verify_ef(g, ef, 5, static_cast<std::uint64_t>(trial));
    CHECK(report.ok());
    CHECK(report.lift_checked);
    for (int k = 0; k < 5; ++k) {
      const Weights w = random_weights(g, rng);
      const auto dp = map_dp(g, td, w);
      CHECK(dp.value == testing::oracle_map_value(g, w));
    }
  }
}

TEST_CASE("map_dp breaks ties like brute force") {
  const Graph p = make_path(4);
  const auto td = constraint_decomposition(p);
  Weights zero;
  for (const auto& id : p.variables()) zero[id] = 0;
  CHECK(map_dp(p, td, zero).members.empty());
  PortableRandom rng(59);
  for (int trial = 0; trial < 100; ++trial) {
    const Weights w = random_weights(p, rng, -1, 1);
    const auto dp = map_dp(p, td, w);
    const auto bf = map_brute_force(p, w);
    CHECK(dp.value == bf.value);
    CHECK(dp.members == bf.members);
  }
}

TEST_CASE("lifts project back to their vertex") {
  const Graph g = make_cycle(5);
  const auto ef = build(g);
  const auto vs = cor_vertices(g);
  const auto map = ef.projection_map();
  for (std::uint64_t s = 0; s < 32; ++s) {
    std::vector<std::uint8_t> membership(5);
    for (std::size_t i = 0; i < 5; ++i) membership[i] = static_cast<std::uint8_t>((s >> i) & 1U);
    const auto lambda = lift_vertex(ef, membership);
    CHECK(is_feasible(ef.lp, lambda));
    const auto x = project(ef, lambda);
    for (std::size_t k = 0; k < x.values.size(); ++k) CHECK(x.values[k] == vs[s].coordinates[k]);
  }
  CHECK(map.outputs == g.variables());
}

TEST_CASE("removing one consistency block breaks exactness") {
  // Negative control: the check must notice a formulation that is too loose.
  const Graph g = make_complete(4);
  const auto ef = build(g);
  REQUIRE(verify_ef(g, ef, 20, 7).ok());
  std::size_t caught = 0;
  for (const auto& [s, t] : ef.td.tree_edges) {
    ExtendedFormulation broken = ef;
    const std::string prefix = "m" + std::to_string(s) + "_" + std::to_string(t) + "_";
    auto& rows = broken.lp.constraints;
    rows.erase(std::remove_if(rows.begin(), rows.end(), [&](const EqualityConstraint& c) { return c.name.starts_with(prefix); }),
               rows.end());
    REQUIRE(rows.size() < ef.lp.constraints.size());
    if (!verify_ef(g, broken, 20, 7).ok()) ++caught;
  }
  CHECK(caught > 0);
}

TEST_CASE("JSON views") {
  const auto ef = build(make_complete(2));
  const auto a = accounting_to_json(ef.graph, ef.accounting);
  CHECK(a["lambda"] == 4);
  CHECK(a["within_budget"] == true);
  const auto j = ef_to_json(ef);
  CHECK(j.contains("projection"));
  const auto r = verify_report_to_json(verify_ef(ef.graph, ef, 3, 2));
  CHECK(r["trials"] == 3);
}
