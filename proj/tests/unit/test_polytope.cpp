#include <doctest.h>

#include <set>

#include "corxc/corpus.hpp"
#include "corxc/error.hpp"
#include "corxc/graph.hpp"
#include "corxc/polytope.hpp"
#include "oracles.hpp"

using namespace corxc;

namespace {

Weights random_integer_weights(const Graph& g, PortableRandom& rng) {
  Weights w;
  for (const auto& id : g.variables()) w[id] = Rational(rng.uniform(-10, 10));
  return w;
}

}  // namespace

TEST_CASE("K2 vertices") {
  const Graph k2 = make_complete(2);
  const auto vs = cor_vertices(k2);
  REQUIRE(vs.size() == 4);
  // Coordinates (x_v1, x_v2, x_v1v2), vertex s has X = bits of s.
  CHECK(vs[0].coordinates == std::vector<std::uint8_t>{0, 0, 0});
  CHECK(vs[1].coordinates == std::vector<std::uint8_t>{1, 0, 0});
  CHECK(vs[2].coordinates == std::vector<std::uint8_t>{0, 1, 0});
  CHECK(vs[3].coordinates == std::vector<std::uint8_t>{1, 1, 1});
  CHECK(vs[3].members(k2) == std::vector<std::string>{"v1", "v2"});
  CHECK(dimension(to_points(k2, vs)) == 3);
}

TEST_CASE("vertex enumeration limit") {
  CHECK_THROWS_AS(cor_vertices(make_path(21)), LimitExceeded);
  CHECK(cor_vertices(make_path(10)).size() == 1024);
}

TEST_CASE("property: vertices are distinct and edge coordinates are products") {
  PortableRandom rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const Graph g = testing::random_graph(1 + static_cast<std::size_t>(rng.uniform(0, 6)), 1, 2, rng);
    const auto vs = cor_vertices(g);
    CHECK(vs.size() == (std::size_t{1} << g.vertex_count()));
    CHECK(std::set<CorVertex>(vs.begin(), vs.end()).size() == vs.size());
    const auto n = g.vertex_count();
    for (const auto& v : vs) {
      for (std::size_t e = 0; e < g.edge_count(); ++e) {
        const Edge& ed = g.edges()[e];
        CHECK(v.coordinates[n + e] == (v.coordinates[ed.u] & v.coordinates[ed.v]));
      }
    }
  }
}

TEST_CASE("dimension is full on small graphs") {
  // The frozen oracle is rank mod a prime; full rank mod p implies full rank over Q.
  PortableRandom rng(19);
  for (int trial = 0; trial < 40; ++trial) {
    const Graph g = testing::random_graph(1 + static_cast<std::size_t>(rng.uniform(0, 5)), 1, 2, rng);
    const auto pts = to_points(g, cor_vertices(g));
    std::vector<std::vector<Rational>> diffs;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      std::vector<Rational> row;
      for (std::size_t k = 0; k < pts[i].values.size(); ++k) row.push_back(pts[i].values[k] - pts[0].values[k]);
      diffs.push_back(row);
    }
    const auto full = g.vertex_count() + g.edge_count();
    CHECK(testing::rank_mod_prime(diffs) == full);
    CHECK(dimension(pts) == full);
  }
}

TEST_CASE("dimension of degenerate families") {
  const Graph k2 = make_complete(2);
  const auto idx = variable_index(k2);
  const auto v0 = to_point(k2, cor_vertices(k2)[0], idx);
  const auto v3 = to_point(k2, cor_vertices(k2)[3], idx);
  CHECK(dimension({v0}) == 0);
  CHECK(dimension({v0, v3}) == 1);
  CHECK(dimension({v0, v3, v0}) == 1);
}

TEST_CASE("brute-force MAP") {
  const Graph k2 = make_complete(2);
  Weights w{{VariableId::vertex("v1"), 2}, {VariableId::vertex("v2"), 3}, {VariableId::edge("v1", "v2"), -6}};
  const auto s = map_brute_force(k2, w);
  CHECK(s.value == 3);
  CHECK(s.members == std::vector<std::string>{"v2"});

  // Tie between {} and {v1}: the smaller mask wins.
  Weights zero{{VariableId::vertex("v1"), 0}};
  CHECK(map_brute_force(k2, zero).members.empty());

  Weights bad{{VariableId::vertex("zz"), 1}};
  CHECK_THROWS_AS(map_brute_force(k2, bad), PreconditionError);
}

TEST_CASE("property: brute-force MAP agrees with the oracle") {
  PortableRandom rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const Graph g = testing::random_graph(1 + static_cast<std::size_t>(rng.uniform(0, 7)), 1, 2, rng);
    const Weights w = random_integer_weights(g, rng);
    CHECK(map_brute_force(g, w).value == testing::oracle_map_value(g, w));
  }
}

TEST_CASE("affine maps") {
  const Graph k2 = make_complete(2);
  const auto pts = to_points(k2, cor_vertices(k2));
  const auto proj = apply_affine(AffineMap::coordinate_projection({VariableId::vertex("v1")}), pts);
  CHECK(proj.size() == 2);
  const auto id = apply_affine(AffineMap::identity(k2.variables()), pts);
  CHECK(same_point_set(id, pts));
  const auto missing = AffineMap::coordinate_projection({VariableId::vertex("nope")});
  CHECK_THROWS_AS(apply_affine(missing, pts), PreconditionError);
}

TEST_CASE("deletion and isolated-vertex removal are projections") {
  const Graph k3 = make_complete(3);
  const Graph p3 = delete_edge(k3, "v1", "v3");
  CHECK(same_point_set(apply_affine(deletion_map(k3, "v1", "v3"), to_points(k3, cor_vertices(k3))),
                       to_points(p3, cor_vertices(p3))));

  const Graph k2w({"u", "v", "w"}, {{"u", "v"}});
  const Graph k2 = remove_isolated(k2w, "w");
  const auto image = apply_affine(isolated_removal_map(k2w, "w"), to_points(k2w, cor_vertices(k2w)));
  CHECK(image.size() == 4);
  CHECK(same_point_set(image, to_points(k2, cor_vertices(k2))));
  CHECK_THROWS_AS(isolated_removal_map(k2w, "u"), PreconditionError);
}

TEST_CASE("contraction is a face read through the coordinate identification") {
  const Graph c4 = make_cycle(4);
  const auto face = restrict_to_face(c4, edge_equalities("c1", "c2"));
  CHECK(face.size() == 8);
  const Graph tri = contract_edge(c4, "c1", "c2");
  CHECK(same_point_set(apply_affine(contraction_map(c4, "c1", "c2"), to_points(c4, face)),
                       to_points(tri, cor_vertices(tri))));
}

TEST_CASE("JSON helpers") {
  const Graph k2 = make_complete(2);
  Weights w{{VariableId::vertex("v1"), Rational(1, 2)}, {VariableId::edge("v2", "v1"), -3}};
  CHECK(weights_from_json(weights_to_json(w)) == w);
  const auto j = points_to_json(to_points(k2, cor_vertices(k2)));
  REQUIRE(j.size() == 4);
  CHECK(j[3]["v1~v2"] == "1");
}
