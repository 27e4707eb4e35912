#include "corxc/gadgets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "corxc/error.hpp"

namespace corxc {

std::string to_string(const Clause& clause) {
  std::string s = "(";
  for (std::size_t i = 0; i < clause.literals.size(); ++i) {
    if (i) s += " v ";
    if (!clause.literals[i].positive) s += "!";
    s += clause.literals[i].variable;
  }
  return s + ")";
}

namespace {

Literal pos(const char* v) { return Literal{v, true}; }
Literal neg(const char* v) { return Literal{v, false}; }

}  // namespace

CrossoverGadget crossover_clause_table() {
  CrossoverGadget g;
  g.variables = {"b", "t", "l", "r", "alpha", "beta", "gamma", "delta", "c"};
  g.roles = {{"b", "b"},         {"t", "t"},       {"l", "l"},         {"r", "r"},         {"alpha", "alpha"},
             {"beta", "beta"},   {"gamma", "gamma"}, {"delta", "delta"}, {"center", "c"}};
  // Periphery squares first, then the interior ones. Read off the drawing;
  // verify_crossover is the check on this table.
  g.clauses = {
      {{pos("t"), pos("l"), pos("gamma")}},
      {{neg("b"), pos("l"), pos("delta")}},
      {{pos("t"), neg("r"), pos("beta")}},
      {{neg("b"), neg("r"), pos("alpha")}},
      {{neg("l"), neg("gamma")}},
      {{neg("l"), neg("delta")}},
      {{pos("r"), neg("beta")}},
      {{pos("r"), neg("alpha")}},
      {{pos("b"), neg("alpha")}},
      {{pos("b"), neg("delta")}},
      {{neg("t"), neg("beta")}},
      {{neg("t"), neg("gamma")}},
      {{pos("beta"), pos("gamma"), neg("c")}},
      {{pos("alpha"), pos("delta"), pos("c")}},
      {{neg("alpha"), neg("delta")}},
      {{neg("beta"), neg("gamma")}},
      {{neg("delta"), neg("gamma")}},
      {{neg("alpha"), neg("beta")}},
  };
  g.source = "hand transcription of the crossover drawing";
  return g;
}

// --- clause replacement ------------------------------------------------------------------

ReplacedGadget replace_clauses(const CrossoverGadget& gadget, const std::string& prefix) {
  const std::set<std::string> known(gadget.variables.begin(), gadget.variables.end());
  std::vector<std::string> vertices;
  std::vector<std::pair<std::string, std::string>> edges;
  FaceSystem fs;
  auto name = [&](const std::string& v) { return prefix + v; };
  for (const auto& v : gadget.variables) vertices.push_back(name(v));

  for (std::size_t k = 0; k < gadget.clauses.size(); ++k) {
    auto lits = gadget.clauses[k].literals;
    const auto where = "clause " + std::to_string(k) + " " + to_string(gadget.clauses[k]);
    std::set<std::string> seen;
    for (const auto& l : lits) {
      if (!known.count(l.variable)) throw InvalidArgument(where + ": unknown variable " + l.variable);
      if (!seen.insert(l.variable).second) throw InvalidArgument(where + ": repeated variable");
    }
    std::stable_partition(lits.begin(), lits.end(), [](const Literal& l) { return !l.positive; });
    const auto suffix = std::to_string(k);

    if (lits.size() == 2) {
      const auto i = name(lits[0].variable), j = name(lits[1].variable);
      if (lits[0].positive) throw InvalidArgument(where + ": no replacement rule for a clause without negations");
      if (!lits[1].positive) {
        edges.emplace_back(i, j);
        fs.equations.push_back(nonneg_edge(i, j));
      } else {
        const auto jbar = name(lits[1].variable + "_bar" + suffix);
        vertices.push_back(jbar);
        edges.emplace_back(i, jbar);
        edges.emplace_back(jbar, j);
        fs.equations.push_back(nonneg_edge(i, jbar));
        fs.equations.push_back(exclusive_or(j, jbar));
      }
    } else if (lits.size() == 3) {
      std::vector<std::string> primes;
      for (const auto& l : lits) {
        primes.push_back(name(l.variable + "_p" + suffix));
        vertices.push_back(primes.back());
      }
      edges.emplace_back(primes[0], primes[1]);
      edges.emplace_back(primes[0], primes[2]);
      edges.emplace_back(primes[1], primes[2]);
      fs.equations.push_back(one_of_three(primes[0], primes[1], primes[2]));
      for (std::size_t q = 0; q < 3; ++q) {
        const auto v = name(lits[q].variable);
        if (!lits[q].positive) {
          edges.emplace_back(v, primes[q]);
          fs.equations.push_back(nonneg_edge(v, primes[q]));
        } else {
          const auto bar = name(lits[q].variable + "_bar" + suffix);
          vertices.push_back(bar);
          edges.emplace_back(v, bar);
          edges.emplace_back(bar, primes[q]);
          fs.equations.push_back(exclusive_or(v, bar));
          fs.equations.push_back(nonneg_edge(bar, primes[q]));
        }
      }
    } else {
      throw InvalidArgument(where + ": clauses must have 2 or 3 literals");
    }
  }

  ReplacedGadget out{Graph(std::move(vertices), edges), std::move(fs), {}};
  for (const auto& [role, label] : gadget.roles) out.roles[role] = name(label);
  return out;
}

// --- crossover verification -------------------------------------------------------------

CrossoverReport verify_crossover(const ReplacedGadget& gadget) {
  const Graph& g = gadget.graph;
  CrossoverReport report;
  report.vertices = g.vertex_count();
  report.edges = g.edge_count();
  report.equations = gadget.faces.equations.size();
  const std::array<std::size_t, 4> roles{g.require_vertex(gadget.roles.at("b")), g.require_vertex(gadget.roles.at("t")),
                                         g.require_vertex(gadget.roles.at("l")), g.require_vertex(gadget.roles.at("r"))};
  const auto noop = [](const CorVertex&) { return true; };
  for (int pattern = 0; pattern < 16; ++pattern) {
    const std::array<int, 4> bits{pattern & 1, pattern >> 1 & 1, pattern >> 2 & 1, pattern >> 3 & 1};
    FaceSearch search;
    search.priority.assign(roles.begin(), roles.end());
    for (std::size_t q = 0; q < 4; ++q) search.fixed.emplace_back(roles[q], static_cast<std::uint8_t>(bits[q]));
    const bool consistent = bits[0] == bits[1] && bits[2] == bits[3];
    search.limit = consistent ? kCompletionCap : 1;
    const auto count = for_each_face_vertex(g, gadget.faces, search, noop);
    if (!consistent) {
      if (count > 0) {
        report.consistent = false;
        report.violations.push_back(bits);
      }
      continue;
    }
    report.completions[static_cast<std::size_t>(bits[0] + 2 * bits[2])] = count;
    if (count == kCompletionCap) report.capped = true;
    if (count == 0) report.all_patterns = false;
  }
  return report;
}

CrossoverReport verify_crossover() { return verify_crossover(replace_clauses(crossover_clause_table())); }

// --- grid with gadgets -------------------------------------------------------------------

namespace {

std::string at(const char* stem, std::size_t i, std::size_t j) {
  return stem + std::to_string(i) + "_" + std::to_string(j);
}

}  // namespace

// Adopted indexing, checked by verify_projection: r<i>_<j> for the grid
// vertex in row i (bottom = 1) and column j (left = 1). The corner r1_1, the
// corner r<N>_<N> and the interior vertices are absent; the bottom row has no
// horizontal midpoints and the left column no vertical ones. The stubs
// rp<i>_<N-1> - r<i>_<N> and cp<N-1>_<j> - r<N>_<j> are deleted for interior
// i and j.
GridWithGadgets build_grid_with_gadgets(std::size_t h) {
  if (h < 2) throw InvalidArgument("grid with gadgets needs height h >= 2");
  const std::size_t N = h + 1;
  GridWithGadgets gw;
  gw.h = h;
  auto interior = [&](std::size_t i, std::size_t j) { return i >= 2 && i <= N - 1 && j >= 2 && j <= N - 1; };
  auto present = [&](std::size_t i, std::size_t j) {
    return !(i == 1 && j == 1) && !(i == N && j == N) && !interior(i, j);
  };

  std::vector<std::string> vertices;
  std::vector<std::pair<std::string, std::string>> edges;
  std::map<std::pair<std::size_t, std::size_t>, ReplacedGadget> gadgets;
  const auto table = crossover_clause_table();

  for (std::size_t i = 1; i <= N; ++i) {
    for (std::size_t j = 1; j <= N; ++j) {
      if (present(i, j)) {
        vertices.push_back(at("r", i, j));
      } else if (interior(i, j)) {
        const auto prefix = at("g", i, j) + ".";
        auto rg = replace_clauses(table, prefix);
        for (const auto& v : rg.graph.labels()) vertices.push_back(v);
        for (const auto& e : rg.graph.edge_labels()) edges.push_back(e);
        gw.faces.append(rg.faces);
        gw.gadget_prefixes.push_back(prefix);
        gadgets.emplace(std::make_pair(i, j), std::move(rg));
      }
    }
  }
  auto role = [&](std::size_t i, std::size_t j, const char* r) { return gadgets.at({i, j}).roles.at(r); };
  auto solid = [&](const std::string& a, const std::string& b) { gw.solid_edges.emplace_back(a, b); };

  // Row midpoints: between column j and j+1 of row i.
  for (std::size_t i = 2; i <= N; ++i) {
    for (std::size_t j = 1; j <= N - 1; ++j) {
      const auto m = at("rp", i, j);
      vertices.push_back(m);
      if (present(i, j)) solid(at("r", i, j), m);
      if (interior(i, j)) solid(role(i, j, "r"), m);
      const bool stub = i <= N - 1 && j == N - 1;
      if (!stub && present(i, j + 1)) solid(m, at("r", i, j + 1));
      if (interior(i, j + 1)) solid(role(i, j + 1, "l"), m);
    }
  }
  // Column midpoints: between row i and i+1 of column j.
  for (std::size_t i = 1; i <= N - 1; ++i) {
    for (std::size_t j = 2; j <= N; ++j) {
      const auto m = at("cp", i, j);
      vertices.push_back(m);
      if (present(i, j)) solid(at("r", i, j), m);
      if (interior(i, j)) solid(role(i, j, "t"), m);
      const bool stub = j <= N - 1 && i == N - 1;
      if (!stub && present(i + 1, j)) solid(m, at("r", i + 1, j));
      if (interior(i + 1, j)) solid(role(i + 1, j, "b"), m);
    }
  }
  for (const auto& [a, b] : gw.solid_edges) {
    edges.emplace_back(a, b);
    gw.faces.append(edge_equalities(a, b));
  }

  for (std::size_t a = 1; a <= h; ++a) gw.bottom.push_back(at("r", 1, a + 1));
  for (std::size_t b = 1; b <= h; ++b) gw.left.push_back(at("r", b + 1, 1));
  // The diagonal at (i, j) joins rp<i>_<j-1> and cp<i-1>_<j>; it carries the
  // product of bottom b_{j-1} and left l_{i-1}.
  for (std::size_t a = 1; a <= h; ++a) {
    for (std::size_t b = 1; b <= h; ++b) {
      const std::size_t i = b + 1, j = a + 1;
      gw.diagonals.emplace_back(at("rp", i, j - 1), at("cp", i - 1, j));
      edges.push_back(gw.diagonals.back());
    }
  }

  gw.graph = Graph(std::move(vertices), edges);
  gw.target = make_complete_bipartite(h, h);
  std::map<VariableId, AffineForm> forms;
  for (std::size_t a = 1; a <= h; ++a) {
    forms[VariableId::vertex("L" + std::to_string(a))] = {{{VariableId::vertex(gw.bottom[a - 1]), Rational(1)}}, 0};
    forms[VariableId::vertex("R" + std::to_string(a))] = {{{VariableId::vertex(gw.left[a - 1]), Rational(1)}}, 0};
    for (std::size_t b = 1; b <= h; ++b) {
      const auto& [u, v] = gw.diagonals[(a - 1) * h + (b - 1)];
      forms[VariableId::edge("L" + std::to_string(a), "R" + std::to_string(b))] = {
          {{VariableId::edge(u, v), Rational(1)}}, 0};
    }
  }
  gw.projection.outputs = gw.target.variables();
  for (const auto& id : gw.projection.outputs) gw.projection.forms.push_back(forms.at(id));
  return gw;
}

ProjectionReport verify_projection(const GridWithGadgets& gw) {
  if (gw.h > kGridExhaustiveLimit) {
    throw LimitExceeded("exhaustive limit: verify_projection supports h <= " + std::to_string(kGridExhaustiveLimit));
  }
  const Graph& g = gw.graph;
  const std::size_t h = gw.h;
  ProjectionReport report;
  report.h = h;

  std::vector<std::size_t> boundary;
  for (const auto& v : gw.bottom) boundary.push_back(g.require_vertex(v));
  for (const auto& v : gw.left) boundary.push_back(g.require_vertex(v));
  std::vector<std::size_t> diagonal_pos;
  for (const auto& [u, v] : gw.diagonals) diagonal_pos.push_back(g.vertex_count() + *g.edge_index(u, v));

  FaceSearch search;
  search.priority = boundary;
  const auto index = variable_index(g);
  std::vector<CorPoint> points;
  report.face_vertices = for_each_face_vertex(g, gw.faces, search, [&](const CorVertex& x) {
    std::uint64_t pattern = 0;
    for (std::size_t q = 0; q < boundary.size(); ++q) pattern |= std::uint64_t{x.coordinates[boundary[q]]} << q;
    ++report.pattern_counts[pattern];
    for (std::size_t a = 0; a < h; ++a) {
      for (std::size_t b = 0; b < h; ++b) {
        const auto expected = x.coordinates[boundary[a]] & x.coordinates[boundary[h + b]];
        if (x.coordinates[diagonal_pos[a * h + b]] != expected) report.diagonal_products = false;
      }
    }
    points.push_back(to_point(g, x, index));
    return true;
  });

  const auto projected = apply_affine(gw.projection, points);
  const auto expected = to_points(gw.target, cor_vertices(gw.target));
  report.projected_points = projected.size();
  report.expected_points = expected.size();
  report.set_equal = same_point_set(projected, expected);
  return report;
}

bool planarity_necessary_check(const Graph& g) {
  if (g.vertex_count() < 3) throw PreconditionError("planarity check needs at least 3 vertices");
  return g.edge_count() + 6 <= 3 * g.vertex_count();
}

LowerBoundReport lower_bound_report(std::size_t n, std::size_t h) {
  LowerBoundReport r;
  r.n = n;
  r.h = h;
  mpz_class num, den;
  mpz_ui_pow_ui(num.get_mpz_t(), 3, h);
  mpz_ui_pow_ui(den.get_mpz_t(), 2, h);
  r.cited = Rational(num, den);
  r.cited.canonicalize();
  r.radicand = r.cited * static_cast<unsigned long>(n);
  const auto& p = r.radicand.get_num();
  const auto& q = r.radicand.get_den();
  r.exact_root = mpz_perfect_square_p(p.get_mpz_t()) != 0 && mpz_perfect_square_p(q.get_mpz_t()) != 0;
  if (r.exact_root) {
    mpz_class sp, sq;
    mpz_sqrt(sp.get_mpz_t(), p.get_mpz_t());
    mpz_sqrt(sq.get_mpz_t(), q.get_mpz_t());
    r.root = Rational(sp, sq);
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", std::sqrt(r.radicand.get_d()));
  r.root_decimal = buf;
  return r;
}

// --- JSON ------------------------------------------------------------------------------

nlohmann::json to_json(const CrossoverReport& r) {
  nlohmann::json violations = nlohmann::json::array();
  for (const auto& v : r.violations) violations.push_back({{"b", v[0]}, {"t", v[1]}, {"l", v[2]}, {"r", v[3]}});
  nlohmann::json completions = nlohmann::json::object();
  for (std::size_t k = 0; k < 4; ++k) {
    completions["b=" + std::to_string(k & 1) + ",l=" + std::to_string(k >> 1)] = r.completions[k];
  }
  return {{"consistent", r.consistent},
          {"all_patterns", r.all_patterns},
          {"completions", completions},
          {"capped", r.capped},
          {"violations", violations},
          {"vertices", r.vertices},
          {"edges", r.edges},
          {"equations", r.equations},
          {"ok", r.ok()}};
}

nlohmann::json to_json(const ProjectionReport& r) {
  nlohmann::json counts = nlohmann::json::object();
  std::set<std::size_t> multiplicities;
  for (const auto& [pattern, c] : r.pattern_counts) {
    std::string bits;
    for (std::size_t q = 0; q < 2 * r.h; ++q) bits += (pattern >> q & 1U) ? '1' : '0';
    counts[bits] = c;
    multiplicities.insert(c);
  }
  nlohmann::json out = {{"h", r.h},
                        {"face_vertices", r.face_vertices},
                        {"projected_points", r.projected_points},
                        {"expected_points", r.expected_points},
                        {"set_equal", r.set_equal},
                        {"diagonal_products", r.diagonal_products},
                        {"pattern_counts", counts},
                        {"ok", r.ok()}};
  out["multiplicity"] = multiplicities.size() == 1 ? nlohmann::json(*multiplicities.begin()) : nlohmann::json(nullptr);
  return out;
}

nlohmann::json to_json(const LowerBoundReport& r) {
  return {{"n", r.n},
          {"h", r.h},
          {"dimension_bound", r.n},
          {"cited_bound", {{"value", to_string(r.cited)}, {"formula", "(3/2)^h"}, {"status", "cited, not computed"}}},
          {"geometric_mean",
           {{"radicand", to_string(r.radicand)},
            {"exact", r.exact_root},
            {"value", r.exact_root ? to_string(r.root) : r.root_decimal}}}};
}

nlohmann::json grid_descriptor_to_json(const GridWithGadgets& gw) {
  nlohmann::json diagonals = nlohmann::json::array();
  for (const auto& [u, v] : gw.diagonals) diagonals.push_back(VariableId::edge(u, v).str());
  nlohmann::json projection = nlohmann::json::object();
  for (std::size_t k = 0; k < gw.projection.outputs.size(); ++k) {
    projection[gw.projection.outputs[k].str()] = gw.projection.forms[k].terms.front().first.str();
  }
  return {{"h", gw.h},
          {"bottom", gw.bottom},
          {"left", gw.left},
          {"diagonals", diagonals},
          {"gadgets", gw.gadget_prefixes},
          {"projection", projection}};
}

}  // namespace corxc
