#include "corxc/extform.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "corxc/error.hpp"

namespace corxc {

namespace {

std::uint64_t extract(std::uint64_t bits, const std::vector<std::size_t>& positions) {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < positions.size(); ++i) key |= (bits >> positions[i] & 1U) << i;
  return key;
}

// Bag-level view shared by the LP builder and the DP: constraint graph,
// per-node consistent assignments, and where each variable of G lives.
struct BagModel {
  Graph constraint;
  std::vector<std::size_t> variable_of;             // G' vertex -> position in g.variables()
  std::vector<std::vector<std::uint64_t>> phis;     // per node, increasing
  std::vector<std::size_t> canonical;               // per g variable: least node
  std::vector<std::size_t> canonical_position;      // per g variable: index in that bag
};

BagModel make_model(const Graph& g, const TreeDecomposition& td) {
  BagModel m;
  m.constraint = constraint_graph(g);
  const auto report = validate_decomposition(m.constraint, td);
  if (!report.ok()) {
    std::string msg = "invalid tree decomposition of the constraint graph:";
    for (const auto& v : report.violations) msg += " " + v + ";";
    throw PreconditionError(msg);
  }
  const Graph& cg = m.constraint;
  m.variable_of.resize(cg.vertex_count());
  std::vector<std::pair<std::size_t, std::size_t>> endpoints(cg.vertex_count(), {cg.vertex_count(), 0});
  for (std::size_t i = 0; i < cg.vertex_count(); ++i) {
    const auto id = VariableId::parse(cg.label(i));
    m.variable_of[i] = *g.variable_position(id);
    if (id.is_edge()) endpoints[i] = {*cg.vertex_index(id.first), *cg.vertex_index(id.second)};
  }

  const std::size_t nvars = g.vertex_count() + g.edge_count();
  m.canonical.assign(nvars, td.node_count());
  m.canonical_position.assign(nvars, 0);
  m.phis.resize(td.node_count());
  for (std::size_t t = 0; t < td.node_count(); ++t) {
    const auto& bag = td.bags[t];
    if (bag.size() > kMaxBagSize) {
      throw LimitExceeded("bag of size " + std::to_string(bag.size()) + " exceeds " + std::to_string(kMaxBagSize));
    }
    std::map<std::size_t, std::size_t> where;
    for (std::size_t p = 0; p < bag.size(); ++p) where[bag[p]] = p;
    struct Triple {
      std::size_t e, u, v;
    };
    std::vector<Triple> triples;
    for (std::size_t p = 0; p < bag.size(); ++p) {
      const auto [u, v] = endpoints[bag[p]];
      if (u == cg.vertex_count()) continue;
      const auto iu = where.find(u), iv = where.find(v);
      if (iu != where.end() && iv != where.end()) triples.push_back({p, iu->second, iv->second});
    }
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << bag.size()); ++a) {
      const bool ok = std::all_of(triples.begin(), triples.end(), [&](const Triple& tr) {
        return (a >> tr.e & 1U) == ((a >> tr.u & 1U) & (a >> tr.v & 1U));
      });
      if (ok) m.phis[t].push_back(a);
    }
    for (std::size_t p = 0; p < bag.size(); ++p) {
      const auto k = m.variable_of[bag[p]];
      if (m.canonical[k] == td.node_count()) {
        m.canonical[k] = t;
        m.canonical_position[k] = p;
      }
    }
  }
  return m;
}

std::vector<std::size_t> positions_of(const std::vector<std::size_t>& bag, const std::vector<std::size_t>& elems) {
  std::vector<std::size_t> out;
  for (const auto e : elems) out.push_back(static_cast<std::size_t>(std::lower_bound(bag.begin(), bag.end(), e) - bag.begin()));
  return out;
}

std::vector<std::size_t> intersection(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::string bit_string(std::uint64_t bits, std::size_t width) {
  std::string s;
  for (std::size_t i = 0; i < width; ++i) s += (bits >> i & 1U) ? '1' : '0';
  return s;
}

}  // namespace

// --- accounting --------------------------------------------------------------------

std::string EfAccounting::budget(const Graph& g) const {
  mpz_class b = static_cast<unsigned long>(g.vertex_count() + g.edge_count());
  mpz_mul_2exp(b.get_mpz_t(), b.get_mpz_t(), static_cast<mp_bitcnt_t>(width + 1));
  return b.get_str();
}

bool EfAccounting::within_budget(const Graph& g) const {
  return mpz_class(static_cast<unsigned long>(inequality_count)) <= mpz_class(budget(g));
}

// --- construction ------------------------------------------------------------------

ExtendedFormulation build_ef(const Graph& g, const TreeDecomposition& td) {
  BagModel m = make_model(g, td);
  ExtendedFormulation ef;
  ef.graph = g;
  ef.td = td;

  std::vector<std::size_t> first(td.node_count() + 1, 0);
  for (std::size_t t = 0; t < td.node_count(); ++t) {
    first[t] = ef.lambdas.size();
    for (const auto a : m.phis[t]) {
      ef.lambdas.push_back({t, a});
      ef.lp.add_variable("l" + std::to_string(t) + "_" + bit_string(a, td.bags[t].size()));
    }
  }
  first[td.node_count()] = ef.lambdas.size();

  for (std::size_t t = 0; t < td.node_count(); ++t) {
    EqualityConstraint row{"norm" + std::to_string(t), {}, Rational(1)};
    for (std::size_t k = first[t]; k < first[t + 1]; ++k) row.terms.push_back({k, Rational(1)});
    ef.lp.constraints.push_back(std::move(row));
  }

  for (const auto& [s, t] : td.tree_edges) {
    const auto shared = intersection(td.bags[s], td.bags[t]);
    const auto ps = positions_of(td.bags[s], shared);
    const auto pt = positions_of(td.bags[t], shared);
    std::map<std::uint64_t, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> groups;
    for (std::size_t k = first[s]; k < first[s + 1]; ++k) groups[extract(ef.lambdas[k].assignment, ps)].first.push_back(k);
    for (std::size_t k = first[t]; k < first[t + 1]; ++k) groups[extract(ef.lambdas[k].assignment, pt)].second.push_back(k);
    for (const auto& [psi, sides] : groups) {
      EqualityConstraint row{"m" + std::to_string(s) + "_" + std::to_string(t) + "_" + bit_string(psi, shared.size()),
                             {},
                             Rational(0)};
      for (const auto k : sides.first) row.terms.push_back({k, Rational(1)});
      for (const auto k : sides.second) row.terms.push_back({k, Rational(-1)});
      ef.lp.constraints.push_back(std::move(row));
    }
  }

  const std::size_t nvars = g.vertex_count() + g.edge_count();
  ef.projection.resize(nvars);
  ef.canonical_node = m.canonical;
  for (std::size_t k = 0; k < nvars; ++k) {
    const auto t = m.canonical[k];
    const auto p = m.canonical_position[k];
    for (std::size_t j = first[t]; j < first[t + 1]; ++j) {
      if (ef.lambdas[j].assignment >> p & 1U) ef.projection[k].push_back(j);
    }
  }

  ef.accounting.lambda_count = ef.lambdas.size();
  ef.accounting.equality_count = ef.lp.constraints.size();
  ef.accounting.inequality_count = ef.lambdas.size();
  ef.accounting.width = td.width();
  ef.accounting.node_count = td.node_count();
  ef.constraint = std::move(m.constraint);
  return ef;
}

TreeDecomposition constraint_decomposition(const Graph& g) {
  const Graph cg = constraint_graph(g);
  auto fill = heuristic_decomposition(cg, EliminationHeuristic::min_fill);
  auto degree = heuristic_decomposition(cg, EliminationHeuristic::min_degree);
  return degree.width() < fill.width() ? degree : fill;
}

AffineMap ExtendedFormulation::projection_map() const {
  AffineMap map;
  map.outputs = graph.variables();
  for (const auto& lambdas_k : projection) {
    AffineForm form;
    for (const auto j : lambdas_k) form.terms.emplace_back(VariableId::vertex(lp.variables[j]), Rational(1));
    map.forms.push_back(std::move(form));
  }
  return map;
}

std::vector<Rational> lift_vertex(const ExtendedFormulation& ef, const std::vector<std::uint8_t>& membership) {
  const Graph& g = ef.graph;
  const auto vertex = cor_vertex(g, membership);
  std::vector<Rational> lambda(ef.lambdas.size());
  std::vector<std::uint64_t> restricted(ef.td.node_count(), 0);
  for (std::size_t t = 0; t < ef.td.node_count(); ++t) {
    const auto& bag = ef.td.bags[t];
    for (std::size_t p = 0; p < bag.size(); ++p) {
      const auto id = VariableId::parse(ef.constraint.label(bag[p]));
      restricted[t] |= std::uint64_t{vertex.coordinates[*g.variable_position(id)]} << p;
    }
  }
  for (std::size_t k = 0; k < ef.lambdas.size(); ++k) {
    if (ef.lambdas[k].assignment == restricted[ef.lambdas[k].node]) lambda[k] = 1;
  }
  return lambda;
}

CorPoint project(const ExtendedFormulation& ef, std::span<const Rational> lambda) {
  if (lambda.size() != ef.lambdas.size()) throw PreconditionError("λ-point has the wrong length");
  CorPoint p{variable_index(ef.graph), std::vector<Rational>(ef.projection.size())};
  for (std::size_t k = 0; k < ef.projection.size(); ++k) {
    for (const auto j : ef.projection[k]) p.values[k] += lambda[j];
  }
  return p;
}

std::vector<LinearTerm> pulled_back_objective(const ExtendedFormulation& ef, const Weights& w) {
  check_weights(ef.graph, w);
  std::map<std::size_t, Rational> acc;
  for (const auto& [id, c] : w) {
    if (c == 0) continue;
    for (const auto j : ef.projection[*ef.graph.variable_position(id)]) acc[j] += c;
  }
  std::vector<LinearTerm> out;
  for (const auto& [j, c] : acc) {
    if (c != 0) out.push_back({j, c});
  }
  return out;
}

// --- dynamic programming ---------------------------------------------------------------

namespace {

// Larger value wins; on equal values the smaller vertex bitmask wins.
struct Score {
  Rational value;
  mpz_class mask;

  bool better_than(const Score& o) const { return value > o.value || (value == o.value && mask < o.mask); }
  Score& operator+=(const Score& o) {
    value += o.value;
    mask += o.mask;
    return *this;
  }
};

}  // namespace

MapSolution map_dp(const Graph& g, const TreeDecomposition& td, const Weights& w) {
  check_weights(g, w);
  const BagModel m = make_model(g, td);
  const std::size_t nodes = td.node_count();
  const std::size_t n = g.vertex_count();
  std::vector<Rational> weight(n + g.edge_count());
  for (const auto& [id, c] : w) weight[*g.variable_position(id)] = c;

  // Root the tree at node 0.
  std::vector<std::vector<std::size_t>> adj(nodes);
  for (const auto& [a, b] : td.tree_edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<std::size_t> order{0}, parent(nodes, nodes);
  std::vector<char> seen(nodes, 0);
  seen[0] = 1;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (const auto c : adj[order[i]]) {
      if (!seen[c]) {
        seen[c] = 1;
        parent[c] = order[i];
        order.push_back(c);
      }
    }
  }

  // Weights owned by each node.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> owned(nodes);  // (variable, bag position)
  for (std::size_t k = 0; k < weight.size(); ++k) owned[m.canonical[k]].emplace_back(k, m.canonical_position[k]);

  std::vector<std::vector<std::optional<Score>>> best(nodes);
  std::vector<std::vector<std::size_t>> choice(nodes);  // child: parent φ index -> child φ index
  for (std::size_t t = 0; t < nodes; ++t) {
    best[t].resize(m.phis[t].size());
    for (std::size_t i = 0; i < m.phis[t].size(); ++i) {
      Score s;
      for (const auto& [k, p] : owned[t]) {
        if (!(m.phis[t][i] >> p & 1U)) continue;
        s.value += weight[k];
        if (k < n) s.mask += mpz_class(1) << static_cast<mp_bitcnt_t>(k);
      }
      best[t][i] = std::move(s);
    }
  }

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto c = *it;
    if (c == 0) continue;
    const auto p = parent[c];
    const auto shared = intersection(td.bags[c], td.bags[p]);
    const auto pc = positions_of(td.bags[c], shared);
    const auto pp = positions_of(td.bags[p], shared);
    std::unordered_map<std::uint64_t, std::size_t> message;
    for (std::size_t i = 0; i < m.phis[c].size(); ++i) {
      if (!best[c][i]) continue;
      const auto key = extract(m.phis[c][i], pc);
      const auto found = message.find(key);
      if (found == message.end() || best[c][i]->better_than(*best[c][found->second])) message[key] = i;
    }
    choice[c].assign(m.phis[p].size(), 0);
    for (std::size_t i = 0; i < m.phis[p].size(); ++i) {
      if (!best[p][i]) continue;
      const auto found = message.find(extract(m.phis[p][i], pp));
      if (found == message.end()) {
        best[p][i].reset();
        continue;
      }
      *best[p][i] += *best[c][found->second];
      choice[c][i] = found->second;
    }
  }

  std::optional<std::size_t> root;
  for (std::size_t i = 0; i < m.phis[0].size(); ++i) {
    if (best[0][i] && (!root || best[0][i]->better_than(*best[0][*root]))) root = i;
  }
  if (!root) throw Error("internal: no consistent assignment at the root");

  std::vector<std::size_t> pick(nodes);
  pick[0] = *root;
  for (const auto t : order) {
    if (t != 0) pick[t] = choice[t][pick[parent[t]]];
  }
  std::vector<std::uint8_t> membership(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    membership[v] = static_cast<std::uint8_t>(m.phis[m.canonical[v]][pick[m.canonical[v]]] >> m.canonical_position[v] & 1U);
  }

  MapSolution sol{best[0][*root]->value, {}};
  const auto vertex = cor_vertex(g, membership);
  Rational check;
  for (std::size_t k = 0; k < weight.size(); ++k) {
    if (vertex.coordinates[k]) check += weight[k];
  }
  if (check != sol.value) throw Error("internal: DP backtrack disagrees with the DP value");
  sol.members = vertex.members(g);
  return sol;
}

// --- verification ---------------------------------------------------------------------

Weights random_weights(const Graph& g, PortableRandom& rng, std::int64_t lo, std::int64_t hi) {
  Weights w;
  for (const auto& id : g.variables()) w[id] = Rational(static_cast<long>(rng.uniform(lo, hi)));
  return w;
}

EfVerifyReport verify_ef(const Graph& g, const ExtendedFormulation& ef, std::size_t trials, std::uint64_t seed) {
  if (!(ef.graph == g)) throw PreconditionError("extended formulation was built for a different graph");
  EfVerifyReport report;
  report.trials = trials;
  report.seed = seed;

  const SimplexSolver solver(ef.lp);
  report.lp_pivots = solver.phase_one_pivots();
  PortableRandom rng(seed);
  for (std::size_t i = 0; i < trials; ++i) {
    EfTrial trial;
    trial.weights = random_weights(g, rng);
    const auto objective = pulled_back_objective(ef, trial.weights);
    const auto out = solver.maximize(objective);
    report.lp_pivots += out.pivots;
    trial.lp_status = out.status;
    if (out.status == LpStatus::optimal) {
      trial.lp_value = out.value;
      const auto x = project(ef, out.point);
      trial.projection_in_unit_cube =
          std::all_of(x.values.begin(), x.values.end(), [](const Rational& v) { return v >= 0 && v <= 1; });
    }
    trial.dp_value = map_dp(g, ef.td, trial.weights).value;
    trial.brute_force_value = map_brute_force(g, trial.weights).value;
    if (trial.match()) {
      ++report.matches;
    } else {
      report.mismatches.push_back(std::move(trial));
    }
  }

  const std::size_t n = g.vertex_count();
  if (n <= kLiftCheckLimit) {
    report.lift_checked = true;
    std::vector<std::uint8_t> membership(n);
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
      for (std::size_t v = 0; v < n; ++v) membership[v] = static_cast<std::uint8_t>(s >> v & 1U);
      const auto lambda = lift_vertex(ef, membership);
      const auto x = project(ef, lambda);
      const auto expected = cor_vertex(g, membership);
      bool same = true;
      for (std::size_t k = 0; k < x.values.size(); ++k) same = same && x.values[k] == expected.coordinates[k];
      if (!same || !is_feasible(ef.lp, lambda)) ++report.lift_failures;
    }
  }
  return report;
}

// --- JSON ----------------------------------------------------------------------------------

nlohmann::json accounting_to_json(const Graph& g, const EfAccounting& a) {
  return {{"lambda", a.lambda_count},
          {"eq", a.equality_count},
          {"ineq", a.inequality_count},
          {"width", a.width},
          {"nodes", a.node_count},
          {"n", g.vertex_count()},
          {"m", g.edge_count()},
          {"budget", a.budget(g)},
          {"within_budget", a.within_budget(g)}};
}

nlohmann::json verify_report_to_json(const EfVerifyReport& r) {
  nlohmann::json mismatches = nlohmann::json::array();
  for (const auto& t : r.mismatches) {
    mismatches.push_back({{"weights", weights_to_json(t.weights)},
                          {"lp_status", to_string(t.lp_status)},
                          {"lp", to_string(t.lp_value)},
                          {"dp", to_string(t.dp_value)},
                          {"brute_force", to_string(t.brute_force_value)},
                          {"projection_in_unit_cube", t.projection_in_unit_cube}});
  }
  return {{"trials", r.trials},
          {"seed", r.seed},
          {"matches", r.matches},
          {"mismatches", mismatches},
          {"lift_checked", r.lift_checked},
          {"lift_failures", r.lift_failures},
          {"ok", r.ok()}};
}

nlohmann::json ef_to_json(const ExtendedFormulation& ef) {
  nlohmann::json vars = nlohmann::json::array();
  for (std::size_t k = 0; k < ef.lambdas.size(); ++k) {
    const auto& lam = ef.lambdas[k];
    const auto& bag = ef.td.bags[lam.node];
    nlohmann::json assignment = nlohmann::json::object();
    for (std::size_t p = 0; p < bag.size(); ++p) assignment[ef.constraint.label(bag[p])] = lam.assignment >> p & 1U;
    vars.push_back({{"name", ef.lp.variables[k]}, {"node", lam.node}, {"assignment", assignment}});
  }
  nlohmann::json projection = nlohmann::json::object();
  const auto ids = ef.graph.variables();
  for (std::size_t k = 0; k < ids.size(); ++k) {
    nlohmann::json names = nlohmann::json::array();
    for (const auto j : ef.projection[k]) names.push_back(ef.lp.variables[j]);
    projection[ids[k].str()] = {{"node", ef.canonical_node[k]}, {"lambdas", names}};
  }
  return {{"variables", vars},
          {"projection", projection},
          {"decomposition", decomposition_to_json(ef.constraint, ef.td)},
          {"accounting", accounting_to_json(ef.graph, ef.accounting)}};
}

}  // namespace corxc
