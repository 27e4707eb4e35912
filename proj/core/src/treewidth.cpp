#include "corxc/treewidth.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <unordered_set>

#include "corxc/error.hpp"

namespace corxc {

int TreeDecomposition::width() const {
  int w = -1;
  for (const auto& bag : bags) w = std::max(w, static_cast<int>(bag.size()) - 1);
  return w;
}

// --- validation ----------------------------------------------------------------

ValidityReport validate_decomposition(const Graph& g, const TreeDecomposition& td) {
  ValidityReport report;
  const std::size_t k = td.node_count();
  const std::size_t n = g.vertex_count();

  std::vector<std::vector<std::size_t>> tree_adj(k);
  for (const auto& [a, b] : td.tree_edges) {
    if (a >= k || b >= k || a == b) {
      report.tree = false;
      report.violations.push_back("tree edge (" + std::to_string(a) + "," + std::to_string(b) +
                                  ") is not between two distinct nodes");
      continue;
    }
    tree_adj[a].push_back(b);
    tree_adj[b].push_back(a);
  }
  if (k == 0) {
    report.tree = false;
    report.violations.push_back("decomposition has no nodes");
  } else if (report.tree) {
    std::vector<char> seen(k, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      const auto t = stack.back();
      stack.pop_back();
      for (const auto s : tree_adj[t]) {
        if (!seen[s]) {
          seen[s] = 1;
          ++reached;
          stack.push_back(s);
        }
      }
    }
    if (reached != k || td.tree_edges.size() != k - 1) {
      report.tree = false;
      report.violations.push_back("tree_edges do not form a tree (" + std::to_string(k) +
                                  " nodes, " + std::to_string(td.tree_edges.size()) +
                                  " edges, " + std::to_string(reached) + " reachable)");
    }
  }

  std::vector<std::vector<char>> in_bag(k, std::vector<char>(n, 0));
  for (std::size_t t = 0; t < k; ++t) {
    for (const auto v : td.bags[t]) {
      if (v >= n) {
        report.bag_contents = false;
        report.violations.push_back("bag " + std::to_string(t) + " holds an unknown vertex");
        continue;
      }
      if (in_bag[t][v]) {
        report.bag_contents = false;
        report.violations.push_back("bag " + std::to_string(t) + " repeats vertex " + g.label(v));
      }
      in_bag[t][v] = 1;
    }
  }

  for (std::size_t v = 0; v < n; ++v) {
    std::vector<std::size_t> holders;
    for (std::size_t t = 0; t < k; ++t)
      if (in_bag[t][v]) holders.push_back(t);
    if (holders.empty()) {
      report.vertex_coverage = false;
      report.violations.push_back("vertex-coverage: " + g.label(v) + " is in no bag");
      continue;
    }
    // The holders must induce a connected subgraph of the tree.
    std::vector<char> seen(k, 0);
    std::vector<std::size_t> stack{holders.front()};
    seen[holders.front()] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      const auto t = stack.back();
      stack.pop_back();
      for (const auto s : tree_adj[t]) {
        if (!seen[s] && in_bag[s][v]) {
          seen[s] = 1;
          ++reached;
          stack.push_back(s);
        }
      }
    }
    if (reached != holders.size()) {
      report.connectivity = false;
      report.violations.push_back("connectivity: nodes containing " + g.label(v) +
                                  " do not induce a subtree");
    }
  }

  for (const Edge& e : g.edges()) {
    bool covered = false;
    for (std::size_t t = 0; t < k && !covered; ++t) covered = in_bag[t][e.u] && in_bag[t][e.v];
    if (!covered) {
      report.edge_coverage = false;
      report.violations.push_back("edge-coverage: " + g.label(e.u) + "~" + g.label(e.v) +
                                  " is in no common bag");
    }
  }
  return report;
}

// --- heuristics ------------------------------------------------------------------

namespace {

using AdjSets = std::vector<std::set<std::size_t>>;

AdjSets adjacency_sets(const Graph& g) {
  AdjSets adj(g.vertex_count());
  for (const Edge& e : g.edges()) {
    adj[e.u].insert(e.v);
    adj[e.v].insert(e.u);
  }
  return adj;
}

std::size_t fill_in(const AdjSets& adj, std::size_t v) {
  std::size_t missing = 0;
  for (auto a = adj[v].begin(); a != adj[v].end(); ++a) {
    for (auto b = std::next(a); b != adj[v].end(); ++b) {
      if (!adj[*a].count(*b)) ++missing;
    }
  }
  return missing;
}

void eliminate(AdjSets& adj, std::size_t v) {
  for (const auto a : adj[v]) {
    for (const auto b : adj[v]) {
      if (a != b) adj[a].insert(b);
    }
    adj[a].erase(v);
  }
  adj[v].clear();
}

}  // namespace

std::vector<std::size_t> elimination_ordering(const Graph& g, EliminationHeuristic heuristic) {
  if (g.empty()) throw InvalidArgument("cannot decompose the empty graph");
  AdjSets adj = adjacency_sets(g);
  std::vector<char> done(g.vertex_count(), 0);
  std::vector<std::size_t> order;
  order.reserve(g.vertex_count());
  for (std::size_t step = 0; step < g.vertex_count(); ++step) {
    std::size_t best = g.vertex_count();
    std::pair<std::size_t, std::size_t> best_key{};
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
      if (done[v]) continue;
      const std::pair<std::size_t, std::size_t> key =
          heuristic == EliminationHeuristic::min_degree
              ? std::pair{adj[v].size(), std::size_t{0}}
              : std::pair{fill_in(adj, v), adj[v].size()};
      if (best == g.vertex_count() || key < best_key) {
        best = v;
        best_key = key;
      }
    }
    done[best] = 1;
    order.push_back(best);
    eliminate(adj, best);
  }
  return order;
}

TreeDecomposition decomposition_from_ordering(const Graph& g, const std::vector<std::size_t>& order) {
  const std::size_t n = g.vertex_count();
  if (n == 0) throw InvalidArgument("cannot decompose the empty graph");
  if (order.size() != n) throw InvalidArgument("elimination ordering must list every vertex once");
  std::vector<std::size_t> position(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (order[i] >= n || position[order[i]] != n) {
      throw InvalidArgument("elimination ordering must list every vertex once");
    }
    position[order[i]] = i;
  }

  AdjSets adj = adjacency_sets(g);
  // One node per eliminated vertex, in elimination order.
  std::vector<std::set<std::size_t>> bags(n);
  std::vector<std::size_t> parent(n, n);
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = order[i];
    bags[i] = adj[v];
    bags[i].insert(v);
    if (adj[v].empty()) {
      roots.push_back(i);
    } else {
      std::size_t next = n;
      for (const auto w : adj[v]) next = std::min(next, position[w]);
      parent[i] = next;
    }
    eliminate(adj, v);
  }

  std::vector<std::set<std::size_t>> tree(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (parent[i] != n) {
      tree[i].insert(parent[i]);
      tree[parent[i]].insert(i);
    }
  }
  for (std::size_t r = 1; r < roots.size(); ++r) {
    tree[roots[0]].insert(roots[r]);
    tree[roots[r]].insert(roots[0]);
  }

  // Merge away any bag contained in a neighbour's bag.
  std::vector<char> alive(n, 1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t s = 0; s < n && !changed; ++s) {
      if (!alive[s]) continue;
      for (const auto t : tree[s]) {
        if (std::includes(bags[t].begin(), bags[t].end(), bags[s].begin(), bags[s].end())) {
          for (const auto u : tree[s]) {
            if (u == t) continue;
            tree[u].erase(s);
            tree[u].insert(t);
            tree[t].insert(u);
          }
          tree[t].erase(s);
          tree[s].clear();
          alive[s] = 0;
          changed = true;
          break;
        }
      }
    }
  }

  std::vector<std::size_t> renumber(n, n);
  TreeDecomposition td;
  for (std::size_t i = 0; i < n; ++i) {
    if (!alive[i]) continue;
    renumber[i] = td.bags.size();
    td.bags.emplace_back(bags[i].begin(), bags[i].end());
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!alive[i]) continue;
    for (const auto j : tree[i]) {
      if (i < j) td.tree_edges.emplace_back(renumber[i], renumber[j]);
    }
  }
  std::sort(td.tree_edges.begin(), td.tree_edges.end());
  return td;
}

TreeDecomposition heuristic_decomposition(const Graph& g, EliminationHeuristic heuristic) {
  return decomposition_from_ordering(g, elimination_ordering(g, heuristic));
}

// --- exact -------------------------------------------------------------------------

namespace {

using Mask = std::uint64_t;

inline Mask bit(std::size_t v) { return Mask{1} << v; }

struct ElimState {
  std::vector<Mask> adj;  // adjacency restricted to remaining vertices
  Mask remaining = 0;

  int degree(std::size_t v) const { return std::popcount(adj[v]); }

  bool is_clique(Mask set) const {
    for (Mask m = set; m; m &= m - 1) {
      const auto v = static_cast<std::size_t>(std::countr_zero(m));
      if ((adj[v] & set) != (set & ~bit(v))) return false;
    }
    return true;
  }

  void eliminate(std::size_t v) {
    const Mask nb = adj[v];
    for (Mask m = nb; m; m &= m - 1) {
      const auto w = static_cast<std::size_t>(std::countr_zero(m));
      adj[w] |= nb & ~bit(w);
      adj[w] &= ~bit(v);
    }
    adj[v] = 0;
    remaining &= ~bit(v);
  }
};

int degeneracy(ElimState s) {
  int best = 0;
  while (s.remaining) {
    std::size_t pick = 64;
    int low = 65;
    for (Mask m = s.remaining; m; m &= m - 1) {
      const auto v = static_cast<std::size_t>(std::countr_zero(m));
      if (s.degree(v) < low) {
        low = s.degree(v);
        pick = v;
      }
    }
    best = std::max(best, low);
    // Plain deletion, not elimination.
    for (Mask m = s.adj[pick]; m; m &= m - 1) s.adj[static_cast<std::size_t>(std::countr_zero(m))] &= ~bit(pick);
    s.adj[pick] = 0;
    s.remaining &= ~bit(pick);
  }
  return best;
}

std::pair<int, std::vector<std::size_t>> min_fill_width(ElimState s) {
  int width = 0;
  std::vector<std::size_t> order;
  while (s.remaining) {
    std::size_t pick = 64;
    std::pair<int, int> best{};
    for (Mask m = s.remaining; m; m &= m - 1) {
      const auto v = static_cast<std::size_t>(std::countr_zero(m));
      int fill = 0;
      for (Mask a = s.adj[v]; a; a &= a - 1) {
        const auto w = static_cast<std::size_t>(std::countr_zero(a));
        fill += std::popcount(s.adj[v] & ~s.adj[w] & ~bit(w));
      }
      const std::pair<int, int> key{fill / 2, s.degree(v)};
      if (pick == 64 || key < best) {
        pick = v;
        best = key;
      }
    }
    width = std::max(width, s.degree(pick));
    order.push_back(pick);
    s.eliminate(pick);
  }
  return {width, order};
}

class OrderingSearch {
 public:
  OrderingSearch(int bound, bool simplicial_shortcut)
      : bound_(bound), simplicial_shortcut_(simplicial_shortcut) {}

  bool run(const ElimState& s, std::vector<std::size_t>& order) {
    if (std::popcount(s.remaining) <= bound_ + 1) {
      for (Mask m = s.remaining; m; m &= m - 1) order.push_back(static_cast<std::size_t>(std::countr_zero(m)));
      return true;
    }
    if (failed_.count(s.remaining)) return false;
    std::vector<std::size_t> candidates;
    for (Mask m = s.remaining; m; m &= m - 1) {
      const auto v = static_cast<std::size_t>(std::countr_zero(m));
      if (s.degree(v) > bound_) continue;
      if (simplicial_shortcut_ && s.is_clique(s.adj[v])) {
        candidates.assign(1, v);
        break;
      }
      candidates.push_back(v);
    }
    for (const auto v : candidates) {
      ElimState next = s;
      next.eliminate(v);
      order.push_back(v);
      if (run(next, order)) return true;
      order.pop_back();
    }
    failed_.insert(s.remaining);
    return false;
  }

 private:
  int bound_;
  bool simplicial_shortcut_;
  std::unordered_set<Mask> failed_;
};

}  // namespace

ExactTreewidth exact_treewidth(const Graph& g, const ExactOptions& options) {
  const std::size_t n = g.vertex_count();
  if (n == 0) throw InvalidArgument("cannot decompose the empty graph");
  if (n > kExactVertexLimit) {
    throw LimitExceeded("too large for exact mode: " + std::to_string(n) + " vertices (limit " +
                        std::to_string(kExactVertexLimit) + ")");
  }
  ElimState s;
  s.adj.assign(n, 0);
  s.remaining = n == 64 ? ~Mask{0} : bit(n) - 1;
  for (const Edge& e : g.edges()) {
    s.adj[e.u] |= bit(e.v);
    s.adj[e.v] |= bit(e.u);
  }

  std::vector<std::size_t> order;
  int low = degeneracy(s);
  if (options.reductions) {
    bool reduced = true;
    while (reduced) {
      reduced = false;
      for (Mask m = s.remaining; m && !reduced; m &= m - 1) {
        const auto v = static_cast<std::size_t>(std::countr_zero(m));
        const Mask nb = s.adj[v];
        bool eliminate = false;
        if (s.is_clique(nb)) {
          low = std::max(low, s.degree(v));
          eliminate = true;
        } else if (s.degree(v) <= low) {
          // Almost simplicial: all neighbours but one form a clique.
          for (Mask a = nb; a && !eliminate; a &= a - 1) eliminate = s.is_clique(nb & ~(a & (~a + 1)));
        }
        if (eliminate) {
          order.push_back(v);
          s.eliminate(v);
          reduced = true;
        }
      }
    }
  }

  const auto kernel = static_cast<std::size_t>(std::popcount(s.remaining));
  if (kernel > options.kernel_limit) {
    throw LimitExceeded("too large for exact mode: " + std::to_string(kernel) +
                        " vertices remain after reductions (limit " +
                        std::to_string(options.kernel_limit) + ")");
  }

  if (s.remaining) {
    low = std::max(low, degeneracy(s));
    auto [upper, fallback] = min_fill_width(s);
    std::vector<std::size_t> tail;
    int found = upper;
    for (int k = low; k < upper; ++k) {
      OrderingSearch search(k, options.reductions);
      std::vector<std::size_t> attempt;
      if (search.run(s, attempt)) {
        found = k;
        tail = std::move(attempt);
        break;
      }
    }
    if (tail.empty()) tail = std::move(fallback);
    low = std::max(low, found);
    order.insert(order.end(), tail.begin(), tail.end());
  }

  ExactTreewidth result;
  result.kernel_size = kernel;
  result.width = low;
  result.ordering = order;
  result.decomposition = decomposition_from_ordering(g, order);
  if (result.decomposition.width() != result.width) {
    throw Error("internal: exact treewidth witness has width " +
                std::to_string(result.decomposition.width()) + ", expected " +
                std::to_string(result.width));
  }
  return result;
}

// --- JSON ----------------------------------------------------------------------------

nlohmann::json decomposition_to_json(const Graph& g, const TreeDecomposition& td) {
  nlohmann::json nodes = nlohmann::json::array();
  nlohmann::json bags = nlohmann::json::object();
  for (std::size_t t = 0; t < td.node_count(); ++t) {
    nodes.push_back(t);
    nlohmann::json labels = nlohmann::json::array();
    for (const auto v : td.bags[t]) labels.push_back(g.label(v));
    bags[std::to_string(t)] = labels;
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [a, b] : td.tree_edges) edges.push_back({a, b});
  return {{"nodes", nodes}, {"tree_edges", edges}, {"bags", bags}};
}

TreeDecomposition decomposition_from_json(const Graph& g, const nlohmann::json& j) {
  try {
    const auto& nodes = j.at("nodes");
    if (!nodes.is_array()) throw ParseError("'nodes' must be an array");
    bool all_integers = true;
    for (const auto& node : nodes) {
      if (!node.is_number_integer() && !node.is_string()) throw ParseError("node ids must be integers or strings");
      all_integers = all_integers && node.is_number_integer();
    }
    auto key = [](const nlohmann::json& node) {
      return node.is_string() ? node.get<std::string>() : std::to_string(node.get<long long>());
    };
    std::vector<nlohmann::json> sorted(nodes.begin(), nodes.end());
    std::sort(sorted.begin(), sorted.end(), [&](const auto& a, const auto& b) {
      if (all_integers) return a.template get<long long>() < b.template get<long long>();
      return key(a) < key(b);
    });
    std::map<std::string, std::size_t> index;
    for (const auto& node : sorted) {
      if (!index.emplace(key(node), index.size()).second) throw ParseError("duplicate node id " + key(node));
    }
    TreeDecomposition td;
    td.bags.resize(index.size());
    const auto& bags = j.at("bags");
    for (const auto& [name, labels] : bags.items()) {
      const auto it = index.find(name);
      if (it == index.end()) throw ParseError("bag for undeclared node " + name);
      for (const auto& label : labels) {
        const auto v = g.vertex_index(label.get<std::string>());
        if (!v) throw ParseError("bag " + name + " names unknown vertex " + label.get<std::string>());
        td.bags[it->second].push_back(*v);
      }
      std::sort(td.bags[it->second].begin(), td.bags[it->second].end());
    }
    for (const auto& e : j.at("tree_edges")) {
      if (!e.is_array() || e.size() != 2) throw ParseError("tree edge must be a pair of node ids");
      const auto a = index.find(key(e[0]));
      const auto b = index.find(key(e[1]));
      if (a == index.end() || b == index.end()) throw ParseError("tree edge references an undeclared node");
      td.tree_edges.emplace_back(a->second, b->second);
    }
    return td;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("tree decomposition JSON: ") + e.what());
  }
}

}  // namespace corxc
