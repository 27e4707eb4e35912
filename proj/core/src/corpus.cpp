#include "corxc/corpus.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>

#include "corxc/error.hpp"

namespace corxc {

namespace {

struct PairIndex {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::vector<std::size_t>> slot;

  explicit PairIndex(std::size_t n) : slot(n, std::vector<std::size_t>(n, 0)) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        slot[i][j] = slot[j][i] = pairs.size();
        pairs.emplace_back(i, j);
      }
  }
};

Graph from_mask(std::size_t n, const PairIndex& idx, std::uint32_t mask) {
  std::vector<std::string> vs;
  for (std::size_t i = 1; i <= n; ++i) vs.push_back("v" + std::to_string(i));
  std::vector<std::pair<std::string, std::string>> es;
  for (std::size_t p = 0; p < idx.pairs.size(); ++p) {
    if (mask >> p & 1U) es.emplace_back(vs[idx.pairs[p].first], vs[idx.pairs[p].second]);
  }
  return Graph(std::move(vs), es);
}

bool mask_connected(std::size_t n, const PairIndex& idx, std::uint32_t mask) {
  if (n <= 1) return true;
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = n;
  for (std::size_t p = 0; p < idx.pairs.size(); ++p) {
    if (!(mask >> p & 1U)) continue;
    const auto a = find(idx.pairs[p].first);
    const auto b = find(idx.pairs[p].second);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

}  // namespace

std::vector<Graph> graph_classes(std::size_t n, bool connected_only) {
  if (n == 0 || n > 7) throw InvalidArgument("graph_classes supports 1 <= n <= 7");
  const PairIndex idx(n);
  const std::size_t bits = idx.pairs.size();
  std::vector<std::vector<std::size_t>> perms;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    perms.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<std::uint32_t> canon;
  std::vector<char> seen(std::size_t{1} << bits, 0);
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << bits); ++mask) {
    if (seen[mask]) continue;
    std::uint32_t best = mask;
    for (const auto& p : perms) {
      std::uint32_t image = 0;
      for (std::size_t b = 0; b < bits; ++b) {
        if (mask >> b & 1U) image |= std::uint32_t{1} << idx.slot[p[idx.pairs[b].first]][p[idx.pairs[b].second]];
      }
      seen[image] = 1;
      best = std::min(best, image);
    }
    canon.push_back(best);
  }
  std::sort(canon.begin(), canon.end());
  std::vector<Graph> out;
  for (const auto mask : canon) {
    if (connected_only && !mask_connected(n, idx, mask)) continue;
    out.push_back(from_mask(n, idx, mask));
  }
  return out;
}

Graph random_connected_graph(std::size_t n, std::uint64_t num, std::uint64_t den,
                             PortableRandom& rng) {
  if (n == 0) throw InvalidArgument("random graph needs at least one vertex");
  std::vector<std::string> vs;
  for (std::size_t i = 1; i <= n; ++i) vs.push_back("v" + std::to_string(i));
  std::set<std::pair<std::size_t, std::size_t>> es;
  // Random attachment tree: vertex i joins a uniformly chosen earlier vertex
  // of a random permutation.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(i) - 1))]);
  }
  for (std::size_t i = 1; i < n; ++i) {
    const auto j = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(i) - 1));
    es.emplace(std::min(order[i], order[j]), std::max(order[i], order[j]));
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (!es.count({a, b}) && rng.bernoulli(num, den)) es.emplace(a, b);
  std::vector<std::pair<std::string, std::string>> labelled;
  for (const auto& [a, b] : es) labelled.emplace_back(vs[a], vs[b]);
  return Graph(std::move(vs), labelled);
}

bool is_connected(const Graph& g) {
  if (g.vertex_count() <= 1) return true;
  std::vector<char> seen(g.vertex_count(), 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    for (const auto w : g.neighbours(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count == g.vertex_count();
}

}  // namespace corxc
