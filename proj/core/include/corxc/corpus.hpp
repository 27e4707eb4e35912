#pragma once

#include <cstddef>
#include <vector>

#include "corxc/graph.hpp"
#include "corxc/random.hpp"

namespace corxc {

/// One representative per isomorphism class of graphs on n labelled vertices
/// v1..vn (n <= 7), optionally restricted to connected graphs. The
/// representative is the canonical form: the lexicographically smallest
/// adjacency bitstring over all vertex permutations.
std::vector<Graph> graph_classes(std::size_t n, bool connected_only);

/// Random connected graph on v1..vn: a random labelled spanning tree plus
/// each remaining pair independently with probability num/den.
Graph random_connected_graph(std::size_t n, std::uint64_t num, std::uint64_t den,
                             PortableRandom& rng);

bool is_connected(const Graph& g);

}  // namespace corxc
