#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>

#include "corxc/graph.hpp"

namespace corxc {

/// Edge-list text:
///
///     p edge <n> <m>
///     n <label>          (one line per isolated vertex)
///     e <label> <label>  (one line per edge)
///
/// Lines starting with 'c' are comments. The header counts must match.
std::string to_edge_list(const Graph& g);
Graph parse_edge_list(std::string_view text);

/// {"vertices": [...], "edges": [[u, v], ...]}
nlohmann::json graph_to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& j);

/// Dispatches on the first non-space character: '{' means JSON.
Graph parse_graph(std::string_view text);

}  // namespace corxc
