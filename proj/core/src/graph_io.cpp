#include "corxc/graph_io.hpp"

#include <algorithm>
#include <sstream>

#include "corxc/error.hpp"

namespace corxc {

std::string to_edge_list(const Graph& g) {
  std::ostringstream out;
  out << "p edge " << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (g.degree(v) == 0) out << "n " << g.label(v) << '\n';
  }
  for (const Edge& e : g.edges()) out << "e " << g.label(e.u) << ' ' << g.label(e.v) << '\n';
  return out.str();
}

Graph parse_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  bool have_header = false;
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<std::string> vertices;
  std::vector<std::pair<std::string, std::string>> edges;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw ParseError("edge list line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag == "c") continue;
    if (tag == "p") {
      std::string kind;
      if (have_header) fail("duplicate header");
      if (!(ls >> kind >> n >> m) || kind != "edge") fail("expected 'p edge <n> <m>'");
      have_header = true;
    } else if (!have_header) {
      fail("record before 'p edge' header");
    } else if (tag == "n") {
      std::string v;
      if (!(ls >> v)) fail("expected 'n <label>'");
      vertices.push_back(v);
    } else if (tag == "e") {
      std::string a, b;
      if (!(ls >> a >> b)) fail("expected 'e <label> <label>'");
      edges.emplace_back(a, b);
    } else {
      fail("unknown record '" + tag + "'");
    }
    std::string extra;
    if (ls >> extra) fail("trailing token '" + extra + "'");
  }
  if (!have_header) throw ParseError("edge list has no 'p edge' header");
  std::vector<std::string> all = vertices;
  for (const auto& [a, b] : edges) {
    all.push_back(a);
    all.push_back(b);
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  try {
    Graph g(all, edges);
    if (g.vertex_count() != n || g.edge_count() != m) {
      throw ParseError("header declares " + std::to_string(n) + " vertices and " +
                       std::to_string(m) + " edges, body has " + std::to_string(g.vertex_count()) +
                       " and " + std::to_string(g.edge_count()));
    }
    return g;
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("invalid graph: ") + e.what());
  }
}

nlohmann::json graph_to_json(const Graph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [a, b] : g.edge_labels()) edges.push_back({a, b});
  return {{"vertices", g.labels()}, {"edges", edges}};
}

Graph graph_from_json(const nlohmann::json& j) {
  try {
    std::vector<std::string> vertices = j.at("vertices").get<std::vector<std::string>>();
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw ParseError("edge must be a pair of labels");
      edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
    return Graph(std::move(vertices), edges);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("graph JSON: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("invalid graph: ") + e.what());
  }
}

Graph parse_graph(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("graph JSON: ") + e.what());
    }
    return graph_from_json(j);
  }
  return parse_edge_list(text);
}

}  // namespace corxc
