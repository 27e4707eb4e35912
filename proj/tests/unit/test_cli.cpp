#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "corxc/graph_io.hpp"
#include "corxc/lp.hpp"
#include "corxc_cli/cli.hpp"

namespace fs = std::filesystem;
using corxc::cli::run;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("corxc_cli_test_" + std::to_string(counter_++) + "_" +
                                         std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name, const std::string& content) const {
    const auto p = path_ / name;
    std::ofstream(p) << content;
    return p.string();
  }
  std::string path(const std::string& name) const { return (path_ / name).string(); }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("graph gen writes the family") {
  const auto r = call({"graph", "gen", "cycle", "4"});
  CHECK(r.code == 0);
  CHECK(corxc::parse_graph(r.out) == corxc::make_cycle(4));
  const auto j = call({"graph", "gen", "complete-bipartite", "2", "3", "--format", "json"});
  CHECK(j.code == 0);
  CHECK(corxc::parse_graph(j.out).edge_count() == 6);
  CHECK(call({"graph", "gen", "wheel", "5"}).code == 2);
  CHECK(call({"graph", "gen", "grid"}).code != 0);
  CHECK(call({}).code == 2);
  CHECK(call({"nonsense"}).code == 2);
}

TEST_CASE("graph convert round trip") {
  TempDir dir;
  const auto src = dir.file("g.txt", corxc::to_edge_list(corxc::make_petersen()));
  const auto out = dir.path("g.json");
  CHECK(call({"graph", "convert", src, "--to", "json", "-o", out}).code == 0);
  CHECK(corxc::parse_graph(slurp(out)) == corxc::make_petersen());
  CHECK(call({"graph", "convert", dir.path("missing.txt"), "--to", "json"}).code == 3);
  const auto bad = dir.file("bad.txt", "p edge 2 1\ne a a\n");
  CHECK(call({"graph", "convert", bad, "--to", "json"}).code == 4);
}

TEST_CASE("ef build report envelope") {
  TempDir dir;
  const auto g = dir.file("k2.txt", "p edge 2 1\ne a b\n");
  const auto r = call({"ef", "build", g});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["tool"] == "corxc");
  CHECK(j["command"] == "ef build");
  CHECK(j["ok"] == true);
  CHECK(j["seed"].is_null());
  CHECK(j["limits"]["enumeration"] == 20);
  CHECK(j["input_digest"].get<std::string>().rfind("sha256:", 0) == 0);
  CHECK(j["result"]["accounting"]["lambda"] == 4);
  CHECK(j["result"]["accounting"]["ineq"] == 4);
  // Same input, same digest.
  CHECK(json::parse(call({"ef", "build", g}).out)["input_digest"] == j["input_digest"]);
}

TEST_CASE("ef verify") {
  TempDir dir;
  const auto g = dir.file("c5.txt", corxc::to_edge_list(corxc::make_cycle(5)));
  const auto r = call({"ef", "verify", g, "--trials", "5", "--seed", "3"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["seed"] == 3);
  CHECK(j["ok"] == true);
  for (const char* td : {"min-fill", "min-degree", "exact"}) {
    CHECK(call({"ef", "verify", g, "--trials", "2", "--td", td}).code == 0);
  }
}

TEST_CASE("ef build with a user decomposition") {
  TempDir dir;
  const auto g = dir.file("k2.txt", "p edge 2 1\ne a b\n");
  const auto good = dir.file("td.json", R"({"nodes": [0], "tree_edges": [], "bags": {"0": ["a", "b", "a~b"]}})");
  CHECK(call({"ef", "build", g, "--decomposition", good}).code == 0);
  const auto bad = dir.file("bad.json", R"({"nodes": [0], "tree_edges": [], "bags": {"0": ["a", "b"]}})");
  const auto r = call({"ef", "build", g, "--decomposition", bad});
  CHECK(r.code == 4);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("ef export-lp") {
  TempDir dir;
  const auto g = dir.file("p3.txt", corxc::to_edge_list(corxc::make_path(3)));
  const auto lp_path = dir.path("p3.lp");
  REQUIRE(call({"ef", "export-lp", g, "-o", lp_path}).code == 0);
  const auto lp = corxc::parse_lp_file(slurp(lp_path));
  CHECK(corxc::solve(lp).status == corxc::LpStatus::optimal);
  const auto sidecar = json::parse(slurp(lp_path + ".json"));
  CHECK(sidecar.contains("projection"));
}

TEST_CASE("map solve") {
  TempDir dir;
  const auto g = dir.file("k2.txt", "p edge 2 1\ne a b\n");
  const auto w = dir.file("w.json", R"({"a": 2, "b": 3, "a~b": -6})");
  for (const char* m : {"dp", "bf", "lp", "all"}) {
    const auto r = call({"map", "solve", g, w, "--method", m});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["result"]["value"] == "3");
  }
  const auto r = call({"map", "solve", g, w, "--cross-check"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["result"]["agree"] == true);
  const auto stray = dir.file("stray.json", R"({"zz": 1})");
  CHECK(call({"map", "solve", g, stray}).code == 4);
  const auto garbage = dir.file("garbage.json", "{not json");
  CHECK(call({"map", "solve", g, garbage}).code == 4);
}

TEST_CASE("gadget commands") {
  const auto c = call({"gadget", "verify-crossover"});
  REQUIRE(c.code == 0);
  CHECK(json::parse(c.out)["ok"] == true);
  const auto v = call({"gadget", "verify-grid", "2"});
  REQUIRE(v.code == 0);
  CHECK(json::parse(v.out)["result"]["face_vertices"] == 32);
  CHECK(call({"gadget", "verify-grid", "4"}).code == 4);
  const auto rep = call({"gadget", "report", "16", "4"});
  REQUIRE(rep.code == 0);
  CHECK(json::parse(rep.out)["result"]["geometric_mean"]["value"] == "9");

  TempDir dir;
  const auto prefix = dir.path("grid2");
  REQUIRE(call({"gadget", "build-grid", "2", "-o", prefix}).code == 0);
  CHECK(corxc::parse_graph(slurp(prefix + ".graph")).vertex_count() == 58);
  const auto faces = json::parse(slurp(prefix + ".faces.json"));
  CHECK_FALSE(faces.empty());
  CHECK(json::parse(slurp(prefix + ".grid.json")).contains("diagonals"));
}

TEST_CASE("output to an unwritable path is an I/O error") {
  CHECK(call({"graph", "gen", "path", "3", "-o", "/nonexistent_dir/x.txt"}).code == 3);
}
