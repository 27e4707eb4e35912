#include "corxc_cli/cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "corxc/error.hpp"
#include "corxc/extform.hpp"
#include "corxc/gadgets.hpp"
#include "corxc/graph_io.hpp"
#include "corxc/lp.hpp"
#include "corxc/treewidth.hpp"

#ifndef CORXC_VERSION
#define CORXC_VERSION "unknown"
#endif

namespace corxc::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Limits {
  std::size_t enumeration = kEnumerationLimit;
  std::size_t tw_kernel = kExactKernelLimit;
};

std::size_t env_limit(const char* name, std::size_t fallback, std::size_t hard_cap) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return fallback;
  const std::string_view text(raw);
  std::size_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || value == 0) {
    throw UsageError(std::string(name) + " must be a positive integer");
  }
  if (value > hard_cap) {
    throw UsageError(std::string(name) + "=" + std::string(text) + " exceeds the built-in cap " +
                     std::to_string(hard_cap));
  }
  return value;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int{md[i]};
  return os.str();
}

class Context {
 public:
  Context(const std::vector<std::string>& args, std::ostream& out) : args_(args), out_(out) {}

  Limits limits;
  std::optional<std::uint64_t> seed;

  std::string read_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    inputs_.push_back(os.str());
    return inputs_.back();
  }

  Graph read_graph(const std::string& path) { return parse_graph(read_input(path)); }

  json read_json(const std::string& path) {
    const auto text = read_input(path);
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(path + ": " + e.what());
    }
  }

  void write_file(const std::string& path, const std::string& text) const {
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << text)) throw IoError("cannot write " + path);
  }

  void write_or_print(const std::string& path, const std::string& text) const {
    if (path.empty()) {
      out_ << text;
    } else {
      write_file(path, text);
    }
  }

  void check_enumeration(const Graph& g) const {
    if (g.vertex_count() > limits.enumeration) {
      throw LimitExceeded("enumeration limit: " + std::to_string(g.vertex_count()) + " vertices exceeds " +
                          std::to_string(limits.enumeration));
    }
  }

  // Arguments plus the contents of every file read, length-prefixed.
  std::string digest() const {
    std::string bytes;
    for (const auto& a : args_) {
      bytes += a;
      bytes += '\0';
    }
    for (const auto& in : inputs_) bytes += std::to_string(in.size()) + ":" + in;
    return "sha256:" + sha256_hex(bytes);
  }

  int report(const std::string& command, json result, bool ok, const std::string& path) const {
    json r = {{"tool", "corxc"},
              {"version", CORXC_VERSION},
              {"command", command},
              {"seed", seed ? json(*seed) : json(nullptr)},
              {"limits",
               {{"enumeration", limits.enumeration},
                {"exact_treewidth_kernel", limits.tw_kernel},
                {"lift_check", kLiftCheckLimit},
                {"grid_exhaustive", kGridExhaustiveLimit}}},
              {"input_digest", digest()},
              {"result", std::move(result)},
              {"ok", ok}};
    write_or_print(path, r.dump(2) + "\n");
    return ok ? kOk : kVerificationFailed;
  }

 private:
  std::vector<std::string> args_;
  std::vector<std::string> inputs_;
  std::ostream& out_;
};

// --- graph ---------------------------------------------------------------------------

Graph make_family(const std::string& family, const std::vector<std::size_t>& p) {
  auto need = [&](std::size_t k) {
    if (p.size() != k) {
      throw UsageError("family " + family + " takes " + std::to_string(k) + " parameter(s), got " +
                       std::to_string(p.size()));
    }
  };
  if (family == "grid") {
    need(1);
    return make_grid(p[0]);
  }
  if (family == "complete") {
    need(1);
    return make_complete(p[0]);
  }
  if (family == "complete-bipartite") {
    need(2);
    return make_complete_bipartite(p[0], p[1]);
  }
  if (family == "path") {
    need(1);
    return make_path(p[0]);
  }
  if (family == "cycle") {
    need(1);
    return make_cycle(p[0]);
  }
  if (family == "petersen") {
    need(0);
    return make_petersen();
  }
  throw UsageError("unknown family '" + family + "' (grid, complete, complete-bipartite, path, cycle, petersen)");
}

std::string render_graph(const Graph& g, const std::string& format) {
  if (format == "json") return graph_to_json(g).dump(2) + "\n";
  return to_edge_list(g);
}

// --- decompositions -----------------------------------------------------------------------

struct TdOptions {
  std::string file;
  std::string mode = "auto";
};

struct ChosenTd {
  TreeDecomposition td;
  std::string source;
};

ChosenTd choose_decomposition(Context& ctx, const Graph& g, const TdOptions& o) {
  if (!o.file.empty()) return {decomposition_from_json(constraint_graph(g), ctx.read_json(o.file)), o.file};
  if (o.mode == "auto") return {constraint_decomposition(g), "heuristic"};
  if (o.mode == "min-fill") return {heuristic_decomposition(constraint_graph(g), EliminationHeuristic::min_fill), "min-fill"};
  if (o.mode == "min-degree") {
    return {heuristic_decomposition(constraint_graph(g), EliminationHeuristic::min_degree), "min-degree"};
  }
  ExactOptions eo;
  eo.kernel_limit = ctx.limits.tw_kernel;
  return {exact_treewidth(constraint_graph(g), eo).decomposition, "exact"};
}

void add_td_options(CLI::App* cmd, TdOptions& o) {
  cmd->add_option("--decomposition", o.file, "Tree decomposition JSON of the constraint graph");
  cmd->add_option("--td", o.mode, "Decomposition of the constraint graph when none is given")
      ->check(CLI::IsMember({"auto", "min-fill", "min-degree", "exact"}));
}

json decomposition_summary(const ChosenTd& c) {
  return {{"source", c.source}, {"width", c.td.width()}, {"nodes", c.td.node_count()}};
}

json solution_to_json(const MapSolution& s) { return {{"value", to_string(s.value)}, {"members", s.members}}; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Extended formulations and face gadgets for correlation polytopes", "corxc"};
  app.set_version_flag("--version", CORXC_VERSION);
  app.require_subcommand(1);

  // graph
  auto* graph = app.add_subcommand("graph", "Generate and convert graph files");
  graph->require_subcommand(1);
  std::string family, format = "edge-list", output, input;
  std::vector<std::size_t> params;
  auto* gen = graph->add_subcommand("gen", "Write a standard graph family");
  gen->add_option("family", family, "grid | complete | complete-bipartite | path | cycle | petersen")->required();
  gen->add_option("params", params, "Family parameters");
  gen->add_option("--format", format)->check(CLI::IsMember({"edge-list", "json"}));
  gen->add_option("-o,--output", output);
  auto* convert = graph->add_subcommand("convert", "Convert between edge-list and JSON");
  convert->add_option("input", input)->required();
  convert->add_option("--to", format)->required()->check(CLI::IsMember({"edge-list", "json"}));
  convert->add_option("-o,--output", output);

  // ef
  auto* ef = app.add_subcommand("ef", "Extended formulation from a tree decomposition");
  ef->require_subcommand(1);
  TdOptions td_opts;
  std::size_t trials = 20;
  std::uint64_t seed = 1;
  std::string save, sidecar;
  auto* ef_build = ef->add_subcommand("build", "Build the formulation and report its size");
  ef_build->add_option("graph", input)->required();
  ef_build->add_option("-o,--output", output, "Report path");
  ef_build->add_option("--save", save, "Write the formulation (λ catalogue, projection) as JSON");
  add_td_options(ef_build, td_opts);
  auto* ef_verify = ef->add_subcommand("verify", "Compare LP, DP and brute-force optima");
  ef_verify->add_option("graph", input)->required();
  ef_verify->add_option("--trials", trials);
  ef_verify->add_option("--seed", seed);
  ef_verify->add_option("-o,--output", output, "Report path");
  add_td_options(ef_verify, td_opts);
  auto* ef_export = ef->add_subcommand("export-lp", "Write the formulation as an LP file");
  ef_export->add_option("graph", input)->required();
  ef_export->add_option("-o,--output", output, "LP file path")->required();
  ef_export->add_option("--sidecar", sidecar, "Projection JSON path (default: <output>.json)");
  add_td_options(ef_export, td_opts);

  // map
  auto* map = app.add_subcommand("map", "Maximise a linear function over COR(G)");
  map->require_subcommand(1);
  std::string weights_path, method = "dp";
  bool cross_check = false;
  auto* solve = map->add_subcommand("solve", "Solve one MAP instance");
  solve->add_option("graph", input)->required();
  solve->add_option("weights", weights_path, "JSON object: variable id -> rational")->required();
  solve->add_option("--method", method)->check(CLI::IsMember({"dp", "bf", "lp", "all"}));
  solve->add_flag("--cross-check", cross_check, "Run every method and compare");
  solve->add_option("-o,--output", output, "Report path");
  add_td_options(solve, td_opts);

  // gadget
  auto* gadget = app.add_subcommand("gadget", "Crossover gadget and grid with gadgets");
  gadget->require_subcommand(1);
  std::size_t height = 0, n_bound = 0;
  std::optional<std::size_t> grid_height;
  auto* crossover = gadget->add_subcommand("verify-crossover", "Check the crossover gadget face");
  crossover->add_option("-o,--output", output, "Report path");
  auto* build_grid = gadget->add_subcommand("build-grid", "Build the grid with gadgets");
  build_grid->add_option("height", height)->required();
  build_grid->add_option("-o,--output", output, "Prefix for <prefix>.graph, .faces.json, .grid.json");
  auto* verify_grid = gadget->add_subcommand("verify-grid", "Check the projection onto COR(K_{h,h})");
  verify_grid->add_option("height", height)->required();
  verify_grid->add_option("-o,--output", output, "Report path");
  auto* bound = gadget->add_subcommand("report", "Lower bounds implied by n and h");
  bound->add_option("n", n_bound);
  bound->add_option("height", height);
  bound->add_option("--grid", grid_height, "Use the grid with gadgets of this height for n and h");
  bound->add_option("-o,--output", output, "Report path");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  Context ctx(args, out);
  try {
    ctx.limits.enumeration = env_limit("CORXC_ENUM_LIMIT", kEnumerationLimit, kEnumerationLimit);
    ctx.limits.tw_kernel = env_limit("CORXC_TW_LIMIT", kExactKernelLimit, kExactVertexLimit);

    if (gen->parsed()) {
      ctx.write_or_print(output, render_graph(make_family(family, params), format));
      return kOk;
    }
    if (convert->parsed()) {
      ctx.write_or_print(output, render_graph(ctx.read_graph(input), format));
      return kOk;
    }

    if (ef_build->parsed() || ef_verify->parsed() || ef_export->parsed()) {
      const Graph g = ctx.read_graph(input);
      const auto chosen = choose_decomposition(ctx, g, td_opts);
      const auto formulation = build_ef(g, chosen.td);
      const json summary = {{"graph", {{"n", g.vertex_count()}, {"m", g.edge_count()}}},
                            {"decomposition", decomposition_summary(chosen)},
                            {"accounting", accounting_to_json(g, formulation.accounting)}};
      if (ef_build->parsed()) {
        if (!save.empty()) ctx.write_file(save, ef_to_json(formulation).dump(2) + "\n");
        return ctx.report("ef build", summary, formulation.accounting.within_budget(g), output);
      }
      if (ef_verify->parsed()) {
        ctx.check_enumeration(g);
        ctx.seed = seed;
        const auto rep = verify_ef(g, formulation, trials, seed);
        json result = summary;
        result["verify"] = verify_report_to_json(rep);
        result["summary"] = std::to_string(rep.matches) + "/" + std::to_string(rep.trials) + " matches";
        return ctx.report("ef verify", result, rep.ok(), "");
      }
      const auto side = sidecar.empty() ? output + ".json" : sidecar;
      ctx.write_file(output, to_lp_file(formulation.lp));
      ctx.write_file(side, ef_to_json(formulation).dump(2) + "\n");
      json result = summary;
      result["files"] = {{"lp", output}, {"sidecar", side}};
      result["rows"] = formulation.lp.constraints.size();
      result["variables"] = formulation.lp.variables.size();
      return ctx.report("ef export-lp", result, true, "");
    }

    if (solve->parsed()) {
      const Graph g = ctx.read_graph(input);
      const Weights w = weights_from_json(ctx.read_json(weights_path));
      check_weights(g, w);
      if (cross_check) method = "all";
      const bool all = method == "all";
      json methods = json::object();
      std::vector<std::pair<std::string, Rational>> values;
      std::vector<std::string> skipped;
      if (all || method == "dp") {
        const auto chosen = choose_decomposition(ctx, g, td_opts);
        const auto s = map_dp(g, chosen.td, w);
        methods["dp"] = solution_to_json(s);
        values.emplace_back("dp", s.value);
      }
      if (all || method == "bf") {
        if (all && g.vertex_count() > ctx.limits.enumeration) {
          skipped.push_back("bf");
        } else {
          ctx.check_enumeration(g);
          const auto s = map_brute_force(g, w);
          methods["bf"] = solution_to_json(s);
          values.emplace_back("bf", s.value);
        }
      }
      if (all || method == "lp") {
        const auto chosen = choose_decomposition(ctx, g, td_opts);
        const auto formulation = build_ef(g, chosen.td);
        const auto outcome = SimplexSolver(formulation.lp).maximize(pulled_back_objective(formulation, w));
        if (outcome.status != LpStatus::optimal) throw Error("internal: EF LP is " + to_string(outcome.status));
        const auto x = project(formulation, outcome.point);
        json members = json::array();
        for (std::size_t v = 0; v < g.vertex_count(); ++v) {
          if (x.values[v] == 1) {
            members.push_back(g.label(v));
          } else if (x.values[v] != 0) {
            members = nullptr;  // fractional optimum
            break;
          }
        }
        methods["lp"] = {{"value", to_string(outcome.value)}, {"members", members}};
        values.emplace_back("lp", outcome.value);
      }
      bool agree = true;
      std::string line;
      for (const auto& [name, v] : values) {
        agree = agree && v == values.front().second;
        line += (line.empty() ? "" : " == ") + name;
      }
      json result = {{"methods", methods}, {"value", to_string(values.front().second)}, {"agree", agree}};
      if (values.size() > 1) result["cross_check"] = line + ": " + (agree ? "true" : "false");
      if (!skipped.empty()) result["skipped"] = skipped;
      return ctx.report("map solve", result, agree, output);
    }

    if (crossover->parsed()) {
      const auto rep = verify_crossover();
      json result = to_json(rep);
      result["regression_completions"] = kCrossoverCompletions;
      bool stable = true;
      for (const auto c : rep.completions) stable = stable && c == kCrossoverCompletions;
      result["completions_match_regression"] = stable;
      return ctx.report("gadget verify-crossover", result, rep.ok() && stable, output);
    }
    if (build_grid->parsed()) {
      const auto gw = build_grid_with_gadgets(height);
      validate_face_system(gw.graph, gw.faces);
      json result = {{"h", gw.h},
                     {"vertices", gw.graph.vertex_count()},
                     {"edges", gw.graph.edge_count()},
                     {"equations", gw.faces.equations.size()},
                     {"diagonals", gw.diagonals.size()},
                     {"gadgets", gw.gadget_prefixes.size()}};
      if (!output.empty()) {
        ctx.write_file(output + ".graph", to_edge_list(gw.graph));
        ctx.write_file(output + ".faces.json", face_system_to_json(gw.faces).dump(2) + "\n");
        ctx.write_file(output + ".grid.json", grid_descriptor_to_json(gw).dump(2) + "\n");
        result["files"] = {output + ".graph", output + ".faces.json", output + ".grid.json"};
      }
      return ctx.report("gadget build-grid", result, true, "");
    }
    if (verify_grid->parsed()) {
      if (height > kGridExhaustiveLimit) {
        throw LimitExceeded("exhaustive limit: verify-grid supports h <= " + std::to_string(kGridExhaustiveLimit));
      }
      const auto rep = verify_projection(build_grid_with_gadgets(height));
      return ctx.report("gadget verify-grid", to_json(rep), rep.ok(), output);
    }
    if (bound->parsed()) {
      std::size_t n = n_bound, h = height;
      if (grid_height) {
        h = *grid_height;
        n = build_grid_with_gadgets(h).graph.vertex_count();
      } else if (bound->count("n") == 0) {
        throw UsageError("gadget report needs <n> [h] or --grid <h>");
      }
      return ctx.report("gadget report", to_json(lower_bound_report(n, h)), true, output);
    }
    throw UsageError("no command given");
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const ParseError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kValidation;
  } catch (const LimitExceeded& e) {
    err << "limit: " << e.what() << "\n";
    return kValidation;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kValidation;
  } catch (const PreconditionError& e) {
    err << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const json::exception& e) {
    err << "invalid input: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kVerificationFailed;
  }
}

}  // namespace corxc::cli
