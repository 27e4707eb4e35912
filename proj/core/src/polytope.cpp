#include "corxc/polytope.hpp"

#include <algorithm>

#include "corxc/error.hpp"

namespace corxc {

VariableIndex make_index(std::vector<VariableId> ids) {
  return std::make_shared<const std::vector<VariableId>>(std::move(ids));
}

VariableIndex variable_index(const Graph& g) { return make_index(g.variables()); }

const Rational& CorPoint::at(const VariableId& id) const {
  for (std::size_t i = 0; i < index->size(); ++i) {
    if ((*index)[i] == id) return values[i];
  }
  throw PreconditionError("point has no coordinate " + id.str());
}

std::vector<std::string> CorVertex::members(const Graph& g) const {
  std::vector<std::string> out;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (coordinates[v]) out.push_back(g.label(v));
  }
  return out;
}

CorVertex cor_vertex(const Graph& g, const std::vector<std::uint8_t>& membership) {
  if (membership.size() != g.vertex_count()) {
    throw PreconditionError("membership vector does not match the vertex count");
  }
  CorVertex out;
  out.coordinates.resize(g.vertex_count() + g.edge_count());
  for (std::size_t v = 0; v < g.vertex_count(); ++v) out.coordinates[v] = membership[v] ? 1 : 0;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edges()[e];
    out.coordinates[g.vertex_count() + e] = out.coordinates[ed.u] & out.coordinates[ed.v];
  }
  return out;
}

CorPoint to_point(const Graph& g, const CorVertex& v, const VariableIndex& index) {
  if (index->size() != g.vertex_count() + g.edge_count()) {
    throw PreconditionError("index does not match the graph's variables");
  }
  CorPoint p{index, {}};
  p.values.reserve(v.coordinates.size());
  for (const auto c : v.coordinates) p.values.emplace_back(c);
  return p;
}

std::vector<CorPoint> to_points(const Graph& g, const std::vector<CorVertex>& vertices) {
  const auto index = variable_index(g);
  std::vector<CorPoint> out;
  out.reserve(vertices.size());
  for (const auto& v : vertices) out.push_back(to_point(g, v, index));
  return out;
}

namespace {

void check_enumeration_limit(const Graph& g) {
  if (g.vertex_count() > kEnumerationLimit) {
    throw LimitExceeded("enumeration limit: " + std::to_string(g.vertex_count()) +
                        " vertices exceeds " + std::to_string(kEnumerationLimit));
  }
}

}  // namespace

std::vector<CorVertex> cor_vertices(const Graph& g) {
  check_enumeration_limit(g);
  const std::size_t n = g.vertex_count();
  std::vector<CorVertex> out;
  out.reserve(std::size_t{1} << n);
  std::vector<std::uint8_t> membership(n);
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    for (std::size_t v = 0; v < n; ++v) membership[v] = static_cast<std::uint8_t>(s >> v & 1U);
    out.push_back(cor_vertex(g, membership));
  }
  return out;
}

void check_weights(const Graph& g, const Weights& w) {
  for (const auto& [id, value] : w) {
    if (!g.variable_position(id)) {
      throw PreconditionError("weight given for unknown variable " + id.str());
    }
  }
}

MapSolution map_brute_force(const Graph& g, const Weights& w) {
  check_enumeration_limit(g);
  check_weights(g, w);
  const std::size_t n = g.vertex_count();
  std::vector<Rational> vw(n), ew(g.edge_count());
  for (const auto& [id, value] : w) {
    const auto pos = *g.variable_position(id);
    if (pos < n) {
      vw[pos] = value;
    } else {
      ew[pos - n] = value;
    }
  }
  Rational best;
  std::uint64_t best_set = 0;
  Rational total;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    total = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (s >> v & 1U) total += vw[v];
    }
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      const Edge& ed = g.edges()[e];
      if ((s >> ed.u & 1U) && (s >> ed.v & 1U)) total += ew[e];
    }
    if (s == 0 || total > best) {
      best = total;
      best_set = s;
    }
  }
  MapSolution sol{best, {}};
  for (std::size_t v = 0; v < n; ++v) {
    if (best_set >> v & 1U) sol.members.push_back(g.label(v));
  }
  return sol;
}

std::size_t dimension(const std::vector<CorPoint>& points) {
  if (points.empty()) throw PreconditionError("dimension of an empty point set");
  const auto& index = points.front().index;
  const std::size_t d = index->size();
  std::vector<std::vector<Rational>> rows;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const auto& p = points[i];
    if (p.index != index && *p.index != *index) throw PreconditionError("points have mixed index sets");
    std::vector<Rational> diff(d);
    for (std::size_t k = 0; k < d; ++k) diff[k] = p.values[k] - points.front().values[k];
    rows.push_back(std::move(diff));
  }
  std::size_t rank = 0;
  for (std::size_t col = 0; col < d && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (rows[r][col] == 0) continue;
      const Rational f = rows[r][col] / rows[rank][col];
      for (std::size_t k = col; k < d; ++k) rows[r][k] -= f * rows[rank][k];
    }
    ++rank;
  }
  return rank;
}

// --- affine maps ------------------------------------------------------------------

AffineMap AffineMap::identity(const std::vector<VariableId>& ids) { return coordinate_projection(ids); }

AffineMap AffineMap::coordinate_projection(const std::vector<VariableId>& keep) {
  AffineMap m;
  m.outputs = keep;
  for (const auto& id : keep) m.forms.push_back(AffineForm{{{id, Rational(1)}}, Rational(0)});
  return m;
}

AffineMap deletion_map(const Graph& g, std::string_view a, std::string_view b) {
  return AffineMap::coordinate_projection(delete_edge(g, a, b).variables());
}

AffineMap contraction_map(const Graph& g, std::string_view a, std::string_view b) {
  const Graph h = contract_edge(g, a, b);
  const std::string w = contraction_label(g, a, b);
  AffineMap m;
  m.outputs = h.variables();
  for (const auto& id : m.outputs) {
    VariableId source = id;
    if (id.is_vertex() && id.first == w) {
      source = VariableId::vertex(std::string(a));
    } else if (id.is_edge() && (id.first == w || id.second == w)) {
      const std::string z = id.first == w ? id.second : id.first;
      std::vector<VariableId> candidates;
      for (const auto end : {a, b}) {
        if (g.edge_index(end, z)) candidates.push_back(VariableId::edge(std::string(end), z));
      }
      source = *std::min_element(candidates.begin(), candidates.end());
    }
    m.forms.push_back(AffineForm{{{source, Rational(1)}}, Rational(0)});
  }
  return m;
}

AffineMap isolated_removal_map(const Graph& g, std::string_view v) {
  return AffineMap::coordinate_projection(remove_isolated(g, v).variables());
}

namespace {

bool values_less(const CorPoint& a, const CorPoint& b) {
  return std::lexicographical_compare(a.values.begin(), a.values.end(), b.values.begin(), b.values.end());
}

void sort_unique(std::vector<CorPoint>& pts) {
  std::sort(pts.begin(), pts.end(), values_less);
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const CorPoint& a, const CorPoint& b) { return a.values == b.values; }),
            pts.end());
}

}  // namespace

std::vector<CorPoint> apply_affine(const AffineMap& map, const std::vector<CorPoint>& points) {
  if (map.forms.size() != map.outputs.size()) throw PreconditionError("affine map has mismatched outputs");
  const auto out_index = make_index(map.outputs);
  std::vector<CorPoint> out;
  out.reserve(points.size());
  const std::vector<VariableId>* cached = nullptr;
  std::vector<std::vector<std::pair<std::size_t, Rational>>> compiled;
  for (const auto& p : points) {
    if (cached == nullptr || *cached != *p.index) {
      std::map<VariableId, std::size_t> pos;
      for (std::size_t i = 0; i < p.index->size(); ++i) pos.emplace((*p.index)[i], i);
      compiled.assign(map.forms.size(), {});
      for (std::size_t o = 0; o < map.forms.size(); ++o) {
        for (const auto& [id, coeff] : map.forms[o].terms) {
          const auto it = pos.find(id);
          if (it == pos.end()) throw PreconditionError("affine map input " + id.str() + " missing from point");
          compiled[o].emplace_back(it->second, coeff);
        }
      }
      cached = p.index.get();
    }
    CorPoint image{out_index, std::vector<Rational>(map.forms.size())};
    for (std::size_t o = 0; o < map.forms.size(); ++o) {
      Rational v = map.forms[o].offset;
      for (const auto& [i, coeff] : compiled[o]) v += coeff * p.values[i];
      image.values[o] = v;
    }
    out.push_back(std::move(image));
  }
  sort_unique(out);
  return out;
}

bool same_point_set(const std::vector<CorPoint>& a, const std::vector<CorPoint>& b) {
  if (a.empty() || b.empty()) return a.empty() && b.empty();
  const auto& ia = *a.front().index;
  std::vector<VariableId> sa = ia, sb = *b.front().index;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  if (sa != sb) return false;
  // Reorder both families into a's coordinate order, deduplicated and sorted.
  const auto reorder = AffineMap::coordinate_projection(ia);
  const auto x = apply_affine(reorder, a);
  const auto y = apply_affine(reorder, b);
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].values != y[i].values) return false;
  }
  return true;
}

// --- JSON ----------------------------------------------------------------------------

namespace {

Rational rational_from_json(const nlohmann::json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(std::to_string(v.get<long long>()));
  throw ParseError("rationals must be \"p/q\" strings or integers, got " + v.dump());
}

}  // namespace

nlohmann::json face_system_to_json(const FaceSystem& fs) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& eq : fs.equations) {
    nlohmann::json vars = nlohmann::json::array();
    nlohmann::json coeffs = nlohmann::json::array();
    for (std::size_t i = 0; i < eq.vars.size(); ++i) {
      vars.push_back(eq.vars[i].str());
      coeffs.push_back(to_string(eq.coeffs[i]));
    }
    out.push_back({{"tag", to_string(eq.tag)}, {"vars", vars}, {"coeffs", coeffs}, {"rhs", to_string(eq.rhs)}});
  }
  return out;
}

FaceSystem face_system_from_json(const nlohmann::json& j) {
  try {
    FaceSystem fs;
    for (const auto& item : j) {
      FaceEquation eq;
      eq.tag = parse_face_tag(item.at("tag").get<std::string>());
      for (const auto& v : item.at("vars")) eq.vars.push_back(VariableId::parse(v.get<std::string>()));
      for (const auto& c : item.at("coeffs")) eq.coeffs.push_back(rational_from_json(c));
      eq.rhs = rational_from_json(item.at("rhs"));
      if (eq.vars.size() != eq.coeffs.size()) throw ParseError("vars and coeffs differ in length");
      fs.equations.push_back(std::move(eq));
    }
    return fs;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("face system JSON: ") + e.what());
  }
}

nlohmann::json points_to_json(const std::vector<CorPoint>& points) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& p : points) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < p.index->size(); ++i) obj[(*p.index)[i].str()] = to_string(p.values[i]);
    out.push_back(std::move(obj));
  }
  return out;
}

Weights weights_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("weights must be a JSON object keyed by variable id");
  Weights w;
  for (const auto& [key, value] : j.items()) {
    const auto id = VariableId::parse(key);
    if (!w.emplace(id, rational_from_json(value)).second) {
      throw ParseError("duplicate weight for " + id.str());
    }
  }
  return w;
}

nlohmann::json weights_to_json(const Weights& w) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [id, value] : w) out[id.str()] = to_string(value);
  return out;
}

}  // namespace corxc
