#include <algorithm>
#include <set>

#include "corxc/error.hpp"
#include "corxc/polytope.hpp"

namespace corxc {

std::string to_string(FaceTag tag) {
  switch (tag) {
    case FaceTag::nonneg_edge:
      return "NONNEG-EDGE";
    case FaceTag::edge_eq:
      return "EDGE-EQ";
    case FaceTag::exclusive_or:
      return "XOR";
    case FaceTag::one_of_three:
      return "ONE-OF-THREE";
  }
  return "?";
}

FaceTag parse_face_tag(std::string_view text) {
  if (text == "NONNEG-EDGE") return FaceTag::nonneg_edge;
  if (text == "EDGE-EQ") return FaceTag::edge_eq;
  if (text == "XOR") return FaceTag::exclusive_or;
  if (text == "ONE-OF-THREE") return FaceTag::one_of_three;
  throw ParseError("unknown face tag '" + std::string(text) + "'");
}

void FaceSystem::append(const FaceSystem& other) {
  equations.insert(equations.end(), other.equations.begin(), other.equations.end());
}

FaceEquation nonneg_edge(const std::string& a, const std::string& b) {
  return FaceEquation{FaceTag::nonneg_edge, {VariableId::edge(a, b)}, {Rational(1)}, Rational(0)};
}

FaceEquation edge_eq(const std::string& u, const std::string& v) {
  return FaceEquation{FaceTag::edge_eq,
                      {VariableId::vertex(u), VariableId::edge(u, v)},
                      {Rational(1), Rational(-1)},
                      Rational(0)};
}

FaceEquation exclusive_or(const std::string& a, const std::string& b) {
  return FaceEquation{FaceTag::exclusive_or,
                      {VariableId::vertex(a), VariableId::vertex(b), VariableId::edge(a, b)},
                      {Rational(1), Rational(1), Rational(-2)},
                      Rational(1)};
}

FaceEquation one_of_three(const std::string& a, const std::string& b, const std::string& c) {
  return FaceEquation{FaceTag::one_of_three,
                      {VariableId::vertex(a), VariableId::vertex(b), VariableId::vertex(c),
                       VariableId::edge(a, b), VariableId::edge(a, c), VariableId::edge(b, c)},
                      {Rational(1), Rational(1), Rational(1), Rational(-2), Rational(-2), Rational(-2)},
                      Rational(1)};
}

FaceSystem edge_equalities(const std::string& u, const std::string& v) {
  return FaceSystem{{edge_eq(u, v), edge_eq(v, u)}};
}

// --- shape checks ----------------------------------------------------------------

namespace {

struct Shape {
  std::map<std::string, Rational> vertex_coeffs;
  std::map<std::pair<std::string, std::string>, Rational> edge_coeffs;
};

Shape shape_of(const FaceEquation& eq) {
  Shape s;
  for (std::size_t i = 0; i < eq.vars.size(); ++i) {
    const auto& id = eq.vars[i];
    const bool fresh = id.is_vertex() ? s.vertex_coeffs.emplace(id.first, eq.coeffs[i]).second
                                      : s.edge_coeffs.emplace(std::pair{id.first, id.second}, eq.coeffs[i]).second;
    if (!fresh) throw PreconditionError("variable " + id.str() + " repeated");
  }
  return s;
}

void check_shape(const FaceEquation& eq) {
  if (eq.vars.size() != eq.coeffs.size()) throw PreconditionError("vars and coeffs differ in length");
  const Shape s = shape_of(eq);
  const auto& vc = s.vertex_coeffs;
  const auto& ec = s.edge_coeffs;
  switch (eq.tag) {
    case FaceTag::nonneg_edge:
      if (!vc.empty() || ec.size() != 1 || ec.begin()->second == 0 || eq.rhs != 0) {
        throw PreconditionError("NONNEG-EDGE must read x_uv = 0");
      }
      return;
    case FaceTag::edge_eq: {
      if (vc.size() != 1 || ec.size() != 1 || eq.rhs != 0) throw PreconditionError("EDGE-EQ must read x_u - x_uv = 0");
      const auto& [u, cu] = *vc.begin();
      const auto& [e, ce] = *ec.begin();
      if ((cu != 1 && cu != -1) || ce != -cu || (e.first != u && e.second != u)) {
        throw PreconditionError("EDGE-EQ must read x_u - x_uv = 0 with u an endpoint of uv");
      }
      return;
    }
    case FaceTag::exclusive_or: {
      if (vc.size() != 2 || ec.size() != 1 || eq.rhs != 1) throw PreconditionError("XOR must read x_u + x_v - 2x_uv = 1");
      const auto& [e, ce] = *ec.begin();
      if (ce != -2 || vc.count(e.first) == 0 || vc.count(e.second) == 0 || vc.at(e.first) != 1 ||
          vc.at(e.second) != 1) {
        throw PreconditionError("XOR must read x_u + x_v - 2x_uv = 1");
      }
      return;
    }
    case FaceTag::one_of_three: {
      if (vc.size() != 3 || ec.size() != 3 || eq.rhs != 1) {
        throw PreconditionError("ONE-OF-THREE needs three vertices, their three edges and rhs 1");
      }
      std::vector<std::string> vs;
      for (const auto& [v, c] : vc) {
        if (c != 1) throw PreconditionError("ONE-OF-THREE vertex coefficients must be 1");
        vs.push_back(v);
      }
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j) {
          const auto it = ec.find({vs[i], vs[j]});
          if (it == ec.end() || it->second != -2) {
            throw PreconditionError("ONE-OF-THREE edge coefficients must be -2 on all three pairs");
          }
        }
      return;
    }
  }
}

}  // namespace

void validate_face_system(const Graph& g, const FaceSystem& fs) {
  for (std::size_t k = 0; k < fs.equations.size(); ++k) {
    const auto& eq = fs.equations[k];
    try {
      check_shape(eq);
      for (const auto& id : eq.vars) {
        if (!g.variable_position(id)) throw PreconditionError("variable " + id.str() + " is not in the graph");
      }
    } catch (const PreconditionError& e) {
      throw PreconditionError("ill-formed equation " + std::to_string(k) + " (" + to_string(eq.tag) + "): " + e.what());
    }
  }
}

LinearInequality underlying_inequality(const FaceEquation& eq) {
  check_shape(eq);
  switch (eq.tag) {
    case FaceTag::nonneg_edge: {
      const auto& e = eq.vars.front();
      return LinearInequality{{e}, {Rational(-1)}, Rational(0)};
    }
    case FaceTag::edge_eq: {
      const auto& vertex = eq.vars[0].is_vertex() ? eq.vars[0] : eq.vars[1];
      const auto& edge = eq.vars[0].is_vertex() ? eq.vars[1] : eq.vars[0];
      return LinearInequality{{edge, vertex}, {Rational(1), Rational(-1)}, Rational(0)};
    }
    case FaceTag::exclusive_or:
    case FaceTag::one_of_three:
      return LinearInequality{eq.vars, eq.coeffs, eq.rhs};
  }
  throw Error("unreachable");
}

namespace {

/// Vertex indices touched by a list of variables; throws for foreign ids.
std::vector<std::size_t> support(const Graph& g, const std::vector<VariableId>& vars) {
  std::set<std::size_t> vs;
  for (const auto& id : vars) {
    if (!g.variable_position(id)) throw PreconditionError("variable " + id.str() + " is not in the graph");
    vs.insert(g.require_vertex(id.first));
    if (id.is_edge()) vs.insert(g.require_vertex(id.second));
  }
  return {vs.begin(), vs.end()};
}

}  // namespace

bool check_valid_inequality(const Graph& g, const LinearInequality& ineq) {
  const auto vs = support(g, ineq.vars);
  if (vs.size() > kEnumerationLimit) throw LimitExceeded("inequality support exceeds the enumeration limit");
  std::vector<int> slot(g.vertex_count(), -1);
  for (std::size_t i = 0; i < vs.size(); ++i) slot[vs[i]] = static_cast<int>(i);
  struct Term {
    int a;
    int b;
    Rational c;
  };
  std::vector<Term> terms;
  for (std::size_t i = 0; i < ineq.vars.size(); ++i) {
    const auto& id = ineq.vars[i];
    const int a = slot[*g.vertex_index(id.first)];
    const int b = id.is_edge() ? slot[*g.vertex_index(id.second)] : a;
    terms.push_back(Term{a, b, ineq.coeffs.at(i)});
  }
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << vs.size()); ++s) {
    Rational lhs;
    for (const auto& t : terms) {
      if ((s >> t.a & 1U) && (s >> t.b & 1U)) lhs += t.c;
    }
    if (lhs > ineq.rhs) return false;
  }
  return true;
}

bool satisfies(const Graph& g, const CorVertex& v, const FaceEquation& eq) {
  Rational lhs;
  for (std::size_t i = 0; i < eq.vars.size(); ++i) {
    const auto pos = g.variable_position(eq.vars[i]);
    if (!pos) throw PreconditionError("variable " + eq.vars[i].str() + " is not in the graph");
    if (v.coordinates.at(*pos)) lhs += eq.coeffs[i];
  }
  return lhs == eq.rhs;
}

// --- enumeration ----------------------------------------------------------------------

namespace {

class FaceEnumerator {
 public:
  FaceEnumerator(const Graph& g, const FaceSystem& fs) : g_(g), value_(g.vertex_count(), -1), watch_(g.vertex_count()) {
    validate_face_system(g, fs);
    for (const auto& eq : fs.equations) {
      Compiled c;
      std::set<std::size_t> vs;
      for (std::size_t i = 0; i < eq.vars.size(); ++i) {
        const auto& id = eq.vars[i];
        const auto a = *g.vertex_index(id.first);
        const auto b = id.is_edge() ? *g.vertex_index(id.second) : a;
        c.terms.push_back(Term{a, b, eq.coeffs[i]});
        vs.insert(a);
        vs.insert(b);
      }
      c.rhs = eq.rhs;
      c.vertices.assign(vs.begin(), vs.end());
      for (const auto v : c.vertices) watch_[v].push_back(equations_.size());
      equations_.push_back(std::move(c));
    }
  }

  std::size_t run(const FaceSearch& search, const std::function<bool(const CorVertex&)>& visit) {
    visit_ = &visit;
    limit_ = search.limit;
    count_ = 0;
    stop_ = false;
    order_.clear();
    std::vector<char> placed(g_.vertex_count(), 0);
    for (const auto v : search.priority) {
      if (v >= g_.vertex_count()) throw PreconditionError("priority vertex out of range");
      if (!placed[v]) order_.push_back(v);
      placed[v] = 1;
    }
    for (std::size_t v = 0; v < g_.vertex_count(); ++v) {
      if (!placed[v]) order_.push_back(v);
    }

    std::vector<std::size_t> queue;
    bool ok = true;
    for (const auto& [v, x] : search.fixed) {
      if (v >= g_.vertex_count()) throw PreconditionError("fixed vertex out of range");
      if (value_[v] == -1) {
        assign(v, x ? 1 : 0, queue);
      } else if (value_[v] != (x ? 1 : 0)) {
        ok = false;
      }
    }
    // Equations that are unit (or fully fixed) before any branching.
    for (std::size_t k = 0; k < equations_.size() && ok; ++k) ok = examine(k, queue);
    ok = ok && propagate(queue);
    if (ok) descend(0);
    std::fill(value_.begin(), value_.end(), -1);
    trail_.clear();
    return count_;
  }

 private:
  struct Term {
    std::size_t a;
    std::size_t b;
    Rational coeff;
  };
  struct Compiled {
    std::vector<Term> terms;
    std::vector<std::size_t> vertices;
    Rational rhs;
  };

  bool holds(const Compiled& c) const {
    Rational lhs;
    for (const auto& t : c.terms) {
      if (value_[t.a] == 1 && value_[t.b] == 1) lhs += t.coeff;
    }
    return lhs == c.rhs;
  }

  void assign(std::size_t v, int x, std::vector<std::size_t>& queue) {
    value_[v] = static_cast<signed char>(x);
    trail_.push_back(v);
    queue.push_back(v);
  }

  /// Checks a complete equation or forces the value of its single free
  /// vertex. Returns false on conflict.
  bool examine(std::size_t k, std::vector<std::size_t>& queue) {
    const Compiled& c = equations_[k];
    std::size_t free_vertex = g_.vertex_count();
    std::size_t free_count = 0;
    for (const auto v : c.vertices) {
      if (value_[v] == -1) {
        free_vertex = v;
        ++free_count;
      }
    }
    if (free_count == 0) return holds(c);
    if (free_count > 1) return true;
    value_[free_vertex] = 0;
    const bool zero_ok = holds(c);
    value_[free_vertex] = 1;
    const bool one_ok = holds(c);
    value_[free_vertex] = -1;
    if (!zero_ok && !one_ok) return false;
    if (zero_ok != one_ok) assign(free_vertex, one_ok ? 1 : 0, queue);
    return true;
  }

  bool propagate(std::vector<std::size_t>& queue) {
    while (!queue.empty()) {
      const auto v = queue.back();
      queue.pop_back();
      for (const auto k : watch_[v]) {
        if (!examine(k, queue)) {
          queue.clear();
          return false;
        }
      }
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      value_[trail_.back()] = -1;
      trail_.pop_back();
    }
  }

  void descend(std::size_t pos) {
    while (pos < order_.size() && value_[order_[pos]] != -1) ++pos;
    if (pos == order_.size()) {
      std::vector<std::uint8_t> membership(value_.begin(), value_.end());
      ++count_;
      if (!(*visit_)(cor_vertex(g_, membership)) || (limit_ && count_ >= *limit_)) stop_ = true;
      return;
    }
    const auto v = order_[pos];
    std::vector<std::size_t> queue;
    for (int x = 0; x <= 1 && !stop_; ++x) {
      const auto mark = trail_.size();
      assign(v, x, queue);
      if (propagate(queue)) descend(pos + 1);
      undo(mark);
    }
  }

  const Graph& g_;
  std::vector<signed char> value_;
  std::vector<std::vector<std::size_t>> watch_;
  std::vector<Compiled> equations_;
  std::vector<std::size_t> trail_;
  std::vector<std::size_t> order_;
  const std::function<bool(const CorVertex&)>* visit_ = nullptr;
  std::optional<std::size_t> limit_;
  std::size_t count_ = 0;
  bool stop_ = false;
};

}  // namespace

std::size_t for_each_face_vertex(const Graph& g, const FaceSystem& fs, const FaceSearch& search,
                                 const std::function<bool(const CorVertex&)>& visit) {
  FaceEnumerator e(g, fs);
  return e.run(search, visit);
}

std::vector<CorVertex> restrict_to_face(const Graph& g, const FaceSystem& fs, const FaceSearch& search) {
  std::vector<CorVertex> out;
  for_each_face_vertex(g, fs, search, [&](const CorVertex& v) {
    out.push_back(v);
    return true;
  });
  return out;
}

}  // namespace corxc
