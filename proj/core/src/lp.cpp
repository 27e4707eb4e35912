#include "corxc/lp.hpp"

#include <cctype>
#include <set>

#include "corxc/error.hpp"

namespace corxc {

std::size_t LinearProgram::add_variable(std::string name) {
  variables.push_back(std::move(name));
  return variables.size() - 1;
}

namespace {

bool valid_name(const std::string& name) {
  if (name.empty() || std::isdigit(static_cast<unsigned char>(name.front())) || name.front() == '.') return false;
  for (const char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.') return false;
  }
  return true;
}

void check_terms(const std::vector<LinearTerm>& terms, std::size_t n, const std::string& where) {
  std::set<std::size_t> seen;
  for (const auto& t : terms) {
    if (t.variable >= n) throw InvalidArgument(where + " references undeclared variable " + std::to_string(t.variable));
    if (!seen.insert(t.variable).second) throw InvalidArgument(where + " mentions a variable twice");
  }
}

}  // namespace

void LinearProgram::validate() const {
  std::set<std::string> names;
  for (const auto& v : variables) {
    if (!valid_name(v)) throw InvalidArgument("invalid variable name '" + v + "'");
    if (!names.insert(v).second) throw InvalidArgument("duplicate variable name '" + v + "'");
  }
  std::set<std::string> rows;
  for (const auto& c : constraints) {
    if (!valid_name(c.name)) throw InvalidArgument("invalid constraint name '" + c.name + "'");
    if (!rows.insert(c.name).second) throw InvalidArgument("duplicate constraint name '" + c.name + "'");
    check_terms(c.terms, variables.size(), "constraint " + c.name);
  }
  check_terms(objective, variables.size(), "objective");
}

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal:
      return "optimal";
    case LpStatus::infeasible:
      return "infeasible";
    case LpStatus::unbounded:
      return "unbounded";
  }
  return "?";
}

bool is_feasible(const LinearProgram& lp, std::span<const Rational> point) {
  if (point.size() != lp.variables.size()) return false;
  for (const auto& x : point) {
    if (x < 0) return false;
  }
  for (const auto& c : lp.constraints) {
    if (evaluate(c.terms, point) != c.rhs) return false;
  }
  return true;
}

Rational evaluate(std::span<const LinearTerm> objective, std::span<const Rational> point) {
  Rational total;
  for (const auto& t : objective) total += t.coefficient * point[t.variable];
  return total;
}

// --- simplex ------------------------------------------------------------------

void SimplexSolver::pivot(Tableau& t, std::size_t row, std::size_t col, std::size_t columns) {
  auto& pr = t.rows[row];
  const Rational p = pr[col];
  std::vector<std::size_t> nz;
  for (std::size_t k = 0; k <= columns; ++k) {
    if (pr[k] != 0) {
      pr[k] /= p;
      nz.push_back(k);
    }
  }
  Rational f;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (i == row || t.rows[i][col] == 0) continue;
    auto& r = t.rows[i];
    f = r[col];
    for (const auto k : nz) r[k] -= f * pr[k];
  }
  if (t.reduced[col] != 0) {
    f = t.reduced[col];
    for (const auto k : nz) t.reduced[k] -= f * pr[k];
  }
  t.basis[row] = col;
}

bool SimplexSolver::run(Tableau& t, std::size_t columns, std::size_t& pivots) {
  Rational best_ratio, ratio;
  for (;;) {
    // Bland: lowest-index improving column enters.
    std::size_t enter = columns;
    for (std::size_t j = 0; j < columns; ++j) {
      if (t.reduced[j] > 0) {
        enter = j;
        break;
      }
    }
    if (enter == columns) return true;
    // Minimum ratio; ties go to the lowest-index basic variable.
    std::size_t leave = t.rows.size();
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const auto& a = t.rows[i][enter];
      if (a <= 0) continue;
      ratio = t.rows[i][columns] / a;
      if (leave == t.rows.size() || ratio < best_ratio ||
          (ratio == best_ratio && t.basis[i] < t.basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == t.rows.size()) return false;
    pivot(t, leave, enter, columns);
    ++pivots;
  }
}

SimplexSolver::SimplexSolver(const LinearProgram& lp) : lp_(lp) {
  lp_.validate();
  const std::size_t n = lp_.variables.size();
  const std::size_t m = lp_.constraints.size();
  const std::size_t cols = n + m;

  Tableau t;
  t.rows.assign(m, std::vector<Rational>(cols + 1));
  t.basis.resize(m);
  t.reduced.assign(cols + 1, Rational(0));
  for (std::size_t i = 0; i < m; ++i) {
    const auto& c = lp_.constraints[i];
    const bool flip = c.rhs < 0;
    auto& row = t.rows[i];
    for (const auto& term : c.terms) row[term.variable] = flip ? Rational(-term.coefficient) : term.coefficient;
    row[n + i] = 1;
    row[cols] = flip ? Rational(-c.rhs) : c.rhs;
    t.basis[i] = n + i;
    // Phase-1 objective: maximise -(sum of artificials).
    for (std::size_t j = 0; j < n; ++j) {
      if (row[j] != 0) t.reduced[j] += row[j];
    }
    t.reduced[cols] += row[cols];
  }
  run(t, cols, phase_one_pivots_);
  // reduced.back() holds the remaining artificial mass.
  if (t.reduced[cols] != 0) {
    feasible_ = false;
    return;
  }
  feasible_ = true;

  // Drive artificials out of the basis; rows where that is impossible are
  // linear combinations of the others and are dropped.
  std::vector<char> redundant(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    if (t.basis[i] < n) continue;
    std::size_t col = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (t.rows[i][j] != 0) {
        col = j;
        break;
      }
    }
    if (col == n) {
      redundant[i] = 1;
    } else {
      pivot(t, i, col, cols);
      ++phase_one_pivots_;
    }
  }
  tableau_.rows.clear();
  tableau_.basis.clear();
  for (std::size_t i = 0; i < m; ++i) {
    if (redundant[i]) continue;
    auto& row = t.rows[i];
    std::vector<Rational> kept(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(n));
    kept.push_back(row[cols]);
    tableau_.rows.push_back(std::move(kept));
    tableau_.basis.push_back(t.basis[i]);
  }
  columns_ = n;
}

LpOutcome SimplexSolver::maximize(std::span<const LinearTerm> objective) const {
  LpOutcome out;
  if (!feasible_) {
    out.status = LpStatus::infeasible;
    return out;
  }
  LinearProgram check = lp_;
  check.objective.assign(objective.begin(), objective.end());
  check.validate();

  std::vector<Rational> cost(columns_);
  for (const auto& term : objective) cost[term.variable] = term.coefficient;

  Tableau t = tableau_;
  t.reduced.assign(columns_ + 1, Rational(0));
  for (std::size_t j = 0; j < columns_; ++j) t.reduced[j] = cost[j];
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& cb = cost[t.basis[i]];
    if (cb == 0) continue;
    const auto& row = t.rows[i];
    for (std::size_t k = 0; k <= columns_; ++k) {
      if (row[k] != 0) t.reduced[k] -= cb * row[k];
    }
  }
  if (!run(t, columns_, out.pivots)) {
    out.status = LpStatus::unbounded;
    return out;
  }
  out.status = LpStatus::optimal;
  out.point.assign(columns_, Rational(0));
  for (std::size_t i = 0; i < t.rows.size(); ++i) out.point[t.basis[i]] = t.rows[i][columns_];
  out.value = evaluate(objective, out.point);
  if (!is_feasible(lp_, out.point) || out.value != -t.reduced[columns_]) {
    throw Error("internal: simplex returned a point that fails exact verification");
  }
  return out;
}

LpOutcome solve(const LinearProgram& lp) {
  SimplexSolver solver(lp);
  auto out = solver.maximize(lp.objective);
  out.pivots += solver.phase_one_pivots();
  return out;
}

}  // namespace corxc
