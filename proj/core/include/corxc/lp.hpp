#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corxc/rational.hpp"

namespace corxc {

struct LinearTerm {
  std::size_t variable = 0;
  Rational coefficient;
};

struct EqualityConstraint {
  std::string name;
  std::vector<LinearTerm> terms;
  Rational rhs;
};

/// maximize objective·x  subject to  A x = b,  x >= 0.
///
/// Inequalities are expressed by the caller with explicit slack variables.
struct LinearProgram {
  std::vector<std::string> variables;
  std::vector<EqualityConstraint> constraints;
  std::vector<LinearTerm> objective;

  std::size_t add_variable(std::string name);
  /// Throws InvalidArgument when a term references an undeclared variable,
  /// a variable appears twice in one row, or names are empty or repeated.
  void validate() const;
};

enum class LpStatus { optimal, infeasible, unbounded };

std::string to_string(LpStatus status);

struct LpOutcome {
  LpStatus status = LpStatus::infeasible;
  Rational value;                ///< set when optimal
  std::vector<Rational> point;   ///< set when optimal, one entry per variable
  std::size_t pivots = 0;
};

/// True iff the point satisfies every equality and x >= 0 exactly.
bool is_feasible(const LinearProgram& lp, std::span<const Rational> point);
Rational evaluate(std::span<const LinearTerm> objective, std::span<const Rational> point);

/// Two-phase primal simplex on a dense exact-rational tableau with Bland's
/// smallest-index rule for both the entering and the leaving variable.
///
/// Construction runs phase 1 (artificial variables, drive-to-zero
/// objective) once; maximize() then runs phase 2 from that feasible basis
/// for any objective, so several objectives over the same constraints share
/// the phase-1 work. Redundant equality rows are dropped after phase 1.
class SimplexSolver {
 public:
  explicit SimplexSolver(const LinearProgram& lp);

  bool feasible() const { return feasible_; }
  std::size_t phase_one_pivots() const { return phase_one_pivots_; }

  /// Phase 2. The optimal point is checked against every original
  /// constraint before it is returned.
  LpOutcome maximize(std::span<const LinearTerm> objective) const;

 private:
  struct Tableau {
    std::vector<std::vector<Rational>> rows;  // each row: columns..., rhs
    std::vector<std::size_t> basis;
    std::vector<Rational> reduced;  // reduced costs; last entry is -objective value
  };

  static bool run(Tableau& t, std::size_t columns, std::size_t& pivots);
  static void pivot(Tableau& t, std::size_t row, std::size_t col, std::size_t columns);

  LinearProgram lp_;
  std::size_t columns_ = 0;
  Tableau tableau_;
  bool feasible_ = false;
  std::size_t phase_one_pivots_ = 0;
};

LpOutcome solve(const LinearProgram& lp);

/// CPLEX LP-file text: Maximize / Subject To / Bounds / End. Each row and
/// the objective are scaled by the lcm of their denominators so that every
/// coefficient is an integer. Variables are declared in program order.
std::string to_lp_file(const LinearProgram& lp);

/// Reads back the subset of the LP format that to_lp_file writes (integer
/// or p/q coefficients, '=' rows, nonnegative bounds).
LinearProgram parse_lp_file(std::string_view text);

}  // namespace corxc
