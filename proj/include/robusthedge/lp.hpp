#pragma once

#include <optional>
#include <string>
#include <vector>

#include "robusthedge/rational.hpp"

namespace robusthedge::lp {

enum class Sense { Minimize, Maximize };
enum class Relation { LessEqual, Equal, GreaterEqual };
enum class Status { Optimal, Infeasible, Unbounded };

struct Constraint {
  Vec coefficients;
  Relation relation = Relation::GreaterEqual;
  Rational rhs;
};

struct Bounds {
  std::optional<Rational> lower;
  std::optional<Rational> upper;

  static Bounds free() { return {}; }
  static Bounds nonnegative() { return {Rational(0), std::nullopt}; }
  static Bounds between(Rational lo, Rational hi) { return {std::move(lo), std::move(hi)}; }
};

/// Dense LP over exact rationals. Every constraint row must have
/// objective.size() coefficients; `bounds` is either empty (all variables
/// nonnegative) or one entry per variable.
struct LinearProgram {
  Sense sense = Sense::Minimize;
  Vec objective;
  std::vector<Constraint> constraints;
  std::vector<Bounds> bounds;

  std::size_t num_variables() const { return objective.size(); }
  const Bounds& bound(std::size_t j) const;

  /// Appends a variable (existing rows get a zero coefficient). Returns its index.
  std::size_t add_variable(Rational cost, Bounds b);
  void add_constraint(Vec coefficients, Relation relation, Rational rhs);
};

/// Result of solve(). On Optimal, `duals` has one multiplier per constraint
/// with the sign convention of the problem's sense: for a minimization, >=
/// rows carry y >= 0 and <= rows y <= 0 (reversed for maximization). On
/// Unbounded, `ray` is a direction of recession along which the objective
/// improves without bound.
struct LpOutcome {
  Status status = Status::Infeasible;
  Rational value;
  Vec primal;
  Vec duals;
  Vec ray;
  std::size_t pivots = 0;
};

/// Two-phase primal simplex with Bland's rule. Deterministic. Throws
/// CapacityError when more than `max_pivots` pivots are needed.
LpOutcome solve(const LinearProgram& lp, std::size_t max_pivots = 200000);

/// Re-checks an Optimal outcome in exact arithmetic: primal feasibility, dual
/// sign conditions, complementary slackness and equality of the primal and
/// dual objective values. Returns an empty string on success, otherwise a
/// description of the first violated condition.
std::string check_optimality(const LinearProgram& lp, const LpOutcome& outcome);

/// Checks that `ray` is a recession direction of the feasible set that
/// strictly improves the objective.
bool check_ray(const LinearProgram& lp, const Vec& ray);

/// Finds x with every row satisfied and the rows in `strict` satisfied with
/// strict inequality (only >= rows may be strict). Maximizes a common slack
/// capped at 1; nullopt iff that maximum is <= 0 or the rows are infeasible.
std::optional<Vec> strictly_feasible_point(const std::vector<Constraint>& rows,
                                           const std::vector<bool>& strict,
                                           std::size_t num_variables);

}  // namespace robusthedge::lp
