#include "robusthedge/lp.hpp"

#include <cassert>

#include "robusthedge/errors.hpp"

namespace robusthedge::lp {

const Bounds& LinearProgram::bound(std::size_t j) const {
  static const Bounds kNonnegative = Bounds::nonnegative();
  return bounds.empty() ? kNonnegative : bounds[j];
}

std::size_t LinearProgram::add_variable(Rational cost, Bounds b) {
  if (bounds.empty()) bounds.assign(objective.size(), Bounds::nonnegative());
  objective.push_back(std::move(cost));
  bounds.push_back(std::move(b));
  for (auto& row : constraints) row.coefficients.emplace_back(0);
  return objective.size() - 1;
}

void LinearProgram::add_constraint(Vec coefficients, Relation relation, Rational rhs) {
  coefficients.resize(objective.size());
  constraints.push_back({std::move(coefficients), relation, std::move(rhs)});
}

namespace {

// Original variable x_j = offset + sum(sign * s_col) over standard columns.
struct VariableMap {
  Rational offset;
  std::vector<std::pair<std::size_t, int>> columns;
};

// Standard form: min c.s, A s = b, s >= 0, b >= 0, plus the bookkeeping
// needed to map a basic solution back to the caller's variables and rows.
struct StandardForm {
  std::vector<VariableMap> variables;
  std::vector<Vec> rows;           // over all standard columns
  Vec rhs;
  Vec cost;
  std::vector<int> flip;           // +1 or -1 applied to the row
  std::vector<int> origin;         // original constraint index, or -1 for a bound row
  std::size_t columns = 0;
};

StandardForm to_standard(const LinearProgram& lp) {
  StandardForm sf;
  const std::size_t n = lp.num_variables();
  sf.variables.resize(n);

  struct PendingRow {
    std::vector<std::pair<std::size_t, Rational>> terms;
    Relation relation;
    Rational rhs;
    int origin;
  };
  std::vector<PendingRow> pending;

  std::size_t next = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const Bounds& b = lp.bound(j);
    auto& vm = sf.variables[j];
    if (b.lower) {
      vm.offset = *b.lower;
      vm.columns.push_back({next, 1});
      if (b.upper) {
        pending.push_back({{{next, Rational(1)}}, Relation::LessEqual, *b.upper - *b.lower, -1});
      }
      ++next;
    } else if (b.upper) {
      vm.offset = *b.upper;
      vm.columns.push_back({next++, -1});
    } else {
      vm.offset = 0;
      vm.columns.push_back({next++, 1});
      vm.columns.push_back({next++, -1});
    }
  }
  const std::size_t structural = next;

  std::vector<PendingRow> rows;
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    const auto& c = lp.constraints[i];
    if (c.coefficients.size() != n) {
      throw ShapeMismatch("constraint row " + std::to_string(i) + " has width " +
                          std::to_string(c.coefficients.size()) + ", expected " + std::to_string(n));
    }
    PendingRow row{{}, c.relation, c.rhs, static_cast<int>(i)};
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(c.coefficients[j]) == 0) continue;
      row.rhs -= c.coefficients[j] * sf.variables[j].offset;
      for (auto [col, sign] : sf.variables[j].columns) {
        row.terms.push_back({col, sign * c.coefficients[j]});
      }
    }
    rows.push_back(std::move(row));
  }
  for (auto& p : pending) rows.push_back(std::move(p));

  std::size_t slacks = 0;
  for (const auto& r : rows) {
    if (r.relation != Relation::Equal) ++slacks;
  }
  sf.columns = structural + slacks;

  sf.cost.assign(sf.columns, Rational(0));
  const bool maximize = lp.sense == Sense::Maximize;
  for (std::size_t j = 0; j < n; ++j) {
    const Rational c = maximize ? Rational(-lp.objective[j]) : lp.objective[j];
    for (auto [col, sign] : sf.variables[j].columns) sf.cost[col] += sign * c;
  }

  std::size_t slack = structural;
  for (auto& r : rows) {
    Vec dense(sf.columns, Rational(0));
    for (auto& [col, v] : r.terms) dense[col] += v;
    if (r.relation == Relation::LessEqual) dense[slack++] = 1;
    if (r.relation == Relation::GreaterEqual) dense[slack++] = -1;
    int flip = 1;
    if (sgn(r.rhs) < 0) {
      flip = -1;
      for (auto& v : dense) v = -v;
      r.rhs = -r.rhs;
    }
    sf.rows.push_back(std::move(dense));
    sf.rhs.push_back(r.rhs);
    sf.flip.push_back(flip);
    sf.origin.push_back(r.origin);
  }
  return sf;
}

class Tableau {
 public:
  // Columns: [standard columns | one artificial per row | rhs].
  explicit Tableau(const StandardForm& sf)
      : rows_(sf.rows.size()), structural_(sf.columns), width_(sf.columns + sf.rows.size() + 1) {
    tab_.assign(rows_, Vec(width_, Rational(0)));
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < structural_; ++j) tab_[i][j] = sf.rows[i][j];
      tab_[i][structural_ + i] = 1;
      tab_[i][width_ - 1] = sf.rhs[i];
      basis_.push_back(structural_ + i);
    }
    alive_.assign(rows_, true);
  }

  bool artificial(std::size_t col) const { return col >= structural_ && col < width_ - 1; }
  std::size_t rhs_col() const { return width_ - 1; }

  void pivot(std::size_t r, std::size_t e) {
    ++pivots_;
    const Rational p = tab_[r][e];
    for (auto& v : tab_[r]) v /= p;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r || !alive_[i] || sgn(tab_[i][e]) == 0) continue;
      const Rational f = tab_[i][e];
      for (std::size_t j = 0; j < width_; ++j) {
        if (sgn(tab_[r][j]) != 0) tab_[i][j] -= f * tab_[r][j];
      }
    }
    if (sgn(obj_[e]) != 0) {
      const Rational f = obj_[e];
      for (std::size_t j = 0; j < width_; ++j) {
        if (sgn(tab_[r][j]) != 0) obj_[j] -= f * tab_[r][j];
      }
    }
    basis_[r] = e;
  }

  // Reduced-cost row for the given column costs (artificials priced by `art_cost`).
  void price(const Vec& cost, const Rational& art_cost) {
    obj_.assign(width_, Rational(0));
    for (std::size_t j = 0; j < width_ - 1; ++j) obj_[j] = artificial(j) ? art_cost : cost[j];
    for (std::size_t i = 0; i < rows_; ++i) {
      if (!alive_[i]) continue;
      const Rational cb = obj_cost(basis_[i], cost, art_cost);
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j < width_; ++j) obj_[j] -= cb * tab_[i][j];
    }
  }

  // Bland's rule. Returns false on unboundedness and stores the entering column.
  enum class Step { Optimal, Pivoted, Unbounded };
  Step step(bool allow_artificial, std::size_t max_pivots) {
    std::size_t e = width_;
    for (std::size_t j = 0; j + 1 < width_; ++j) {
      if (!allow_artificial && artificial(j)) continue;
      if (sgn(obj_[j]) < 0) {
        e = j;
        break;
      }
    }
    if (e == width_) return Step::Optimal;
    std::size_t leave = rows_;
    Rational best;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (!alive_[i] || sgn(tab_[i][e]) <= 0) continue;
      Rational ratio = tab_[i][rhs_col()] / tab_[i][e];
      if (leave == rows_ || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == rows_) {
      entering_ = e;
      return Step::Unbounded;
    }
    if (pivots_ >= max_pivots) throw CapacityError("simplex pivot budget exhausted");
    pivot(leave, e);
    return Step::Pivoted;
  }

  // After phase one: pivot zero-level artificials out, or drop redundant rows.
  void expel_artificials() {
    for (std::size_t i = 0; i < rows_; ++i) {
      if (!alive_[i] || !artificial(basis_[i])) continue;
      std::size_t e = width_;
      for (std::size_t j = 0; j < structural_; ++j) {
        if (sgn(tab_[i][j]) != 0) {
          e = j;
          break;
        }
      }
      if (e == width_) {
        alive_[i] = false;
      } else {
        pivot(i, e);
      }
    }
  }

  Rational objective_value() const { return -obj_[rhs_col()]; }
  const Vec& reduced_costs() const { return obj_; }
  std::size_t entering() const { return entering_; }
  std::size_t pivots() const { return pivots_; }
  std::size_t structural() const { return structural_; }
  std::size_t rows() const { return rows_; }
  bool alive(std::size_t i) const { return alive_[i]; }
  std::size_t basic(std::size_t i) const { return basis_[i]; }
  const Rational& at(std::size_t i, std::size_t j) const { return tab_[i][j]; }

 private:
  Rational obj_cost(std::size_t col, const Vec& cost, const Rational& art_cost) const {
    return artificial(col) ? art_cost : cost[col];
  }

  std::size_t rows_;
  std::size_t structural_;
  std::size_t width_;
  std::vector<Vec> tab_;
  Vec obj_;
  std::vector<std::size_t> basis_;
  std::vector<bool> alive_;
  std::size_t entering_ = 0;
  std::size_t pivots_ = 0;
};

Vec map_back(const StandardForm& sf, const Vec& standard, bool with_offset) {
  Vec x(sf.variables.size());
  for (std::size_t j = 0; j < sf.variables.size(); ++j) {
    Rational v = with_offset ? sf.variables[j].offset : Rational(0);
    for (auto [col, sign] : sf.variables[j].columns) v += sign * standard[col];
    x[j] = v;
  }
  return x;
}

}  // namespace

LpOutcome solve(const LinearProgram& lp, std::size_t max_pivots) {
  if (!lp.bounds.empty() && lp.bounds.size() != lp.num_variables()) {
    throw ShapeMismatch("bounds size does not match the number of variables");
  }
  const StandardForm sf = to_standard(lp);
  Tableau t(sf);
  LpOutcome out;

  // Phase one: minimize the sum of artificials.
  t.price(Vec(sf.columns, Rational(0)), Rational(1));
  while (t.step(true, max_pivots) == Tableau::Step::Pivoted) {
  }
  if (sgn(t.objective_value()) > 0) {
    out.status = Status::Infeasible;
    out.pivots = t.pivots();
    return out;
  }
  t.expel_artificials();

  // Phase two.
  t.price(sf.cost, Rational(0));
  Tableau::Step s;
  while ((s = t.step(false, max_pivots)) == Tableau::Step::Pivoted) {
  }
  out.pivots = t.pivots();

  if (s == Tableau::Step::Unbounded) {
    const std::size_t e = t.entering();
    Vec dir(sf.columns, Rational(0));
    dir[e] = 1;
    for (std::size_t i = 0; i < t.rows(); ++i) {
      if (t.alive(i) && t.basic(i) < sf.columns) dir[t.basic(i)] = -t.at(i, e);
    }
    out.status = Status::Unbounded;
    out.ray = map_back(sf, dir, false);
    return out;
  }

  Vec standard(sf.columns, Rational(0));
  for (std::size_t i = 0; i < t.rows(); ++i) {
    if (t.alive(i) && t.basic(i) < sf.columns) standard[t.basic(i)] = t.at(i, t.rhs_col());
  }
  out.status = Status::Optimal;
  out.primal = map_back(sf, standard, true);
  out.value = dot(lp.objective, out.primal);

  // The artificial columns carry B^-1, so with zero artificial cost their
  // reduced costs are -y for the standard-form rows.
  const bool maximize = lp.sense == Sense::Maximize;
  out.duals.assign(lp.constraints.size(), Rational(0));
  const Vec& d = t.reduced_costs();
  for (std::size_t i = 0; i < sf.rows.size(); ++i) {
    if (sf.origin[i] < 0) continue;
    Rational y = -d[t.structural() + i] * sf.flip[i];
    out.duals[sf.origin[i]] = maximize ? Rational(-y) : y;
  }
  return out;
}

std::string check_optimality(const LinearProgram& lp, const LpOutcome& outcome) {
  if (outcome.status != Status::Optimal) return "outcome is not optimal";
  const std::size_t n = lp.num_variables();
  const auto& x = outcome.primal;
  if (x.size() != n) return "primal has wrong size";
  if (outcome.duals.size() != lp.constraints.size()) return "duals have wrong size";
  const bool maximize = lp.sense == Sense::Maximize;

  for (std::size_t j = 0; j < n; ++j) {
    const Bounds& b = lp.bound(j);
    if (b.lower && x[j] < *b.lower) return "variable " + std::to_string(j) + " below its lower bound";
    if (b.upper && x[j] > *b.upper) return "variable " + std::to_string(j) + " above its upper bound";
  }

  Vec reduced(n);
  for (std::size_t j = 0; j < n; ++j) reduced[j] = maximize ? Rational(-lp.objective[j]) : lp.objective[j];
  Rational dual_value = 0;
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    const auto& row = lp.constraints[i];
    const Rational ax = dot(row.coefficients, x);
    const Rational y = maximize ? Rational(-outcome.duals[i]) : outcome.duals[i];
    const std::string tag = "row " + std::to_string(i);
    switch (row.relation) {
      case Relation::LessEqual:
        if (ax > row.rhs) return tag + " violated";
        if (sgn(y) > 0) return tag + " has a dual of the wrong sign";
        break;
      case Relation::GreaterEqual:
        if (ax < row.rhs) return tag + " violated";
        if (sgn(y) < 0) return tag + " has a dual of the wrong sign";
        break;
      case Relation::Equal:
        if (ax != row.rhs) return tag + " violated";
        break;
    }
    if (sgn(y) != 0 && ax != row.rhs) return tag + " breaks complementary slackness";
    dual_value += y * row.rhs;
    for (std::size_t j = 0; j < n; ++j) reduced[j] -= y * row.coefficients[j];
  }
  for (std::size_t j = 0; j < n; ++j) {
    const Bounds& b = lp.bound(j);
    const std::string tag = "variable " + std::to_string(j);
    if (sgn(reduced[j]) > 0 && !(b.lower && x[j] == *b.lower)) return tag + " breaks reduced-cost slackness";
    if (sgn(reduced[j]) < 0 && !(b.upper && x[j] == *b.upper)) return tag + " breaks reduced-cost slackness";
    dual_value += reduced[j] * x[j];
  }
  const Rational primal_value = dot(lp.objective, x);
  if (primal_value != outcome.value) return "reported value differs from c.x";
  if ((maximize ? Rational(-dual_value) : dual_value) != primal_value) return "duality gap is nonzero";
  return {};
}

bool check_ray(const LinearProgram& lp, const Vec& ray) {
  if (ray.size() != lp.num_variables()) return false;
  for (const auto& row : lp.constraints) {
    const Rational a = dot(row.coefficients, ray);
    if (row.relation == Relation::LessEqual && sgn(a) > 0) return false;
    if (row.relation == Relation::GreaterEqual && sgn(a) < 0) return false;
    if (row.relation == Relation::Equal && sgn(a) != 0) return false;
  }
  for (std::size_t j = 0; j < ray.size(); ++j) {
    const Bounds& b = lp.bound(j);
    if (b.lower && sgn(ray[j]) < 0) return false;
    if (b.upper && sgn(ray[j]) > 0) return false;
  }
  const int improve = sgn(dot(lp.objective, ray));
  return lp.sense == Sense::Minimize ? improve < 0 : improve > 0;
}

std::optional<Vec> strictly_feasible_point(const std::vector<Constraint>& rows,
                                           const std::vector<bool>& strict,
                                           std::size_t num_variables) {
  LinearProgram lp;
  lp.sense = Sense::Maximize;
  for (std::size_t j = 0; j < num_variables; ++j) lp.add_variable(0, Bounds::free());
  const std::size_t slack = lp.add_variable(1, Bounds{std::nullopt, Rational(1)});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Vec coeffs = rows[i].coefficients;
    coeffs.resize(num_variables + 1);
    if (i < strict.size() && strict[i]) {
      if (rows[i].relation != Relation::GreaterEqual) {
        throw ShapeMismatch("only >= rows can be required strict");
      }
      coeffs[slack] = -1;
    }
    lp.add_constraint(std::move(coeffs), rows[i].relation, rows[i].rhs);
  }
  const LpOutcome out = solve(lp);
  if (out.status != Status::Optimal || sgn(out.value) <= 0) return std::nullopt;
  return Vec(out.primal.begin(), out.primal.begin() + static_cast<std::ptrdiff_t>(num_variables));
}

}  // namespace robusthedge::lp
