#include "robusthedge/duality.hpp"

#include "robusthedge/arbitrage.hpp"

namespace robusthedge {

Rational MartingaleMeasure::expectation(const Claim& claim) const {
  Rational e = 0;
  for (const auto& [leaf, w] : leaf_weights) {
    if (sgn(w) != 0) e += w * claim.at(leaf);
  }
  return e;
}

namespace {

bool is_prefix(const Path& prefix, const Path& path) {
  return prefix.size() <= path.size() && std::equal(prefix.begin(), prefix.end(), path.begin());
}

MartingaleMeasure measure_from(const MarketModel& model, const std::vector<Path>& leaves, const Vec& x) {
  MartingaleMeasure m;
  for (const auto& leaf : model.lattice.leaves()) m.leaf_weights[leaf] = 0;
  for (std::size_t j = 0; j < leaves.size(); ++j) m.leaf_weights[leaves[j]] = x[j];
  return m;
}

}  // namespace

lp::LinearProgram martingale_program(const MarketModel& model, const ReachableTree& tree, const Claim* claim) {
  const auto leaves = leaves_of(model, tree);
  lp::LinearProgram prog;
  prog.sense = lp::Sense::Maximize;
  for (const auto& leaf : leaves) prog.add_variable(claim ? claim->at(leaf) : Rational(0), lp::Bounds::nonnegative());
  prog.add_constraint(Vec(leaves.size(), Rational(1)), lp::Relation::Equal, 1);
  for (const auto& node : internal_nodes_of(model, tree)) {
    const std::size_t depth = node.size();
    for (int i = 0; i < model.assets; ++i) {
      Vec row(leaves.size(), Rational(0));
      for (std::size_t j = 0; j < leaves.size(); ++j) {
        if (!is_prefix(node, leaves[j])) continue;
        row[j] = model.increment(node, leaves[j][depth])[i];
      }
      if (!is_zero(row)) prog.add_constraint(std::move(row), lp::Relation::Equal, 0);
    }
  }
  return prog;
}

std::string check_martingale(const MarketModel& model, const MartingaleMeasure& m, const ReachableTree& tree) {
  const auto& lat = model.lattice;
  std::map<Path, Rational> mass;
  Rational total = 0;
  for (const auto& leaf : lat.leaves()) {
    auto it = m.leaf_weights.find(leaf);
    if (it == m.leaf_weights.end()) return "no weight at leaf " + lat.key(leaf);
    if (sgn(it->second) < 0) return "negative weight at leaf " + lat.key(leaf);
    if (sgn(it->second) != 0 && !tree.contains(leaf)) return "weight outside the reachable tree at " + lat.key(leaf);
    mass[leaf] = it->second;
    total += it->second;
  }
  if (total != 1) return "weights sum to " + to_string(total);
  for (int t = lat.horizon() - 1; t >= 0; --t) {
    for (const auto& node : lat.nodes_at(t)) {
      Rational node_mass = 0;
      Vec drift = zeros(model.assets);
      for (int o = 0; o < lat.arity(t); ++o) {
        Path child = node;
        child.push_back(o);
        const Rational& cm = mass.at(child);
        node_mass += cm;
        if (sgn(cm) == 0) continue;
        const Vec inc = model.increment(node, o);
        for (int i = 0; i < model.assets; ++i) drift[i] += cm * inc[i];
      }
      if (!is_zero(drift)) return "conditional drift " + to_string(drift) + " at node \"" + lat.key(node) + "\"";
      mass[node] = node_mass;
    }
  }
  return {};
}

DualResult dual_sup_on(const MarketModel& model, const ReachableTree& tree, const Claim& claim) {
  const auto prog = martingale_program(model, tree, &claim);
  const auto out = lp::solve(prog);
  if (out.status == lp::Status::Infeasible) throw InfeasiblePolytope("no martingale measure on the given tree");
  if (out.status != lp::Status::Optimal) throw InfeasiblePolytope("martingale program is unbounded");
  return {out.value, measure_from(model, leaves_of(model, tree), out.primal)};
}

DualResult dual_sup(const MarketModel& model, const Claim& claim) {
  const NaVerdict na = global_na_qs(model);
  if (!na.holds) {
    throw InfeasiblePolytope("NA(Q) fails at node \"" + model.lattice.key(*na.node) +
                             "\"; no martingale measure dominates the reachable tree");
  }
  return dual_sup_on(model, reachable(model), claim);
}

MartingaleMeasure full_support_martingale_on(const MarketModel& model, const ReachableTree& tree) {
  const auto prog = martingale_program(model, tree, nullptr);
  const std::size_t n = prog.num_variables();
  std::vector<lp::Constraint> rows = prog.constraints;
  std::vector<bool> strict(rows.size(), false);
  for (std::size_t j = 0; j < n; ++j) {
    Vec e(n, Rational(0));
    e[j] = 1;
    rows.push_back({std::move(e), lp::Relation::GreaterEqual, Rational(0)});
    strict.push_back(true);
  }
  auto x = lp::strictly_feasible_point(rows, strict, n);
  if (!x) throw NoPoint("no martingale measure charges every reachable leaf");
  return measure_from(model, leaves_of(model, tree), *x);
}

MartingaleMeasure full_support_martingale(const MarketModel& model) {
  return full_support_martingale_on(model, reachable(model));
}

MartingaleMeasure perturb(const MartingaleMeasure& m, const MartingaleMeasure& m_hat, int n) {
  if (n < 1) throw BadParameter("perturbation index must be at least 1");
  const Rational a(1, static_cast<unsigned long>(n));
  MartingaleMeasure out;
  for (const auto& [leaf, w] : m.leaf_weights) out.leaf_weights[leaf] = (1 - a) * w + a * m_hat.leaf_weights.at(leaf);
  return out;
}

EquivalenceEvidence dual_sup_equivalent(const MarketModel& model, const Claim& claim, const std::vector<int>& ns) {
  EquivalenceEvidence ev;
  const DualResult sup = dual_sup(model, claim);
  ev.value = sup.value;
  ev.maximizer = sup.measure;
  ev.full_support = full_support_martingale(model);
  ev.full_support_expectation = ev.full_support.expectation(claim);
  ev.constant = ev.value - ev.full_support_expectation;
  ev.holds = sgn(ev.constant) >= 0;
  for (int n : ns) {
    GapRecord g;
    g.n = n;
    g.expectation = perturb(ev.maximizer, ev.full_support, n).expectation(claim);
    g.gap = ev.value - g.expectation;
    g.law_holds = g.gap == ev.constant / n && sgn(g.gap) >= 0;
    ev.holds = ev.holds && g.law_holds;
    ev.gaps.push_back(std::move(g));
  }
  return ev;
}

}  // namespace robusthedge
