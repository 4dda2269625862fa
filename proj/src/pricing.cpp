#include "robusthedge/pricing.hpp"

#include <algorithm>
#include <functional>

#include "robusthedge/lp.hpp"

namespace robusthedge {

std::string to_string(PriceSemantics s) {
  switch (s) {
    case PriceSemantics::QuasiSure:
      return "quasi_sure";
    case PriceSemantics::MonoPrior:
      return "mono_prior";
    case PriceSemantics::Lower:
      return "lower";
  }
  return "unknown";
}

OneStepHedge one_step_superhedge(const std::vector<Vec>& points, const std::vector<Rational>& continuation) {
  if (points.empty()) throw ShapeMismatch("one-step superhedge needs a nonempty support");
  if (points.size() != continuation.size()) throw ShapeMismatch("one continuation value per support point");
  const std::size_t d = points.front().size();
  lp::LinearProgram prog;
  prog.add_variable(1, lp::Bounds::free());
  for (std::size_t i = 0; i < d; ++i) prog.add_variable(0, lp::Bounds::free());
  for (std::size_t j = 0; j < points.size(); ++j) {
    Vec row{Rational(1)};
    row.insert(row.end(), points[j].begin(), points[j].end());
    prog.add_constraint(std::move(row), lp::Relation::GreaterEqual, continuation[j]);
  }
  const auto out = lp::solve(prog);
  if (out.status == lp::Status::Unbounded) throw UnboundedBelow("one-step superhedging LP is unbounded below");
  if (out.status != lp::Status::Optimal) throw ShapeMismatch("one-step superhedging LP is infeasible");
  return {out.primal[0], Vec(out.primal.begin() + 1, out.primal.end())};
}

namespace {

// Continuation value per support point: the largest value among the charged
// children that share that increment.
std::vector<Rational> continuation_of(const SupportSet& s, const Path& node, const std::map<Path, Rational>& values) {
  std::vector<std::optional<Rational>> best(s.points.size());
  for (std::size_t o = 0; o < s.outcome_point.size(); ++o) {
    if (!s.outcome_point[o]) continue;
    Path child = node;
    child.push_back(static_cast<int>(o));
    const Rational& v = values.at(child);
    auto& slot = best[*s.outcome_point[o]];
    if (!slot || v > *slot) slot = v;
  }
  std::vector<Rational> out;
  for (auto& b : best) out.push_back(*b);
  return out;
}

// Backward recursion on the tree grown by `support_at`.
PriceReport recurse(const MarketModel& model, const Claim& claim, const ReachableTree& tree,
                    const std::function<SupportSet(const Path&)>& support_at, PriceSemantics semantics) {
  PriceReport report;
  report.semantics = semantics;
  for (const auto& leaf : leaves_of(model, tree)) report.node_values[leaf] = claim.at(leaf);
  auto internal = internal_nodes_of(model, tree);
  for (auto it = internal.rbegin(); it != internal.rend(); ++it) {
    const SupportSet s = support_at(*it);
    OneStepHedge h;
    try {
      h = one_step_superhedge(s.points, continuation_of(s, *it, report.node_values));
    } catch (const UnboundedBelow&) {
      throw NoArbitrageViolation(*it, {}, "superhedging value is unbounded below at node \"" +
                                              model.lattice.key(*it) + "\"");
    }
    report.node_values[*it] = h.price;
    report.strategy.positions[*it] = std::move(h.position);
  }
  report.price = report.node_values.at(Path{});
  report.strategy.initial_capital = report.price;
  return report;
}

void throw_violation(const MarketModel& model, const NaVerdict& v, const std::string& what) {
  throw NoArbitrageViolation(*v.node, v.certificate,
                             what + " fails at node \"" + model.lattice.key(*v.node) + "\" with h = " +
                                 to_string(v.certificate));
}

}  // namespace

PriceReport price_quasi_sure(const MarketModel& model, const Claim& claim) {
  const NaVerdict na = global_na_qs(model);
  if (!na.holds) throw_violation(model, na, "NA(Q)");
  return recurse(model, claim, reachable(model), [&](const Path& n) { return support_qs(model, n); },
                 PriceSemantics::QuasiSure);
}

PriceReport price_mono(const MarketModel& model, const KernelPrior& prior, const Claim& claim) {
  const NaVerdict na = na_prior(model, prior);
  if (!na.holds) throw_violation(model, na, "NA(P)");
  return recurse(model, claim, prior_tree(model, prior), [&](const Path& n) { return support_prior(model, prior, n); },
                 PriceSemantics::MonoPrior);
}

PriceReport price_mono(const MarketModel& model, const ProductPrior& prior, const Claim& claim) {
  return price_mono(model, induced_kernels(model, prior), claim);
}

LowerPrice price_lower(const MarketModel& model, const PatternFamily& family, const Claim& claim, bool require_sna) {
  if (require_sna) {
    const NaVerdict v = sna_family(model, family);
    if (!v.holds) throw_violation(model, v, "sNA over the family");
  }
  // nullopt stands for -infinity.
  std::map<Path, std::optional<Rational>> values;
  for (const auto& leaf : model.lattice.leaves()) values[leaf] = claim.at(leaf);
  LowerPrice out;
  const auto internal = model.lattice.internal_nodes();
  for (auto it = internal.rbegin(); it != internal.rend(); ++it) {
    const Path& node = *it;
    std::optional<Rational> best;
    std::optional<Pattern> arg;
    for (Pattern p : family.at(node)) {
      const SupportSet s = support_of(model, node, pattern_generators(model, node, p));
      std::vector<Vec> points;
      std::vector<Rational> cont;
      std::vector<std::optional<Rational>> per_point(s.points.size());
      bool has_finite_child = false;
      for (std::size_t o = 0; o < s.outcome_point.size(); ++o) {
        if (!s.outcome_point[o]) continue;
        Path child = node;
        child.push_back(static_cast<int>(o));
        const auto& v = values.at(child);
        if (!v) continue;  // that child can be superhedged from any capital
        has_finite_child = true;
        auto& slot = per_point[*s.outcome_point[o]];
        if (!slot || *v > *slot) slot = *v;
      }
      std::optional<Rational> value;
      if (has_finite_child) {
        for (std::size_t j = 0; j < s.points.size(); ++j) {
          if (per_point[j]) {
            points.push_back(s.points[j]);
            cont.push_back(*per_point[j]);
          }
        }
        try {
          value = one_step_superhedge(points, cont).price;
        } catch (const UnboundedBelow&) {
        }
      }
      if (!arg) {
        arg = p;
        best = value;
      } else if (value && (!best || *value > *best)) {
        arg = p;
        best = value;
      }
    }
    values[node] = best;
    out.patterns[node] = *arg;
  }
  const auto& root = values.at(Path{});
  if (!root) throw NoArbitrageViolation(Path{}, {}, "every member of the family has superhedging price -infinity");
  out.price = *root;
  out.maximizer = pattern_representative(model, out.patterns);
  return out;
}

std::optional<Path> find_superhedge_violation(const MarketModel& model, const PriceReport& report, const Claim& claim,
                                              const ReachableTree& tree) {
  for (const auto& leaf : leaves_of(model, tree)) {
    if (terminal_wealth(model, report.strategy, leaf) < claim.at(leaf)) return leaf;
  }
  return std::nullopt;
}

}  // namespace robusthedge
