#include "robusthedge/arbitrage.hpp"

#include "robusthedge/lp.hpp"

namespace robusthedge {

NaVerdict local_na(const std::vector<Vec>& points) {
  if (points.empty()) return {};
  const std::size_t d = points.front().size();
  for (const auto& candidate : points) {
    if (is_zero(candidate)) continue;
    lp::LinearProgram prog;
    for (std::size_t i = 0; i < d; ++i) prog.add_variable(0, lp::Bounds::free());
    for (const auto& y : points) prog.add_constraint(y, lp::Relation::GreaterEqual, 0);
    prog.add_constraint(candidate, lp::Relation::GreaterEqual, 1);
    const auto out = lp::solve(prog);
    if (out.status != lp::Status::Optimal) continue;
    Vec h = out.primal;
    const Rational scale = dot(h, candidate);
    for (auto& v : h) v /= scale;
    return {false, std::nullopt, std::move(h)};
  }
  return {};
}

NaVerdict local_na(const SupportSet& support) {
  NaVerdict v = local_na(support.points);
  if (!v.holds) v.node = support.node;
  return v;
}

bool certifies_arbitrage(const std::vector<Vec>& points, const Vec& h) {
  bool strict = false;
  for (const auto& y : points) {
    const int s = sgn(dot(h, y));
    if (s < 0) return false;
    strict = strict || s > 0;
  }
  return strict;
}

NaVerdict global_na_qs(const MarketModel& model) {
  for (const auto& node : internal_nodes_of(model, reachable(model))) {
    NaVerdict v = local_na(support_qs(model, node));
    if (!v.holds) return v;
  }
  return {};
}

NaVerdict na_prior(const MarketModel& model, const KernelPrior& prior) {
  check_shape(model, prior);
  for (const auto& node : internal_nodes_of(model, prior_tree(model, prior))) {
    NaVerdict v = local_na(support_prior(model, prior, node));
    if (!v.holds) return v;
  }
  return {};
}

NaVerdict na_prior(const MarketModel& model, const ProductPrior& prior) {
  return na_prior(model, induced_kernels(model, prior));
}

NaVerdict sna_family(const MarketModel& model, const PatternFamily& family, std::size_t cap) {
  if (family.local_count() > cap) {
    throw ExplosionGuard(std::to_string(family.local_count()) + " local patterns exceed the cap of " +
                         std::to_string(cap));
  }
  for (const auto& node : family_internal_nodes(model, family)) {
    for (Pattern p : family.at(node)) {
      NaVerdict v = local_na(support_of(model, node, pattern_generators(model, node, p)));
      if (!v.holds) return v;
    }
  }
  return {};
}

PatternFamily na_admissible_family(const MarketModel& model) {
  PatternFamily all = PatternFamily::all(model);
  PatternFamily out;
  for (const auto& [node, list] : all.patterns) {
    auto& kept = out.patterns[node];
    for (Pattern p : list) {
      if (local_na(support_of(model, node, pattern_generators(model, node, p))).holds) kept.push_back(p);
    }
    if (kept.empty()) kept = list;
  }
  return out;
}

std::vector<ProductPrior> q_star(const MarketModel& model, std::size_t cap) {
  std::vector<ProductPrior> candidates = pure_selections(model, cap);
  candidates.push_back(full_mixture(model));
  std::vector<ProductPrior> out;
  for (auto& p : candidates) {
    if (na_prior(model, p).holds) out.push_back(std::move(p));
  }
  return out;
}

std::vector<Path> qs_failure_nodes(const MarketModel& model) {
  std::vector<Path> out;
  for (const auto& node : model.lattice.internal_nodes()) {
    if (!local_na(support_qs(model, node)).holds) out.push_back(node);
  }
  return out;
}

std::vector<Path> prior_failure_nodes(const MarketModel& model, const KernelPrior& prior) {
  std::vector<Path> out;
  for (const auto& node : model.lattice.internal_nodes()) {
    if (!local_na(support_prior(model, prior, node)).holds) out.push_back(node);
  }
  return out;
}

}  // namespace robusthedge
