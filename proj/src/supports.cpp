#include "robusthedge/supports.hpp"

#include <algorithm>

namespace robusthedge {

bool SupportSet::contains(const Vec& y) const { return std::binary_search(points.begin(), points.end(), y); }

SupportSet support_of(const MarketModel& model, const Path& node, const std::vector<Kernel>& kernels) {
  SupportSet s;
  s.node = node;
  const int arity = model.lattice.arity(static_cast<int>(node.size()));
  std::vector<Vec> images(arity);
  std::vector<bool> charged(arity, false);
  for (int o = 0; o < arity; ++o) {
    for (const auto& k : kernels) {
      if (k.charges(o)) {
        charged[o] = true;
        break;
      }
    }
    if (charged[o]) {
      images[o] = model.increment(node, o);
      s.points.push_back(images[o]);
    }
  }
  std::sort(s.points.begin(), s.points.end());
  s.points.erase(std::unique(s.points.begin(), s.points.end()), s.points.end());
  s.outcome_point.resize(arity);
  for (int o = 0; o < arity; ++o) {
    if (!charged[o]) continue;
    auto it = std::lower_bound(s.points.begin(), s.points.end(), images[o]);
    s.outcome_point[o] = static_cast<std::size_t>(it - s.points.begin());
  }
  return s;
}

SupportSet support_qs(const MarketModel& model, const Path& node) {
  return support_of(model, node, model.generators(node));
}

SupportSet support_prior(const MarketModel& model, const KernelPrior& prior, const Path& node) {
  return support_of(model, node, {prior.at(node)});
}

SupportSet support_prior(const MarketModel& model, const ProductPrior& prior, const Path& node) {
  return support_of(model, node, {mix_kernels(model.generators(node), prior.mixtures.at(node))});
}

bool charged_point(const MarketModel& model, const Path& node, const Vec& y) {
  const int arity = model.lattice.arity(static_cast<int>(node.size()));
  for (const auto& k : model.generators(node)) {
    Rational mass = 0;
    for (int o = 0; o < arity; ++o) {
      if (model.increment(node, o) == y) mass += k.weights[o];
    }
    if (sgn(mass) > 0) return true;
  }
  return false;
}

namespace {

template <class KernelsAt>
ReachableTree grow(const MarketModel& model, KernelsAt kernels_at) {
  ReachableTree tree;
  std::vector<Path> frontier{Path{}};
  tree.nodes.insert(Path{});
  while (!frontier.empty()) {
    std::vector<Path> next;
    for (const auto& node : frontier) {
      if (model.lattice.is_terminal(node)) continue;
      const int arity = model.lattice.arity(static_cast<int>(node.size()));
      const std::vector<Kernel>& ks = kernels_at(node);
      for (int o = 0; o < arity; ++o) {
        if (std::any_of(ks.begin(), ks.end(), [o](const Kernel& k) { return k.charges(o); })) {
          Path child = node;
          child.push_back(o);
          tree.nodes.insert(child);
          next.push_back(std::move(child));
        }
      }
    }
    frontier = std::move(next);
  }
  return tree;
}

}  // namespace

ReachableTree reachable(const MarketModel& model) {
  return grow(model, [&](const Path& node) -> const std::vector<Kernel>& { return model.generators(node); });
}

ReachableTree prior_tree(const MarketModel& model, const KernelPrior& prior) {
  std::vector<Kernel> scratch;
  return grow(model, [&](const Path& node) -> const std::vector<Kernel>& {
    scratch = {prior.at(node)};
    return scratch;
  });
}

std::vector<Path> internal_nodes_of(const MarketModel& model, const ReachableTree& tree) {
  std::vector<Path> out;
  for (const auto& node : model.lattice.internal_nodes()) {
    if (tree.contains(node)) out.push_back(node);
  }
  return out;
}

std::vector<Path> leaves_of(const MarketModel& model, const ReachableTree& tree) {
  std::vector<Path> out;
  for (const auto& leaf : model.lattice.leaves()) {
    if (tree.contains(leaf)) out.push_back(leaf);
  }
  return out;
}

namespace {

// Support data of one family: its reachable tree and, per node, the kernels
// that actually reach the node.
struct FamilyView {
  bool quasi_sure = false;
  ReachableTree tree;
  std::vector<std::pair<const KernelPrior*, ReachableTree>> members;
};

FamilyView view_of(const MarketModel& model, const SupportFamily& f) {
  FamilyView v;
  if (std::holds_alternative<QuasiSure>(f)) {
    v.quasi_sure = true;
    v.tree = reachable(model);
    return v;
  }
  for (const auto& p : std::get<std::vector<KernelPrior>>(f)) {
    auto t = prior_tree(model, p);
    v.tree.nodes.insert(t.nodes.begin(), t.nodes.end());
    v.members.emplace_back(&p, std::move(t));
  }
  return v;
}

std::vector<Vec> family_support(const MarketModel& model, const FamilyView& v, const Path& node) {
  if (v.quasi_sure) return support_qs(model, node).points;
  std::vector<Kernel> ks;
  for (const auto& [p, t] : v.members) {
    if (t.contains(node)) ks.push_back(p->at(node));
  }
  if (ks.empty()) return {};
  return support_of(model, node, ks).points;
}

}  // namespace

SupportComparison supports_match(const MarketModel& model, const SupportFamily& a, const SupportFamily& b) {
  const FamilyView va = view_of(model, a);
  const FamilyView vb = view_of(model, b);
  for (const auto& node : model.lattice.internal_nodes()) {
    if (!va.tree.contains(node) || !vb.tree.contains(node)) continue;
    if (family_support(model, va, node) != family_support(model, vb, node)) return {false, node};
  }
  return {};
}

}  // namespace robusthedge
