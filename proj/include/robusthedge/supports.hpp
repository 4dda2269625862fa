#pragma once

#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "robusthedge/model.hpp"

namespace robusthedge {

/// Values of Delta S_{t+1}(node, .) charged with positive weight. Points are
/// sorted lexicographically and distinct; several outcomes may share one
/// point, so the outcome -> point index is kept alongside.
struct SupportSet {
  Path node;
  std::vector<Vec> points;
  std::vector<std::optional<std::size_t>> outcome_point;  // per outcome; empty if uncharged

  bool contains(const Vec& y) const;
  bool operator==(const SupportSet& other) const { return points == other.points; }
};

/// Support of Delta S under the union of the given kernels' supports.
SupportSet support_of(const MarketModel& model, const Path& node, const std::vector<Kernel>& kernels);

/// D_Q at a non-terminal node: points charged by at least one generator.
SupportSet support_qs(const MarketModel& model, const Path& node);

/// D_P at a non-terminal node for a single prior.
SupportSet support_prior(const MarketModel& model, const KernelPrior& prior, const Path& node);
SupportSet support_prior(const MarketModel& model, const ProductPrior& prior, const Path& node);

/// Membership through the point-mass formulation: y is in D_Q(node) iff some
/// generator gives positive mass to the outcomes {Delta S = y}.
bool charged_point(const MarketModel& model, const Path& node, const Vec& y);

/// Nodes charged by at least one prior of the family; prefix-closed.
struct ReachableTree {
  std::set<Path> nodes;

  bool contains(const Path& node) const { return nodes.contains(node); }
  bool operator==(const ReachableTree&) const = default;
};

ReachableTree reachable(const MarketModel& model);

/// Positive-probability nodes of a single prior.
ReachableTree prior_tree(const MarketModel& model, const KernelPrior& prior);

/// Reachable non-terminal nodes in canonical order (depth, then lexicographic).
std::vector<Path> internal_nodes_of(const MarketModel& model, const ReachableTree& tree);
std::vector<Path> leaves_of(const MarketModel& model, const ReachableTree& tree);

/// Either the quasi-sure family (all generators) or an explicit list of priors.
struct QuasiSure {};
using SupportFamily = std::variant<QuasiSure, std::vector<KernelPrior>>;

struct SupportComparison {
  bool matches = true;
  std::optional<Path> first_difference;
};

/// Compares the (union of) supports of two families at every node of their
/// common reachable tree.
SupportComparison supports_match(const MarketModel& model, const SupportFamily& a, const SupportFamily& b);

}  // namespace robusthedge
