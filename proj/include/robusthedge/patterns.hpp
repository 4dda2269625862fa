#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "robusthedge/model.hpp"

namespace robusthedge {

/// Generator subsets encoded as bitmasks over a node's generator indices.
using Pattern = std::uint32_t;

/// Family of product priors described by their support patterns: at each
/// internal node a member mixes exactly the generators of one admissible
/// pattern with positive weights. Kernel supports, and therefore every
/// null-set-dependent quantity, are determined by the pattern alone; the
/// representative of a pattern is the uniform mixture over it.
struct PatternFamily {
  std::map<Path, std::vector<Pattern>> patterns;

  /// Every nonempty subset at every node: the whole convex hull.
  static PatternFamily all(const MarketModel& model);
  /// Singletons only: the pure selections.
  static PatternFamily pure(const MarketModel& model);

  const std::vector<Pattern>& at(const Path& node) const { return patterns.at(node); }
  /// Number of members up to support equivalence (saturating).
  std::uint64_t member_count() const;
  /// Total number of (node, pattern) pairs.
  std::size_t local_count() const;
};

std::vector<Kernel> pattern_generators(const MarketModel& model, const Path& node, Pattern p);
std::vector<Rational> pattern_mixture(Pattern p, std::size_t generators);

/// Representative prior of one pattern per internal node.
ProductPrior pattern_representative(const MarketModel& model, const std::map<Path, Pattern>& choice);

/// Representatives of every member, in lexicographic order of the pattern
/// index sequence over ScenarioLattice::internal_nodes(). Throws
/// ExplosionGuard past `cap`. With `limit`, stops after that many instead.
std::vector<std::pair<std::vector<Pattern>, ProductPrior>> pattern_members(const MarketModel& model,
                                                                           const PatternFamily& family,
                                                                           std::size_t cap,
                                                                           std::size_t limit = SIZE_MAX);

/// Nodes reachable under at least one member of the family.
std::vector<Path> family_internal_nodes(const MarketModel& model, const PatternFamily& family);

}  // namespace robusthedge
