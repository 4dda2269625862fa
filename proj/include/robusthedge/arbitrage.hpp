#pragma once

#include <optional>
#include <vector>

#include "robusthedge/model.hpp"
#include "robusthedge/patterns.hpp"
#include "robusthedge/supports.hpp"

namespace robusthedge {

/// On failure: the node and a vector h with h.y >= 0 on the node's support
/// and h.y > 0 for some support point (scaled so that h.y = 1 there).
struct NaVerdict {
  bool holds = true;
  std::optional<Path> node;
  Vec certificate;
};

/// Local no-arbitrage on a finite set of increments: holds iff no h has
/// h.y >= 0 for every point and h.y >= 1 for one of them. One LP per
/// candidate point.
NaVerdict local_na(const std::vector<Vec>& points);
NaVerdict local_na(const SupportSet& support);

/// True iff the certificate is nonnegative on every point and positive on one.
bool certifies_arbitrage(const std::vector<Vec>& points, const Vec& h);

/// NA(Q): local NA of D_Q at every reachable non-terminal node.
NaVerdict global_na_qs(const MarketModel& model);

/// NA(P) through the local criterion on the prior's positive-probability tree.
NaVerdict na_prior(const MarketModel& model, const KernelPrior& prior);
NaVerdict na_prior(const MarketModel& model, const ProductPrior& prior);

/// sNA over a pattern family. NA of a member depends only on its kernel
/// supports, and patterns are chosen independently across nodes, so the
/// condition holds iff every admissible pattern passes local NA at every
/// node reachable under the family.
NaVerdict sna_family(const MarketModel& model, const PatternFamily& family, std::size_t cap = explosion_cap());

/// Patterns passing local NA at each node (all patterns kept elsewhere if
/// none pass, so every node stays populated). Members of this family are
/// exactly the priors of the hull for which NA holds, up to supports.
PatternFamily na_admissible_family(const MarketModel& model);

/// Q*: the pure selections and the full mixture for which NA holds.
std::vector<ProductPrior> q_star(const MarketModel& model, std::size_t cap = explosion_cap());

/// Internal nodes (reachable or not) where local NA fails, computed from D_Q
/// or from a single prior's kernels.
std::vector<Path> qs_failure_nodes(const MarketModel& model);
std::vector<Path> prior_failure_nodes(const MarketModel& model, const KernelPrior& prior);

}  // namespace robusthedge
