#pragma once

#include <map>
#include <vector>

#include "robusthedge/model.hpp"
#include "robusthedge/patterns.hpp"

namespace robusthedge {

/// Mixture weights over a node's generators defining p~ at that node: the
/// charged outcomes are ordered by increment point (lexicographic) and then
/// by index as X_1..X_m, X_n is served by the first generator charging it,
/// and that generator receives weight 2^-n / (1 - 2^-m). p~ therefore
/// charges every outcome some generator charges.
std::vector<Rational> ptilde_mixture(const MarketModel& model, const Path& node);

/// p~ at a node; its increment support equals D_Q(node).
Kernel build_ptilde_kernel(const MarketModel& model, const Path& node);

/// P~ = p~_1 (x) ... (x) p~_T.
ProductPrior build_ptilde_measure(const MarketModel& model);

struct AugmentedKernelSet {
  Path node;
  std::vector<Kernel> base;
  Kernel ptilde;
  Rational lambda;
  std::vector<Kernel> mixed_generators;  // lambda p~ + (1 - lambda) q, deduplicated
};

AugmentedKernelSet augment(const MarketModel& model, const Path& node, const Rational& lambda);

/// Model whose generators at every node are the augmented generators for a
/// fixed lambda in (0, 1]. Throws LambdaOutOfRange.
MarketModel build_ptilde_family(const MarketModel& model, const Rational& lambda = Rational(1, 2));

/// P^ = sum_n 2^-n P_n / (1 - 2^-k) taken nodewise, where P_1..P_k are
/// pattern representatives sorted by descending mono-prior price (ties by
/// pattern code). When the family has more than `candidate_limit` members,
/// the first `candidate_limit` in enumeration order are used together with
/// the nodewise maximizer of price_lower, so the list always contains a
/// maximizer.
ProductPrior build_phat(const MarketModel& model, const PatternFamily& family, const Claim& claim,
                        std::size_t candidate_limit = 32);

/// Nodewise 1/2 Q + 1/2 P~. Dominates Q, has D_Q supports, and satisfies NA
/// whenever NA(Q) does. Throws NoArbitrageViolation when NA(Q) fails.
ProductPrior na_repair_mixture(const MarketModel& model, const ProductPrior& q);

struct HullMembership {
  bool overall = true;
  std::map<Path, bool> per_node;
};

/// Whether each kernel of the prior is a convex combination of the node's
/// generators (one LP feasibility problem per node).
HullMembership hull_membership(const MarketModel& model, const KernelPrior& prior);
HullMembership hull_membership(const MarketModel& model, const ProductPrior& prior);

}  // namespace robusthedge
