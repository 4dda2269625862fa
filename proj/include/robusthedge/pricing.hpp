#pragma once

#include <map>
#include <optional>
#include <string>

#include "robusthedge/arbitrage.hpp"
#include "robusthedge/model.hpp"
#include "robusthedge/patterns.hpp"
#include "robusthedge/supports.hpp"

namespace robusthedge {

enum class PriceSemantics { QuasiSure, MonoPrior, Lower };

std::string to_string(PriceSemantics s);

struct PriceReport {
  Rational price;
  HedgingStrategy strategy;
  std::map<Path, Rational> node_values;  // only on the relevant support tree
  PriceSemantics semantics = PriceSemantics::QuasiSure;
};

struct OneStepHedge {
  Rational price;
  Vec position;
};

/// min x over (x, h) subject to x + h.y_j >= v_j for every support point.
/// `continuation[j]` is the value attached to points[j]. Throws
/// UnboundedBelow when the LP is unbounded.
OneStepHedge one_step_superhedge(const std::vector<Vec>& points, const std::vector<Rational>& continuation);

/// pi^Q(H): backward recursion over the reachable tree with D_Q supports.
/// Throws NoArbitrageViolation when NA(Q) fails.
PriceReport price_quasi_sure(const MarketModel& model, const Claim& claim);

/// pi^P(H) for one prior, on its positive-probability tree.
PriceReport price_mono(const MarketModel& model, const KernelPrior& prior, const Claim& claim);
PriceReport price_mono(const MarketModel& model, const ProductPrior& prior, const Claim& claim);

struct LowerPrice {
  Rational price;
  ProductPrior maximizer;
  std::map<Path, Pattern> patterns;  // argmax pattern per internal node
};

/// sup over the family's members of pi^P(H). The superhedging value at a
/// node is nondecreasing in the continuation values and in the support, and
/// members choose patterns independently per node, so the supremum is taken
/// node by node (first maximizing pattern in list order wins ties). With
/// `require_sna`, throws NoArbitrageViolation unless sNA holds for the
/// family. Without it, members with arbitrage contribute their (possibly
/// -infinite) prices; a supremum of -infinity throws.
LowerPrice price_lower(const MarketModel& model, const PatternFamily& family, const Claim& claim,
                       bool require_sna = true);

/// Checks terminal wealth >= H at every leaf of the tree; returns the first
/// violating leaf.
std::optional<Path> find_superhedge_violation(const MarketModel& model, const PriceReport& report,
                                              const Claim& claim, const ReachableTree& tree);

}  // namespace robusthedge
