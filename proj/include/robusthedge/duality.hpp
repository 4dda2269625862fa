#pragma once

#include <map>
#include <string>
#include <vector>

#include "robusthedge/lp.hpp"
#include "robusthedge/model.hpp"
#include "robusthedge/supports.hpp"

namespace robusthedge {

struct MartingaleMeasure {
  std::map<Path, Rational> leaf_weights;  // every leaf; zero off the tree

  Rational expectation(const Claim& claim) const;
  bool operator==(const MartingaleMeasure&) const = default;
};

/// Martingale polytope on the leaves of `tree`: one variable per leaf,
/// weights summing to one, and for every tree node and asset the aggregated
/// constraint sum_{leaf below node} m_leaf * Delta S_{t+1} = 0. The
/// objective is E_M(H) when a claim is given.
lp::LinearProgram martingale_program(const MarketModel& model, const ReachableTree& tree, const Claim* claim);

/// Re-checks a measure through node masses and the conditional one-step
/// form sum_children mass(child) * Delta S = 0. Also requires weights to
/// vanish off `tree`. Returns an empty string when all checks pass.
std::string check_martingale(const MarketModel& model, const MartingaleMeasure& m, const ReachableTree& tree);

struct DualResult {
  Rational value;
  MartingaleMeasure measure;
};

/// sup of E_M(H) over martingale measures supported on the reachable tree,
/// i.e. over M << Q for some Q in the hull (the full mixture dominates every
/// such M). Throws InfeasiblePolytope when NA(Q) fails or no martingale
/// measure exists.
DualResult dual_sup(const MarketModel& model, const Claim& claim);

/// Same supremum restricted to the leaves of an arbitrary tree.
DualResult dual_sup_on(const MarketModel& model, const ReachableTree& tree, const Claim& claim);

/// A martingale measure charging every reachable leaf. Throws NoPoint when
/// none exists.
MartingaleMeasure full_support_martingale(const MarketModel& model);
MartingaleMeasure full_support_martingale_on(const MarketModel& model, const ReachableTree& tree);

/// (1 - 1/n) M + (1/n) M_hat.
MartingaleMeasure perturb(const MartingaleMeasure& m, const MartingaleMeasure& m_hat, int n);

struct GapRecord {
  int n = 1;
  Rational expectation;  // E_{M_n}(H)
  Rational gap;          // v - E_{M_n}(H)
  bool law_holds = false;
};

/// Certificate that the supremum over equivalent martingale measures equals
/// the attained supremum v: for each n, v - E_{M_n}(H) = (1/n) * c with
/// c = v - E_{M_hat}(H) >= 0.
struct EquivalenceEvidence {
  Rational value;
  MartingaleMeasure maximizer;
  MartingaleMeasure full_support;
  Rational full_support_expectation;
  Rational constant;
  std::vector<GapRecord> gaps;
  bool holds = false;
};

EquivalenceEvidence dual_sup_equivalent(const MarketModel& model, const Claim& claim, const std::vector<int>& ns);

}  // namespace robusthedge
