#pragma once

#include <random>
#include <string>

#include "oracle.hpp"
#include "robusthedge/arbitrage.hpp"
#include "robusthedge/chain.hpp"
#include "robusthedge/duality.hpp"
#include "robusthedge/patterns.hpp"
#include "robusthedge/pricing.hpp"

namespace oracle {

// Markets small enough for exhaustive enumeration: at most 12 leaves and
// 4096 family members.
inline std::vector<robusthedge::Instance> tiny_instances(std::uint64_t seed, int count, bool require_na) {
  robusthedge::RandomBounds b;
  b.max_horizon = 2;
  b.max_outcomes = 4;
  b.max_generators = 3;
  b.uncentered_percent = 20;
  std::mt19937_64 rng(seed);
  std::vector<robusthedge::Instance> out;
  while (static_cast<int>(out.size()) < count) {
    robusthedge::Instance inst = robusthedge::random_instance(rng, b);
    if (inst.model.lattice.leaves().size() > 12 || member_count(inst.model) > 4096) continue;
    if (require_na && !robusthedge::global_na_qs(inst.model).holds) continue;
    out.push_back(std::move(inst));
  }
  return out;
}

// Empty when every library price agrees with the brute-force reference.
inline std::string compare(const MarketModel& model, const Claim& claim) {
  using namespace robusthedge;
  const Reference ref = reference(model, claim);
  if (global_na_qs(model).holds != ref.na_q) return "NA(Q) verdict differs";
  if (!ref.na_q) return {};
  if (price_quasi_sure(model, claim).price != *ref.quasi_sure) return "price_quasi_sure differs";
  if (dual_sup(model, claim).value != *ref.quasi_sure) return "dual_sup differs";
  if (!ref.lower) return "oracle found no NA member";
  if (price_lower(model, na_admissible_family(model), claim, true).price != *ref.lower) {
    return "price_lower over the NA-admissible family differs";
  }
  if (price_lower(model, PatternFamily::all(model), claim, false).price != *ref.lower) {
    return "price_lower over all patterns differs";
  }
  for (const auto& [member, value] : ref.mono) {
    if (price_mono(model, member.kernels, claim).price != *value) return "price_mono differs";
  }
  for (const auto& member : members(model, 4096)) {
    bool na = false;
    for (const auto& [m, v] : ref.mono) na = na || m.kernels == member.kernels;
    if (na_prior(model, member.kernels).holds != na) return "na_prior differs";
  }
  return {};
}

}  // namespace oracle
