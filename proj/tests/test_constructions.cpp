#include <gtest/gtest.h>

#include <random>

#include "robusthedge/arbitrage.hpp"
#include "robusthedge/chain.hpp"
#include "robusthedge/constructions.hpp"
#include "robusthedge/fixtures.hpp"
#include "robusthedge/patterns.hpp"
#include "robusthedge/pricing.hpp"
#include "robusthedge/supports.hpp"

using namespace robusthedge;

namespace {

Rational frac(long n, long d) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::vector<Instance> na_instances(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<Instance> out;
  while (static_cast<int>(out.size()) < count) {
    Instance inst = random_instance(rng, RandomBounds{});
    if (global_na_qs(inst.model).holds) out.push_back(std::move(inst));
  }
  return out;
}

}  // namespace

TEST(Ptilde, GeometricWeightsOnTruncatedCounterExample) {
  const auto [m, h] = make_fixture({FixtureName::B, 2});
  EXPECT_EQ(ptilde_mixture(m, {}), (std::vector<Rational>{frac(5, 7), frac(2, 7)}));
  EXPECT_EQ(build_ptilde_kernel(m, {}).weights, (Vec{frac(1, 2), frac(5, 14), frac(1, 7)}));
  const ProductPrior p = build_ptilde_measure(m);
  EXPECT_EQ(p.root_mixture(), ptilde_mixture(m, {}));
}

TEST(Ptilde, SingleGeneratorGetsEverything) {
  const auto [m, h] = make_fixture({FixtureName::A, 0});
  EXPECT_EQ(ptilde_mixture(m, {}), std::vector<Rational>{Rational(1)});
}

TEST(Augment, LambdaRangeAndDeduplication) {
  const auto [m, h] = make_fixture({FixtureName::B, 2});
  EXPECT_THROW(augment(m, {}, Rational(0)), LambdaOutOfRange);
  EXPECT_THROW(augment(m, {}, frac(3, 2)), LambdaOutOfRange);
  EXPECT_THROW(build_ptilde_family(m, Rational(-1)), LambdaOutOfRange);
  const AugmentedKernelSet one = augment(m, {}, Rational(1));
  ASSERT_EQ(one.mixed_generators.size(), 1u);
  EXPECT_EQ(one.mixed_generators[0], one.ptilde);
  const AugmentedKernelSet half = augment(m, {}, frac(1, 2));
  ASSERT_EQ(half.mixed_generators.size(), 2u);
  EXPECT_EQ(half.mixed_generators[0].weights, (Vec{frac(1, 2), frac(3, 7), frac(1, 14)}));
  EXPECT_EQ(build_ptilde_family(m).generators({}), half.mixed_generators);
}

TEST(Phat, AttainsTheSupremumWithQuasiSureSupports) {
  const auto [m, h] = make_fixture({FixtureName::B, 2});
  const MarketModel family = build_ptilde_family(m);
  const ProductPrior phat = build_phat(family, PatternFamily::all(family), h);
  const KernelPrior k = induced_kernels(family, phat);
  EXPECT_EQ(price_mono(family, k, h).price, frac(2, 5));
  EXPECT_TRUE(supports_match(m, std::vector<KernelPrior>{k}, QuasiSure{}).matches);
  EXPECT_TRUE(hull_membership(m, k).overall);
}

TEST(Phat, FixtureDMatchesQuasiSurePrice) {
  const auto [m, h] = make_fixture({FixtureName::D, 0});
  const MarketModel family = build_ptilde_family(m);
  const ProductPrior phat = build_phat(family, PatternFamily::all(family), h);
  EXPECT_EQ(price_mono(family, phat, h).price, price_quasi_sure(m, h).price);
}

TEST(Repair, DominatesAndRemovesArbitrage) {
  const auto [m, h] = make_fixture({FixtureName::D, 0});
  for (const auto& q : pure_selections(m)) {
    const ProductPrior r = na_repair_mixture(m, q);
    EXPECT_TRUE(na_prior(m, r).holds);
    const auto wq = prior_measure(m, q);
    const auto wr = prior_measure(m, r);
    for (const auto& [leaf, w] : wq) {
      if (w > 0) EXPECT_GT(wr.at(leaf), 0);
    }
  }
  const auto [c, hc] = make_fixture({FixtureName::C, 0});
  EXPECT_THROW(na_repair_mixture(c, full_mixture(c)), NoArbitrageViolation);
}

TEST(Hull, DetectsOutsideKernels) {
  const auto [m, h] = make_fixture({FixtureName::B, 2});
  KernelPrior inside{{Path{}, build_ptilde_kernel(m, {})}};
  EXPECT_TRUE(hull_membership(m, inside).overall);
  KernelPrior outside{{Path{}, Kernel{{Rational(0), frac(1, 2), frac(1, 2)}}}};
  const HullMembership hm = hull_membership(m, outside);
  EXPECT_FALSE(hm.overall);
  EXPECT_FALSE(hm.per_node.at({}));
}

TEST(ConstructionProperty, FamilyMembersKeepQuasiSureSupports) {
  std::mt19937_64 rng(41);
  for (const auto& inst : na_instances(42, 25)) {
    for (int trial = 0; trial < 5; ++trial) {
      const Rational lambda = frac(1 + static_cast<long>(rng() % 8), 8);
      const MarketModel family = build_ptilde_family(inst.model, lambda);
      std::vector<int> choice;
      for (const auto& node : family.lattice.internal_nodes()) {
        choice.push_back(static_cast<int>(rng() % family.generators(node).size()));
      }
      const KernelPrior k = induced_kernels(family, pure_selection(family, choice));
      for (const auto& node : internal_nodes_of(inst.model, reachable(inst.model))) {
        EXPECT_EQ(support_prior(inst.model, k, node).points, support_qs(inst.model, node).points);
      }
      EXPECT_TRUE(na_prior(inst.model, k).holds);
      EXPECT_TRUE(hull_membership(inst.model, k).overall);
    }
  }
}

TEST(ConstructionProperty, PriceDoesNotDependOnLambda) {
  for (const auto& inst : na_instances(43, 20)) {
    const Rational qs = price_quasi_sure(inst.model, inst.claim).price;
    for (const Rational& lambda : {frac(1, 3), frac(1, 2), Rational(1)}) {
      EXPECT_EQ(price_quasi_sure(build_ptilde_family(inst.model, lambda), inst.claim).price, qs);
    }
  }
}

TEST(ConstructionProperty, PtildeNullSetsAreQuasiSureNullSets) {
  for (const auto& inst : na_instances(44, 30)) {
    const auto pt = prior_measure(inst.model, build_ptilde_measure(inst.model));
    const auto full = prior_measure(inst.model, full_mixture(inst.model));
    for (const auto& [leaf, w] : full) EXPECT_EQ(sgn(w), sgn(pt.at(leaf)));
  }
}
