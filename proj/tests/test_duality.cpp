#include <gtest/gtest.h>

#include <random>

#include "robusthedge/arbitrage.hpp"
#include "robusthedge/chain.hpp"
#include "robusthedge/duality.hpp"
#include "robusthedge/fixtures.hpp"
#include "robusthedge/pricing.hpp"
#include "robusthedge/supports.hpp"

using namespace robusthedge;

namespace {

Rational frac(long n, long d) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

}  // namespace

TEST(Duality, FixtureAHasAUniqueMartingaleMeasure) {
  const auto [m, h] = make_fixture({FixtureName::A, 0});
  const DualResult d = dual_sup(m, h);
  EXPECT_EQ(d.value, frac(1, 2));
  EXPECT_EQ(d.measure.leaf_weights.at({0}), frac(1, 2));
  EXPECT_EQ(d.measure.leaf_weights.at({1}), frac(1, 2));
  EXPECT_EQ(full_support_martingale(m), d.measure);
  const EquivalenceEvidence ev = dual_sup_equivalent(m, h, {1, 10, 100});
  EXPECT_TRUE(ev.holds);
  EXPECT_EQ(ev.constant, 0);
  for (const auto& g : ev.gaps) EXPECT_EQ(g.gap, 0);
}

TEST(Duality, TruncatedCounterExampleMaximizer) {
  const auto [m, h] = make_fixture({FixtureName::B, 2});
  const DualResult d = dual_sup(m, h);
  EXPECT_EQ(d.value, frac(2, 5));
  EXPECT_EQ(d.measure.leaf_weights.at({0}), frac(3, 5));
  EXPECT_EQ(d.measure.leaf_weights.at({1}), 0);
  EXPECT_EQ(d.measure.leaf_weights.at({2}), frac(2, 5));
  const EquivalenceEvidence ev = dual_sup_equivalent(m, h, {1, 10, 100});
  ASSERT_TRUE(ev.holds);
  EXPECT_GT(ev.constant, 0);
  for (const auto& g : ev.gaps) {
    EXPECT_TRUE(g.law_holds);
    EXPECT_EQ(g.gap * g.n, ev.constant);
    EXPECT_LT(g.expectation, ev.value);
  }
}

TEST(Duality, ArbitrageMarket) {
  const auto [m, h] = make_fixture({FixtureName::C, 0});
  EXPECT_THROW(dual_sup(m, h), InfeasiblePolytope);
  EXPECT_THROW(full_support_martingale(m), NoPoint);
}

TEST(Duality, MartingaleRecheckAndPerturbation) {
  const auto [m, h] = make_fixture({FixtureName::A, 0});
  MartingaleMeasure bad;
  bad.leaf_weights = {{{0}, Rational(1)}, {{1}, Rational(0)}};
  EXPECT_NE(check_martingale(m, bad, reachable(m)), "");
  const MartingaleMeasure good = full_support_martingale(m);
  EXPECT_EQ(check_martingale(m, good, reachable(m)), "");
  EXPECT_THROW(perturb(good, good, 0), BadParameter);
  EXPECT_EQ(perturb(bad, good, 1), good);
  const MartingaleMeasure half = perturb(bad, good, 2);
  EXPECT_EQ(half.leaf_weights.at({0}), frac(3, 4));
}

TEST(DualityProperty, ZeroGapOnRandomMarkets) {
  std::mt19937_64 rng(31);
  int checked = 0;
  while (checked < 40) {
    const Instance inst = random_instance(rng, RandomBounds{});
    if (!global_na_qs(inst.model).holds) continue;
    ++checked;
    const ReachableTree tree = reachable(inst.model);
    const DualResult d = dual_sup(inst.model, inst.claim);
    EXPECT_EQ(d.value, price_quasi_sure(inst.model, inst.claim).price);
    EXPECT_EQ(check_martingale(inst.model, d.measure, tree), "");
    EXPECT_EQ(d.measure.expectation(inst.claim), d.value);

    const lp::LinearProgram program = martingale_program(inst.model, tree, &inst.claim);
    const lp::LpOutcome out = lp::solve(program);
    ASSERT_EQ(out.status, lp::Status::Optimal);
    EXPECT_EQ(lp::check_optimality(program, out), "");

    const MartingaleMeasure hat = full_support_martingale(inst.model);
    for (const auto& leaf : leaves_of(inst.model, tree)) EXPECT_GT(hat.leaf_weights.at(leaf), 0);
    EXPECT_TRUE(dual_sup_equivalent(inst.model, inst.claim, {1, 10, 100}).holds);

    // Single-prior duality on the prior's own tree.
    const KernelPrior full = induced_kernels(inst.model, full_mixture(inst.model));
    EXPECT_EQ(dual_sup_on(inst.model, prior_tree(inst.model, full), inst.claim).value, d.value);
  }
}
