#include <gtest/gtest.h>

#include <random>

#include "robusthedge/arbitrage.hpp"
#include "robusthedge/chain.hpp"
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

Claim scaled(const Claim& h, const Rational& a, const Rational& c) {
  Claim out = h;
  for (auto& [leaf, x] : out.payoff) x = a * x + c;
  return out;
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

TEST(OneStep, BinomialHedge) {
  const OneStepHedge h = one_step_superhedge({Vec{Rational(-1)}, Vec{Rational(1)}}, {Rational(0), Rational(1)});
  EXPECT_EQ(h.price, frac(1, 2));
  EXPECT_EQ(h.position, Vec{frac(1, 2)});
}

TEST(OneStep, OneSidedSupportIsUnbounded) {
  EXPECT_THROW(one_step_superhedge({Vec{Rational(1)}, Vec{Rational(2)}}, {Rational(0), Rational(0)}), UnboundedBelow);
}

TEST(OneStep, ZeroSupportPricesTheContinuation) {
  const OneStepHedge h = one_step_superhedge({Vec{Rational(0)}}, {Rational(3)});
  EXPECT_EQ(h.price, 3);
}

TEST(Pricing, FixtureA) {
  const auto [m, h] = make_fixture({FixtureName::A, 0});
  const PriceReport r = price_quasi_sure(m, h);
  EXPECT_EQ(r.price, frac(1, 2));
  EXPECT_EQ(r.strategy.initial_capital, frac(1, 2));
  EXPECT_EQ(r.strategy.positions.at({}), Vec{frac(1, 2)});
  EXPECT_EQ(to_string(r.semantics), "quasi_sure");
  EXPECT_EQ(price_mono(m, full_mixture(m), h).price, frac(1, 2));
  EXPECT_EQ(price_lower(m, PatternFamily::all(m), h).price, frac(1, 2));
}

TEST(Pricing, TruncatedCounterExample) {
  for (int big_n : {1, 2, 5, 20}) {
    const auto [m, h] = make_fixture({FixtureName::B, big_n});
    EXPECT_EQ(price_quasi_sure(m, h).price, frac(big_n, 2 * big_n + 1));
    for (int n = 1; n <= big_n; ++n) {
      std::vector<int> choice{n - 1};
      EXPECT_EQ(price_mono(m, pure_selection(m, choice), h).price, frac(n, 2 * n + 1)) << n;
    }
    const LowerPrice lower = price_lower(m, PatternFamily::pure(m), h);
    EXPECT_EQ(lower.price, frac(big_n, 2 * big_n + 1));
    EXPECT_EQ(price_mono(m, lower.maximizer, h).price, lower.price);
    if (big_n <= 5) EXPECT_EQ(price_lower(m, PatternFamily::all(m), h).price, lower.price);
  }
}

TEST(Pricing, WideRootHitsTheGuard) {
  const auto [m, h] = make_fixture({FixtureName::B, 20});
  EXPECT_THROW(price_lower(m, PatternFamily::all(m), h), ExplosionGuard);
}

TEST(Pricing, ArbitrageMarketThrowsWithCertificate) {
  const auto [m, h] = make_fixture({FixtureName::C, 0});
  try {
    price_quasi_sure(m, h);
    FAIL() << "expected NoArbitrageViolation";
  } catch (const NoArbitrageViolation& e) {
    EXPECT_EQ(e.node(), Path{});
    EXPECT_EQ(e.certificate(), Vec{Rational(1)});
  }
  EXPECT_THROW(price_mono(m, full_mixture(m), h), NoArbitrageViolation);
}

TEST(Pricing, FixtureD) {
  const auto [m, h] = make_fixture({FixtureName::D, 0});
  EXPECT_EQ(price_quasi_sure(m, h).price, 1);
  EXPECT_EQ(price_lower(m, na_admissible_family(m), h).price, 1);
  EXPECT_THROW(price_lower(m, PatternFamily::all(m), h, true), NoArbitrageViolation);
  EXPECT_EQ(price_lower(m, PatternFamily::all(m), h, false).price, 1);
  EXPECT_EQ(price_mono(m, pure_selection(m, {0, 0, 0}), h).price, 1);
  EXPECT_THROW(price_mono(m, pure_selection(m, {1, 0, 0}), h), NoArbitrageViolation);
}

TEST(PricingProperty, CashInvarianceHomogeneityAndHedging) {
  for (const auto& inst : na_instances(21, 40)) {
    const PriceReport base = price_quasi_sure(inst.model, inst.claim);
    EXPECT_FALSE(find_superhedge_violation(inst.model, base, inst.claim, reachable(inst.model)));
    EXPECT_EQ(price_quasi_sure(inst.model, scaled(inst.claim, 1, frac(7, 3))).price, base.price + frac(7, 3));
    EXPECT_EQ(price_quasi_sure(inst.model, scaled(inst.claim, frac(5, 2), 0)).price, base.price * frac(5, 2));
  }
}

TEST(PricingProperty, MonotoneAndSubadditive) {
  std::mt19937_64 rng(22);
  for (const auto& inst : na_instances(23, 40)) {
    Claim bumped = inst.claim;
    Claim other = inst.claim;
    for (auto& [leaf, x] : bumped.payoff) x += frac(static_cast<long>(rng() % 3), 2);
    for (auto& [leaf, x] : other.payoff) x = frac(static_cast<long>(rng() % 9) - 4, 2);
    Claim sum = inst.claim;
    for (auto& [leaf, x] : sum.payoff) x += other.at(leaf);
    const Rational p = price_quasi_sure(inst.model, inst.claim).price;
    EXPECT_LE(p, price_quasi_sure(inst.model, bumped).price);
    EXPECT_LE(price_quasi_sure(inst.model, sum).price, p + price_quasi_sure(inst.model, other).price);
  }
}

TEST(PricingProperty, PriorPricesBelowQuasiSure) {
  std::mt19937_64 rng(24);
  for (const auto& inst : na_instances(25, 30)) {
    const Rational qs = price_quasi_sure(inst.model, inst.claim).price;
    EXPECT_EQ(price_mono(inst.model, full_mixture(inst.model), inst.claim).price, qs);
    std::vector<int> choice;
    for (const auto& node : inst.model.lattice.internal_nodes()) {
      choice.push_back(static_cast<int>(rng() % inst.model.generators(node).size()));
    }
    const ProductPrior p = pure_selection(inst.model, choice);
    if (!na_prior(inst.model, p).holds) continue;
    const PriceReport mono = price_mono(inst.model, p, inst.claim);
    EXPECT_LE(mono.price, qs);
    const KernelPrior k = induced_kernels(inst.model, p);
    EXPECT_FALSE(find_superhedge_violation(inst.model, mono, inst.claim, prior_tree(inst.model, k)));
  }
}

TEST(PricingProperty, SupremumOverAllPriorsEqualsQuasiSure) {
  for (const auto& inst : na_instances(26, 30)) {
    const Rational qs = price_quasi_sure(inst.model, inst.claim).price;
    EXPECT_EQ(price_lower(inst.model, PatternFamily::all(inst.model), inst.claim, false).price, qs);
    EXPECT_EQ(price_lower(inst.model, na_admissible_family(inst.model), inst.claim, true).price, qs);
  }
}
