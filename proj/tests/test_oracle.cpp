#include <gtest/gtest.h>

#include "oracle_compare.hpp"
#include "robusthedge/fixtures.hpp"
#include "robusthedge/market_io.hpp"

using namespace robusthedge;

TEST(Oracle, GaussianSolverOnAKnownSystem) {
  // x + y = 1, x - y = 0
  const std::vector<std::vector<Rational>> a{{Rational(1), Rational(1)}, {Rational(1), Rational(-1)}};
  const auto x = oracle::solve_columns(a, {Rational(1), Rational(0)}, {0, 1});
  ASSERT_TRUE(x);
  EXPECT_EQ((*x)[0], Rational(1, 2));
  EXPECT_FALSE(oracle::solve_columns({{Rational(1), Rational(1)}, {Rational(2), Rational(2)}},
                                     {Rational(1), Rational(2)}, {0, 1}));
}

TEST(Oracle, FrozenFixtureDValues) {
  const auto [m, h] = make_fixture({FixtureName::D, 0});
  const oracle::Reference ref = oracle::reference(m, h);
  EXPECT_TRUE(ref.na_q);
  EXPECT_EQ(*ref.quasi_sure, 1);
  EXPECT_EQ(*ref.lower, 1);
  EXPECT_EQ(ref.mono.size(), 8u);
  EXPECT_EQ(oracle::compare(m, h), "");
}

TEST(Oracle, FixturesAgree) {
  for (const FixtureSpec& spec : {FixtureSpec{FixtureName::A, 0}, FixtureSpec{FixtureName::B, 3},
                                  FixtureSpec{FixtureName::C, 0}, FixtureSpec{FixtureName::D, 7}}) {
    const auto [m, h] = make_fixture(spec);
    EXPECT_EQ(oracle::compare(m, h), "");
  }
}

TEST(OracleProperty, TinyRandomMarketsAgree) {
  for (const auto& inst : oracle::tiny_instances(61, 60, false)) {
    EXPECT_EQ(oracle::compare(inst.model, inst.claim), "") << save_market(inst.model, inst.claim);
  }
}
