#pragma once

#include <string>
#include <utility>
#include <vector>

#include "robusthedge/model.hpp"

namespace robusthedge {

enum class FixtureName { A, B, C, D };

struct FixtureSpec {
  FixtureName name = FixtureName::A;
  int param = 0;  // B: truncation level N >= 1; D: generator seed
};

/// Parses "A", "FIX-A", "b", ... Throws BadParameter.
FixtureName parse_fixture_name(const std::string& text);

/// A: one-period binomial, S_0 = 1, S_1 in {2, 0}, kernel (1/2, 1/2), H = 1 on the up move.
/// B(N): S_0 = 0, outcomes down (S_1 = -1) and up1..upN (S_1 = 1 + 1/n),
///       generators P_n = 1/2 delta_down + 1/2 delta_upn, H = 1{S_1 >= 1}.
/// C: S_0 = 0, S_1 in {0, 1}, kernel (1/2, 1/2), H = 1{S_1 >= 1}; an arbitrage market.
/// D(seed): two binary periods; at every node one full-support generator
///       and one point mass, with increments and weights drawn from
///       std::mt19937(seed); H = (S_2 - 2)^+.
std::pair<MarketModel, Claim> make_fixture(const FixtureSpec& spec);

struct TruncationRow {
  int n = 0;
  Rational quasi_sure;
  Rational sup_mono;
  Rational dual;
  std::vector<Rational> mono;  // pi^{P_n}(H) for n = 1..N
};

/// Prices of the truncated counter-example for each N.
std::vector<TruncationRow> truncation_report(const std::vector<int>& levels);

}  // namespace robusthedge
