#include "robusthedge/fixtures.hpp"

#include <algorithm>
#include <cctype>
#include <random>

#include "robusthedge/duality.hpp"
#include "robusthedge/pricing.hpp"

namespace robusthedge {

FixtureName parse_fixture_name(const std::string& text) {
  std::string s;
  for (char c : text) s += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (s.rfind("FIX-", 0) == 0) s = s.substr(4);
  if (s == "A") return FixtureName::A;
  if (s == "B") return FixtureName::B;
  if (s == "C") return FixtureName::C;
  if (s == "D") return FixtureName::D;
  throw BadParameter("unknown fixture \"" + text + "\"");
}

namespace {

Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::pair<MarketModel, Claim> one_period(std::vector<std::string> labels, Rational s0, std::vector<Rational> s1,
                                         std::vector<Kernel> gens, std::vector<Rational> payoff) {
  MarketModel m;
  m.lattice = ScenarioLattice({labels});
  m.assets = 1;
  m.prices[Path{}] = {s0};
  Claim h;
  for (std::size_t o = 0; o < labels.size(); ++o) {
    m.prices[Path{static_cast<int>(o)}] = {s1[o]};
    h.payoff[Path{static_cast<int>(o)}] = payoff[o];
  }
  m.root_generators = std::move(gens);
  validate(m, h);
  return {std::move(m), std::move(h)};
}

std::pair<MarketModel, Claim> fixture_b(int n_max) {
  std::vector<std::string> labels{"down"};
  std::vector<Rational> s1{q(-1)};
  std::vector<Rational> payoff{q(0)};
  for (int n = 1; n <= n_max; ++n) {
    labels.push_back("up" + std::to_string(n));
    s1.push_back(1 + q(1, n));
    payoff.push_back(q(1));
  }
  std::vector<Kernel> gens;
  for (int n = 1; n <= n_max; ++n) {
    Kernel k{Vec(labels.size(), q(0))};
    k.weights[0] = q(1, 2);
    k.weights[n] = q(1, 2);
    gens.push_back(std::move(k));
  }
  return one_period(std::move(labels), q(0), std::move(s1), std::move(gens), std::move(payoff));
}

std::pair<MarketModel, Claim> fixture_d(int seed) {
  std::mt19937 rng(static_cast<std::mt19937::result_type>(seed));
  auto draw = [&](unsigned k) { return static_cast<long>(rng() % k); };

  MarketModel m;
  m.lattice = ScenarioLattice({{"u", "d"}, {"u", "d"}});
  m.assets = 1;
  m.prices[Path{}] = {q(2)};
  for (const auto& node : m.lattice.internal_nodes()) {
    const Rational up = q(1 + draw(4), 2);
    const Rational down = -q(1 + draw(4), 2);
    const Rational p = q(1 + draw(3), 4);
    const bool mass_on_up = draw(2) == 0;
    const Rational& s = m.prices.at(node)[0];
    Path u = node, d = node;
    u.push_back(0);
    d.push_back(1);
    m.prices[u] = {s + up};
    m.prices[d] = {s + down};
    std::vector<Kernel> gens{Kernel{{p, 1 - p}}, Kernel{{q(mass_on_up ? 1 : 0), q(mass_on_up ? 0 : 1)}}};
    if (node.empty()) {
      m.root_generators = std::move(gens);
    } else {
      m.kernels[node] = std::move(gens);
    }
  }
  Claim h;
  for (const auto& leaf : m.lattice.leaves()) {
    const Rational x = m.prices.at(leaf)[0] - 2;
    h.payoff[leaf] = sgn(x) > 0 ? x : q(0);
  }
  validate(m, h);
  return {std::move(m), std::move(h)};
}

}  // namespace

std::pair<MarketModel, Claim> make_fixture(const FixtureSpec& spec) {
  switch (spec.name) {
    case FixtureName::A:
      return one_period({"u", "d"}, q(1), {q(2), q(0)}, {Kernel{{q(1, 2), q(1, 2)}}}, {q(1), q(0)});
    case FixtureName::B:
      if (spec.param < 1) throw BadParameter("FIX-B needs N >= 1, got " + std::to_string(spec.param));
      return fixture_b(spec.param);
    case FixtureName::C:
      return one_period({"flat", "up"}, q(0), {q(0), q(1)}, {Kernel{{q(1, 2), q(1, 2)}}}, {q(0), q(1)});
    case FixtureName::D:
      if (spec.param < 0) throw BadParameter("FIX-D needs a nonnegative seed");
      return fixture_d(spec.param);
  }
  throw BadParameter("unknown fixture");
}

std::vector<TruncationRow> truncation_report(const std::vector<int>& levels) {
  std::vector<TruncationRow> rows;
  for (int n : levels) {
    auto [model, claim] = make_fixture({FixtureName::B, n});
    TruncationRow row;
    row.n = n;
    row.quasi_sure = price_quasi_sure(model, claim).price;
    row.dual = dual_sup(model, claim).value;
    for (const auto& p : pure_selections(model)) {
      row.mono.push_back(price_mono(model, p, claim).price);
    }
    row.sup_mono = *std::max_element(row.mono.begin(), row.mono.end());
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace robusthedge
