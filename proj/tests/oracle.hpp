#pragma once

// Brute-force reference values for tiny markets. Shares only the data types
// with the library: priors are enumerated member by member and every price
// is a maximum over the vertices of a martingale polytope, found by solving
// each square subsystem with plain Gaussian elimination.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "robusthedge/model.hpp"

namespace oracle {

using robusthedge::Claim;
using robusthedge::Kernel;
using robusthedge::KernelPrior;
using robusthedge::MarketModel;
using robusthedge::Path;
using robusthedge::Rational;

using LeafSet = std::vector<bool>;

// Solves A x = b for the columns in `cols`; nullopt unless the columns are
// independent and the system is consistent.
inline std::optional<std::vector<Rational>> solve_columns(const std::vector<std::vector<Rational>>& a,
                                                          const std::vector<Rational>& b,
                                                          const std::vector<int>& cols) {
  const std::size_t rows = a.size();
  const std::size_t k = cols.size();
  std::vector<std::vector<Rational>> m(rows, std::vector<Rational>(k + 1));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < k; ++c) m[r][c] = a[r][cols[c]];
    m[r][k] = b[r];
  }
  std::size_t pivot_row = 0;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t p = pivot_row;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) return std::nullopt;  // dependent columns
    std::swap(m[p], m[pivot_row]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == pivot_row || m[r][c] == 0) continue;
      const Rational f = m[r][c] / m[pivot_row][c];
      for (std::size_t j = c; j <= k; ++j) m[r][j] -= f * m[pivot_row][j];
    }
    ++pivot_row;
  }
  for (std::size_t r = pivot_row; r < rows; ++r) {
    if (m[r][k] != 0) return std::nullopt;
  }
  std::vector<Rational> x(k);
  for (std::size_t c = 0; c < k; ++c) x[c] = m[c][k] / m[c][c];
  return x;
}

struct Polytope {
  std::vector<Path> leaves;
  std::vector<std::vector<Rational>> vertices;  // weights per leaf
};

// Vertices of {m >= 0, sum m = 1, E_m[Delta S | node] = 0 at every node}
// over all leaves of the lattice. Restricting to a leaf set gives a face,
// whose vertices are the vertices with support inside the set.
inline Polytope martingale_vertices(const MarketModel& model) {
  Polytope poly;
  poly.leaves = model.lattice.leaves();
  const std::size_t n = poly.leaves.size();
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  a.emplace_back(n, Rational(1));
  b.emplace_back(1);
  for (const auto& node : model.lattice.internal_nodes()) {
    for (int i = 0; i < model.assets; ++i) {
      std::vector<Rational> row(n);
      bool any = false;
      for (std::size_t l = 0; l < n; ++l) {
        const Path& leaf = poly.leaves[l];
        if (!std::equal(node.begin(), node.end(), leaf.begin())) continue;
        Path child(leaf.begin(), leaf.begin() + static_cast<long>(node.size()) + 1);
        row[l] = model.price(child)[i] - model.price(node)[i];
        any = any || row[l] != 0;
      }
      if (any) {
        a.push_back(std::move(row));
        b.emplace_back(0);
      }
    }
  }
  const std::size_t max_size = std::min(n, a.size());
  for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
    std::vector<int> cols;
    for (std::size_t l = 0; l < n; ++l) {
      if (mask >> l & 1) cols.push_back(static_cast<int>(l));
    }
    if (cols.size() > max_size) continue;
    const auto x = solve_columns(a, b, cols);
    if (!x || std::any_of(x->begin(), x->end(), [](const Rational& v) { return v <= 0; })) continue;
    std::vector<Rational> w(n);
    for (std::size_t c = 0; c < cols.size(); ++c) w[cols[c]] = (*x)[c];
    poly.vertices.push_back(std::move(w));
  }
  return poly;
}

inline bool inside(const std::vector<Rational>& w, const LeafSet& set) {
  for (std::size_t l = 0; l < w.size(); ++l) {
    if (w[l] != 0 && !set[l]) return false;
  }
  return true;
}

// No arbitrage on a leaf set: some martingale measure charges every leaf.
inline bool na_on(const Polytope& p, const LeafSet& set) {
  LeafSet covered(set.size(), false);
  for (const auto& v : p.vertices) {
    if (!inside(v, set)) continue;
    for (std::size_t l = 0; l < v.size(); ++l) covered[l] = covered[l] || v[l] != 0;
  }
  return covered == set;
}

inline std::optional<Rational> best_on(const Polytope& p, const LeafSet& set, const Claim& claim) {
  std::optional<Rational> best;
  for (const auto& v : p.vertices) {
    if (!inside(v, set)) continue;
    Rational e = 0;
    for (std::size_t l = 0; l < v.size(); ++l) e += v[l] * claim.at(p.leaves[l]);
    if (!best || e > *best) best = e;
  }
  return best;
}

struct Member {
  KernelPrior kernels;
  LeafSet leaves;
};

// Every member of the generated family: one nonempty generator subset per
// node, mixed uniformly. Stops after `limit` members.
inline std::vector<Member> members(const MarketModel& model, std::size_t limit) {
  const auto nodes = model.lattice.internal_nodes();
  const auto leaves = model.lattice.leaves();
  std::vector<Member> out;
  KernelPrior current;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (out.size() >= limit) return;
    if (i == nodes.size()) {
      Member m{current, LeafSet(leaves.size(), false)};
      for (std::size_t l = 0; l < leaves.size(); ++l) {
        Rational w = 1;
        for (std::size_t t = 0; t < leaves[l].size(); ++t) {
          const Path prefix(leaves[l].begin(), leaves[l].begin() + static_cast<long>(t));
          w *= current.at(prefix).weights[leaves[l][t]];
        }
        m.leaves[l] = w > 0;
      }
      out.push_back(std::move(m));
      return;
    }
    const auto& gens = model.generators(nodes[i]);
    for (std::uint32_t mask = 1; mask < (1U << gens.size()); ++mask) {
      Kernel k{std::vector<Rational>(gens.front().weights.size())};
      int used = 0;
      for (std::size_t g = 0; g < gens.size(); ++g) {
        if (!(mask >> g & 1)) continue;
        ++used;
        for (std::size_t o = 0; o < k.weights.size(); ++o) k.weights[o] += gens[g].weights[o];
      }
      for (auto& w : k.weights) w /= used;
      current[nodes[i]] = std::move(k);
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

inline std::size_t member_count(const MarketModel& model) {
  std::size_t count = 1;
  for (const auto& node : model.lattice.internal_nodes()) {
    count *= (std::size_t{1} << model.generators(node).size()) - 1;
    if (count > 1000000) return count;
  }
  return count;
}

struct Reference {
  bool na_q = false;
  std::optional<Rational> quasi_sure;  // = sup over the union support
  std::optional<Rational> lower;       // max over NA members of their prices
  std::vector<std::pair<Member, std::optional<Rational>>> mono;  // NA members and their prices
};

inline Reference reference(const MarketModel& model, const Claim& claim, std::size_t limit = 4096) {
  Reference ref;
  const Polytope poly = martingale_vertices(model);
  const auto all = members(model, limit);
  LeafSet uni(poly.leaves.size(), false);
  for (const auto& m : all) {
    for (std::size_t l = 0; l < uni.size(); ++l) uni[l] = uni[l] || m.leaves[l];
  }
  ref.na_q = na_on(poly, uni);
  if (ref.na_q) ref.quasi_sure = best_on(poly, uni, claim);
  std::map<LeafSet, std::optional<Rational>> cache;
  for (const auto& m : all) {
    auto it = cache.find(m.leaves);
    if (it == cache.end()) {
      std::optional<Rational> v;
      if (na_on(poly, m.leaves)) v = best_on(poly, m.leaves, claim);
      it = cache.emplace(m.leaves, v).first;
    }
    if (!it->second) continue;
    if (!ref.lower || *it->second > *ref.lower) ref.lower = it->second;
    ref.mono.emplace_back(m, it->second);
  }
  return ref;
}

}  // namespace oracle
