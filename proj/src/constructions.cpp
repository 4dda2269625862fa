#include "robusthedge/constructions.hpp"

#include <algorithm>

#include "robusthedge/arbitrage.hpp"
#include "robusthedge/lp.hpp"
#include "robusthedge/pricing.hpp"
#include "robusthedge/supports.hpp"

namespace robusthedge {

namespace {

// 2^-n / (1 - 2^-m) = 2^(m-n) / (2^m - 1), for n = 1..m.
std::vector<Rational> geometric_weights(std::size_t m) {
  const mpz_class denom = (mpz_class(1) << static_cast<mp_bitcnt_t>(m)) - 1;
  std::vector<Rational> w;
  for (std::size_t n = 1; n <= m; ++n) {
    Rational r(mpz_class(1) << static_cast<mp_bitcnt_t>(m - n), denom);
    r.canonicalize();
    w.push_back(r);
  }
  return w;
}

}  // namespace

std::vector<Rational> ptilde_mixture(const MarketModel& model, const Path& node) {
  const auto& gens = model.generators(node);
  const SupportSet d = support_qs(model, node);
  const int arity = model.lattice.arity(static_cast<int>(node.size()));
  // Charged outcomes ordered by their increment point, then by index.
  std::vector<int> atoms;
  for (int o = 0; o < arity; ++o) {
    if (d.outcome_point[o]) atoms.push_back(o);
  }
  std::stable_sort(atoms.begin(), atoms.end(),
                   [&](int a, int b) { return *d.outcome_point[a] < *d.outcome_point[b]; });
  const auto weights = geometric_weights(atoms.size());
  std::vector<Rational> mix(gens.size(), Rational(0));
  for (std::size_t n = 0; n < atoms.size(); ++n) {
    for (std::size_t g = 0; g < gens.size(); ++g) {
      if (gens[g].charges(atoms[n])) {
        mix[g] += weights[n];
        break;
      }
    }
  }
  return mix;
}

Kernel build_ptilde_kernel(const MarketModel& model, const Path& node) {
  return mix_kernels(model.generators(node), ptilde_mixture(model, node));
}

ProductPrior build_ptilde_measure(const MarketModel& model) {
  ProductPrior p;
  for (const auto& node : model.lattice.internal_nodes()) p.mixtures[node] = ptilde_mixture(model, node);
  return p;
}

AugmentedKernelSet augment(const MarketModel& model, const Path& node, const Rational& lambda) {
  if (sgn(lambda) <= 0 || lambda > 1) throw LambdaOutOfRange("lambda must lie in (0, 1], got " + to_string(lambda));
  AugmentedKernelSet a;
  a.node = node;
  a.base = model.generators(node);
  a.ptilde = build_ptilde_kernel(model, node);
  a.lambda = lambda;
  for (const auto& q : a.base) {
    Kernel k{Vec(q.weights.size())};
    for (std::size_t o = 0; o < q.weights.size(); ++o) k.weights[o] = lambda * a.ptilde.weights[o] + (1 - lambda) * q.weights[o];
    if (std::find(a.mixed_generators.begin(), a.mixed_generators.end(), k) == a.mixed_generators.end()) {
      a.mixed_generators.push_back(std::move(k));
    }
  }
  return a;
}

MarketModel build_ptilde_family(const MarketModel& model, const Rational& lambda) {
  MarketModel out = model;
  out.root_generators = augment(model, Path{}, lambda).mixed_generators;
  for (auto& [node, gens] : out.kernels) gens = augment(model, node, lambda).mixed_generators;
  return out;
}

ProductPrior build_phat(const MarketModel& model, const PatternFamily& family, const Claim& claim,
                        std::size_t candidate_limit) {
  const LowerPrice lower = price_lower(model, family, claim, true);
  const auto nodes = model.lattice.internal_nodes();
  std::vector<Pattern> lower_code;
  for (const auto& n : nodes) lower_code.push_back(lower.patterns.at(n));

  auto members = pattern_members(model, family, explosion_cap(), candidate_limit);
  if (std::none_of(members.begin(), members.end(), [&](const auto& m) { return m.first == lower_code; })) {
    members.emplace_back(lower_code, lower.maximizer);
  }

  struct Candidate {
    Rational price;
    std::vector<Pattern> code;
    const ProductPrior* prior;
  };
  std::vector<Candidate> ranked;
  for (const auto& [code, prior] : members) ranked.push_back({price_mono(model, prior, claim).price, code, &prior});
  std::sort(ranked.begin(), ranked.end(), [](const Candidate& a, const Candidate& b) {
    if (a.price != b.price) return a.price > b.price;
    return a.code < b.code;
  });

  const auto weights = geometric_weights(ranked.size());
  ProductPrior phat;
  for (const auto& node : nodes) {
    std::vector<Rational> mix(model.generators(node).size(), Rational(0));
    for (std::size_t n = 0; n < ranked.size(); ++n) {
      const auto& m = ranked[n].prior->mixtures.at(node);
      for (std::size_t g = 0; g < mix.size(); ++g) mix[g] += weights[n] * m[g];
    }
    phat.mixtures[node] = std::move(mix);
  }
  return phat;
}

ProductPrior na_repair_mixture(const MarketModel& model, const ProductPrior& q) {
  check_shape(model, q);
  const NaVerdict na = global_na_qs(model);
  if (!na.holds) {
    throw NoArbitrageViolation(*na.node, na.certificate,
                               "NA(Q) fails at node \"" + model.lattice.key(*na.node) + "\"");
  }
  return mix_priors(q, build_ptilde_measure(model), Rational(1, 2));
}

HullMembership hull_membership(const MarketModel& model, const KernelPrior& prior) {
  check_shape(model, prior);
  HullMembership out;
  for (const auto& node : model.lattice.internal_nodes()) {
    const auto& gens = model.generators(node);
    const Kernel& k = prior.at(node);
    lp::LinearProgram prog;
    for (std::size_t g = 0; g < gens.size(); ++g) prog.add_variable(0, lp::Bounds::nonnegative());
    prog.add_constraint(Vec(gens.size(), Rational(1)), lp::Relation::Equal, 1);
    for (std::size_t o = 0; o < k.weights.size(); ++o) {
      Vec row(gens.size());
      for (std::size_t g = 0; g < gens.size(); ++g) row[g] = gens[g].weights[o];
      prog.add_constraint(std::move(row), lp::Relation::Equal, k.weights[o]);
    }
    const bool member = lp::solve(prog).status == lp::Status::Optimal;
    out.per_node[node] = member;
    out.overall = out.overall && member;
  }
  return out;
}

HullMembership hull_membership(const MarketModel& model, const ProductPrior& prior) {
  return hull_membership(model, induced_kernels(model, prior));
}

}  // namespace robusthedge
