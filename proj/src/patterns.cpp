#include "robusthedge/patterns.hpp"

#include <bit>
#include <set>

namespace robusthedge {

namespace {

constexpr std::size_t kMaxGeneratorsForPatterns = 20;

std::size_t checked_generator_count(const MarketModel& model, const Path& node) {
  const std::size_t g = model.generators(node).size();
  if (g > kMaxGeneratorsForPatterns) {
    throw ExplosionGuard("pattern enumeration needs at most " + std::to_string(kMaxGeneratorsForPatterns) +
                         " generators per node, got " + std::to_string(g));
  }
  return g;
}

}  // namespace

PatternFamily PatternFamily::all(const MarketModel& model) {
  PatternFamily f;
  for (const auto& node : model.lattice.internal_nodes()) {
    const std::size_t g = checked_generator_count(model, node);
    auto& list = f.patterns[node];
    for (Pattern p = 1; p < (Pattern{1} << g); ++p) list.push_back(p);
  }
  return f;
}

PatternFamily PatternFamily::pure(const MarketModel& model) {
  PatternFamily f;
  for (const auto& node : model.lattice.internal_nodes()) {
    const std::size_t g = checked_generator_count(model, node);
    auto& list = f.patterns[node];
    for (std::size_t i = 0; i < g; ++i) list.push_back(Pattern{1} << i);
  }
  return f;
}

std::uint64_t PatternFamily::member_count() const {
  std::uint64_t n = 1;
  for (const auto& [node, list] : patterns) n = saturating_mul(n, list.size());
  return n;
}

std::size_t PatternFamily::local_count() const {
  std::size_t n = 0;
  for (const auto& [node, list] : patterns) n += list.size();
  return n;
}

std::vector<Kernel> pattern_generators(const MarketModel& model, const Path& node, Pattern p) {
  const auto& gens = model.generators(node);
  std::vector<Kernel> out;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (p >> i & 1U) out.push_back(gens[i]);
  }
  return out;
}

std::vector<Rational> pattern_mixture(Pattern p, std::size_t generators) {
  const int size = std::popcount(p);
  std::vector<Rational> mix(generators, Rational(0));
  for (std::size_t i = 0; i < generators; ++i) {
    if (p >> i & 1U) {
      mix[i] = Rational(1, static_cast<unsigned long>(size));
      mix[i].canonicalize();
    }
  }
  return mix;
}

ProductPrior pattern_representative(const MarketModel& model, const std::map<Path, Pattern>& choice) {
  ProductPrior prior;
  for (const auto& node : model.lattice.internal_nodes()) {
    prior.mixtures[node] = pattern_mixture(choice.at(node), model.generators(node).size());
  }
  return prior;
}

std::vector<std::pair<std::vector<Pattern>, ProductPrior>> pattern_members(const MarketModel& model,
                                                                           const PatternFamily& family,
                                                                           std::size_t cap, std::size_t limit) {
  const std::uint64_t count = family.member_count();
  if (limit == SIZE_MAX && count > cap) {
    throw ExplosionGuard(std::to_string(count) + " support patterns exceed the cap of " + std::to_string(cap));
  }
  const auto nodes = model.lattice.internal_nodes();
  std::vector<std::size_t> index(nodes.size(), 0);
  std::vector<std::pair<std::vector<Pattern>, ProductPrior>> out;
  for (const auto& n : nodes) {
    if (family.at(n).empty()) return out;
  }
  while (out.size() < limit) {
    std::map<Path, Pattern> choice;
    std::vector<Pattern> code;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const Pattern p = family.at(nodes[i])[index[i]];
      choice[nodes[i]] = p;
      code.push_back(p);
    }
    out.emplace_back(std::move(code), pattern_representative(model, choice));
    int i = static_cast<int>(nodes.size()) - 1;
    while (i >= 0 && ++index[i] == family.at(nodes[i]).size()) index[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

std::vector<Path> family_internal_nodes(const MarketModel& model, const PatternFamily& family) {
  std::set<Path> reached{Path{}};
  std::vector<Path> out;
  for (const auto& node : model.lattice.internal_nodes()) {
    if (!reached.contains(node)) continue;
    out.push_back(node);
    const int arity = model.lattice.arity(static_cast<int>(node.size()));
    Pattern any = 0;
    for (Pattern p : family.at(node)) any |= p;
    const auto gens = pattern_generators(model, node, any);
    for (int o = 0; o < arity; ++o) {
      for (const auto& k : gens) {
        if (k.charges(o)) {
          Path child = node;
          child.push_back(o);
          reached.insert(std::move(child));
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace robusthedge
