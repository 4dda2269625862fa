#include "robusthedge/model.hpp"

#include <limits>
#include <set>

namespace robusthedge {

ScenarioLattice::ScenarioLattice(std::vector<std::vector<std::string>> periods) : periods_(std::move(periods)) {}

std::vector<Path> ScenarioLattice::nodes_at(int depth) const {
  std::vector<Path> out{Path{}};
  for (int t = 0; t < depth; ++t) {
    std::vector<Path> next;
    next.reserve(out.size() * periods_[t].size());
    for (const auto& p : out) {
      for (int k = 0; k < arity(t); ++k) {
        Path c = p;
        c.push_back(k);
        next.push_back(std::move(c));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<Path> ScenarioLattice::internal_nodes() const {
  std::vector<Path> out;
  for (int t = 0; t < horizon(); ++t) {
    auto level = nodes_at(t);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

std::size_t ScenarioLattice::node_count() const {
  std::size_t total = 1, level = 1;
  for (int t = 0; t < horizon(); ++t) {
    level *= periods_[t].size();
    total += level;
  }
  return total;
}

std::string ScenarioLattice::key(const Path& node) const {
  std::string out;
  for (std::size_t t = 0; t < node.size(); ++t) {
    if (t) out += '/';
    out += periods_[t][node[t]];
  }
  return out;
}

int ScenarioLattice::outcome_index(int depth, const std::string& label) const {
  const auto& labels = periods_[depth];
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (labels[k] == label) return static_cast<int>(k);
  }
  return -1;
}

Path ScenarioLattice::parse_key(const std::string& key, const std::string& field) const {
  Path node;
  if (key.empty()) return node;
  std::size_t start = 0;
  while (true) {
    const auto slash = key.find('/', start);
    const std::string label = key.substr(start, slash == std::string::npos ? std::string::npos : slash - start);
    const int depth = static_cast<int>(node.size());
    if (depth >= horizon()) throw ValidationError(field, "node key \"" + key + "\" is deeper than the horizon");
    const int k = outcome_index(depth, label);
    if (k < 0) throw ValidationError(field, "unknown outcome \"" + label + "\" in node key \"" + key + "\"");
    node.push_back(k);
    if (slash == std::string::npos) break;
    start = slash + 1;
  }
  return node;
}

Kernel mix_kernels(const std::vector<Kernel>& kernels, const std::vector<Rational>& mix) {
  Kernel out{Vec(kernels.front().weights.size(), Rational(0))};
  for (std::size_t g = 0; g < kernels.size(); ++g) {
    if (sgn(mix[g]) == 0) continue;
    for (std::size_t k = 0; k < out.weights.size(); ++k) out.weights[k] += mix[g] * kernels[g].weights[k];
  }
  return out;
}

const Rational& Claim::at(const Path& leaf) const {
  auto it = payoff.find(leaf);
  if (it == payoff.end()) throw ShapeMismatch("claim has no payoff at a leaf");
  return it->second;
}

const std::vector<Kernel>& MarketModel::generators(const Path& node) const {
  if (node.empty()) return root_generators;
  auto it = kernels.find(node);
  if (it == kernels.end()) throw ShapeMismatch("no kernel set at node " + lattice.key(node));
  return it->second;
}

const Vec& MarketModel::price(const Path& node) const {
  auto it = prices.find(node);
  if (it == prices.end()) throw ShapeMismatch("no price at node " + lattice.key(node));
  return it->second;
}

Vec MarketModel::increment(const Path& node, int outcome) const {
  Path child = node;
  child.push_back(outcome);
  return subtract(price(child), price(node));
}

namespace {

std::string quoted(const std::string& s) { return "[\"" + s + "\"]"; }

void validate_kernel(const Kernel& k, int arity, const std::string& field) {
  if (static_cast<int>(k.weights.size()) != arity) {
    throw ValidationError(field, "kernel has " + std::to_string(k.weights.size()) + " weights, expected " +
                                     std::to_string(arity));
  }
  Rational sum = 0;
  for (const auto& w : k.weights) {
    if (sgn(w) < 0) throw ValidationError(field, "negative weight " + to_string(w));
    sum += w;
  }
  if (sum != 1) throw ValidationError(field, "weights sum to " + to_string(sum) + ", expected 1");
}

void validate_generators(const std::vector<Kernel>& gens, int arity, const std::string& field) {
  if (gens.empty()) throw ValidationError(field, "empty generator list");
  for (std::size_t g = 0; g < gens.size(); ++g) {
    validate_kernel(gens[g], arity, field + "[" + std::to_string(g) + "]");
  }
}

}  // namespace

void validate(const MarketModel& model) {
  const auto& lat = model.lattice;
  if (lat.horizon() < 1) throw ValidationError("horizon", "must be at least 1");
  if (model.assets < 1) throw ValidationError("assets", "must be at least 1");
  for (int t = 0; t < lat.horizon(); ++t) {
    const std::string field = "periods[" + std::to_string(t) + "].outcomes";
    const auto& labels = lat.outcomes_after(t);
    if (labels.empty()) throw ValidationError(field, "empty outcome alphabet");
    std::set<std::string> seen;
    for (const auto& l : labels) {
      if (l.empty()) throw ValidationError(field, "empty outcome label");
      if (l.find('/') != std::string::npos) throw ValidationError(field, "label \"" + l + "\" contains '/'");
      if (!seen.insert(l).second) throw ValidationError(field, "duplicate label \"" + l + "\"");
    }
  }
  std::size_t expected_prices = 0;
  for (int t = 0; t <= lat.horizon(); ++t) {
    for (const auto& node : lat.nodes_at(t)) {
      ++expected_prices;
      const std::string field = "prices" + quoted(lat.key(node));
      auto it = model.prices.find(node);
      if (it == model.prices.end()) throw ValidationError(field, "missing node price");
      if (static_cast<int>(it->second.size()) != model.assets) {
        throw ValidationError(field, "price vector has " + std::to_string(it->second.size()) +
                                         " entries, expected " + std::to_string(model.assets));
      }
    }
  }
  if (model.prices.size() != expected_prices) throw ValidationError("prices", "price given for a non-existent node");

  validate_generators(model.root_generators, lat.arity(0), "root_generators");
  std::size_t expected_kernels = 0;
  for (int t = 1; t < lat.horizon(); ++t) {
    for (const auto& node : lat.nodes_at(t)) {
      ++expected_kernels;
      const std::string field = "kernels" + quoted(lat.key(node));
      auto it = model.kernels.find(node);
      if (it == model.kernels.end()) throw ValidationError(field, "missing kernel set");
      validate_generators(it->second, lat.arity(t), field);
    }
  }
  if (model.kernels.size() != expected_kernels) {
    throw ValidationError("kernels", "kernel set given for a terminal node, the root, or a non-existent node");
  }
}

void validate(const MarketModel& model, const Claim& claim) {
  validate(model);
  const auto leaves = model.lattice.leaves();
  for (const auto& leaf : leaves) {
    if (!claim.payoff.contains(leaf)) {
      throw ValidationError("claim" + quoted(model.lattice.key(leaf)), "missing payoff");
    }
  }
  if (claim.payoff.size() != leaves.size()) throw ValidationError("claim", "payoff given for a non-leaf node");
}

void check_shape(const MarketModel& model, const ProductPrior& prior) {
  for (const auto& node : model.lattice.internal_nodes()) {
    auto it = prior.mixtures.find(node);
    const std::string where = node.empty() ? std::string("root") : model.lattice.key(node);
    if (it == prior.mixtures.end()) throw ShapeMismatch("prior has no mixture at node " + where);
    const auto& gens = model.generators(node);
    if (it->second.size() != gens.size()) throw ShapeMismatch("prior mixture width differs at node " + where);
    Rational sum = 0;
    for (const auto& w : it->second) {
      if (sgn(w) < 0) throw ShapeMismatch("negative mixture weight at node " + where);
      sum += w;
    }
    if (sum != 1) throw ShapeMismatch("mixture weights do not sum to 1 at node " + where);
  }
}

void check_shape(const MarketModel& model, const KernelPrior& prior) {
  for (const auto& node : model.lattice.internal_nodes()) {
    auto it = prior.find(node);
    const std::string where = node.empty() ? std::string("root") : model.lattice.key(node);
    if (it == prior.end()) throw ShapeMismatch("prior has no kernel at node " + where);
    if (static_cast<int>(it->second.weights.size()) != model.lattice.arity(static_cast<int>(node.size()))) {
      throw ShapeMismatch("prior kernel width differs at node " + where);
    }
    Rational sum = 0;
    for (const auto& w : it->second.weights) {
      if (sgn(w) < 0) throw ShapeMismatch("negative kernel weight at node " + where);
      sum += w;
    }
    if (sum != 1) throw ShapeMismatch("kernel weights do not sum to 1 at node " + where);
  }
}

KernelPrior induced_kernels(const MarketModel& model, const ProductPrior& prior) {
  check_shape(model, prior);
  KernelPrior out;
  for (const auto& [node, mix] : prior.mixtures) out[node] = mix_kernels(model.generators(node), mix);
  return out;
}

std::map<Path, Rational> prior_measure(const MarketModel& model, const KernelPrior& prior) {
  check_shape(model, prior);
  std::map<Path, Rational> mass{{Path{}, Rational(1)}};
  for (int t = 0; t < model.horizon(); ++t) {
    std::map<Path, Rational> next;
    for (const auto& [node, m] : mass) {
      const Kernel& k = prior.at(node);
      for (int o = 0; o < static_cast<int>(k.weights.size()); ++o) {
        Path child = node;
        child.push_back(o);
        next[child] = m * k.weights[o];
      }
    }
    mass = std::move(next);
  }
  return mass;
}

std::map<Path, Rational> prior_measure(const MarketModel& model, const ProductPrior& prior) {
  return prior_measure(model, induced_kernels(model, prior));
}

ProductPrior full_mixture(const MarketModel& model) {
  ProductPrior p;
  for (const auto& node : model.lattice.internal_nodes()) {
    const auto g = model.generators(node).size();
    p.mixtures[node] = std::vector<Rational>(g, Rational(1, g));
  }
  for (auto& [node, mix] : p.mixtures) {
    for (auto& w : mix) w.canonicalize();
  }
  return p;
}

ProductPrior pure_selection(const MarketModel& model, const std::vector<int>& choice) {
  const auto nodes = model.lattice.internal_nodes();
  if (choice.size() != nodes.size()) throw ShapeMismatch("selection length differs from the number of internal nodes");
  ProductPrior p;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto g = model.generators(nodes[i]).size();
    if (choice[i] < 0 || static_cast<std::size_t>(choice[i]) >= g) {
      throw ShapeMismatch("generator index out of range at internal node " + std::to_string(i));
    }
    std::vector<Rational> mix(g, Rational(0));
    mix[choice[i]] = 1;
    p.mixtures[nodes[i]] = std::move(mix);
  }
  return p;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

std::uint64_t pure_selection_count(const MarketModel& model) {
  std::uint64_t count = 1;
  for (const auto& node : model.lattice.internal_nodes()) count = saturating_mul(count, model.generators(node).size());
  return count;
}

std::vector<ProductPrior> pure_selections(const MarketModel& model, std::size_t cap) {
  const std::uint64_t count = pure_selection_count(model);
  if (count > cap) {
    throw ExplosionGuard(std::to_string(count) + " pure selections exceed the cap of " + std::to_string(cap));
  }
  const auto nodes = model.lattice.internal_nodes();
  std::vector<int> sizes;
  for (const auto& n : nodes) sizes.push_back(static_cast<int>(model.generators(n).size()));
  std::vector<ProductPrior> out;
  out.reserve(count);
  std::vector<int> choice(nodes.size(), 0);
  while (true) {
    out.push_back(pure_selection(model, choice));
    int i = static_cast<int>(choice.size()) - 1;
    while (i >= 0 && ++choice[i] == sizes[i]) choice[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

ProductPrior mix_priors(const ProductPrior& p, const ProductPrior& q, const Rational& a) {
  ProductPrior out;
  for (const auto& [node, mp] : p.mixtures) {
    const auto& mq = q.mixtures.at(node);
    if (mp.size() != mq.size()) throw ShapeMismatch("priors have different generator counts");
    std::vector<Rational> m(mp.size());
    for (std::size_t g = 0; g < mp.size(); ++g) m[g] = a * mp[g] + (1 - a) * mq[g];
    out.mixtures[node] = std::move(m);
  }
  return out;
}

Rational terminal_wealth(const MarketModel& model, const HedgingStrategy& strategy, const Path& leaf) {
  Rational wealth = strategy.initial_capital;
  Path node;
  for (int o : leaf) {
    auto it = strategy.positions.find(node);
    if (it != strategy.positions.end()) wealth += dot(it->second, model.increment(node, o));
    node.push_back(o);
  }
  return wealth;
}

}  // namespace robusthedge
