#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "robusthedge/errors.hpp"
#include "robusthedge/rational.hpp"

namespace robusthedge {

/// Product scenario lattice Omega_1 x ... x Omega_T. Nodes are paths of
/// outcome indices; node keys in files join outcome labels with "/".
class ScenarioLattice {
 public:
  ScenarioLattice() = default;
  explicit ScenarioLattice(std::vector<std::vector<std::string>> periods);

  int horizon() const { return static_cast<int>(periods_.size()); }
  /// Labels of the outcomes that follow a node at depth `depth`.
  const std::vector<std::string>& outcomes_after(int depth) const { return periods_[depth]; }
  const std::vector<std::vector<std::string>>& periods() const { return periods_; }
  int arity(int depth) const { return static_cast<int>(periods_[depth].size()); }

  bool is_terminal(const Path& node) const { return static_cast<int>(node.size()) == horizon(); }
  /// All nodes at a depth, in lexicographic order.
  std::vector<Path> nodes_at(int depth) const;
  /// Non-terminal nodes by depth, then lexicographically. This is the order
  /// used for pure-selection and pattern encodings.
  std::vector<Path> internal_nodes() const;
  std::vector<Path> leaves() const { return nodes_at(horizon()); }
  std::size_t node_count() const;

  std::string key(const Path& node) const;
  /// Inverse of key(); throws ValidationError for unknown labels or depth.
  Path parse_key(const std::string& key, const std::string& field) const;
  int outcome_index(int depth, const std::string& label) const;

  bool operator==(const ScenarioLattice&) const = default;

 private:
  std::vector<std::vector<std::string>> periods_;
};

/// One-step transition law over the outcomes following a node.
struct Kernel {
  std::vector<Rational> weights;

  bool charges(int outcome) const { return sgn(weights[outcome]) > 0; }
  bool operator==(const Kernel&) const = default;
};

/// Convex combination of kernels; `mix` must be nonnegative and sum to one.
Kernel mix_kernels(const std::vector<Kernel>& kernels, const std::vector<Rational>& mix);

struct Claim {
  std::map<Path, Rational> payoff;

  const Rational& at(const Path& leaf) const;
  bool operator==(const Claim&) const = default;
};

/// Finite market: lattice, adapted prices, and the generators whose convex
/// hulls are the one-step prior sets (root generators span Q_1).
struct MarketModel {
  ScenarioLattice lattice;
  int assets = 1;
  std::map<Path, Vec> prices;
  std::vector<Kernel> root_generators;
  std::map<Path, std::vector<Kernel>> kernels;  // nodes at depth 1..T-1

  int horizon() const { return lattice.horizon(); }
  const std::vector<Kernel>& generators(const Path& node) const;
  const Vec& price(const Path& node) const;
  /// Delta S_{t+1}(node, outcome).
  Vec increment(const Path& node, int outcome) const;

  bool operator==(const MarketModel&) const = default;
};

/// Checks every invariant of the data model; throws ValidationError naming
/// the offending field.
void validate(const MarketModel& model);
void validate(const MarketModel& model, const Claim& claim);

/// Disintegrated prior given by mixture weights over the generators at each
/// non-terminal node. The root mixture is stored under the empty path.
struct ProductPrior {
  std::map<Path, std::vector<Rational>> mixtures;

  const std::vector<Rational>& root_mixture() const { return mixtures.at(Path{}); }
  bool operator==(const ProductPrior&) const = default;
};

/// Prior given directly by its one-step kernels (root under the empty path).
/// Used where a prior is not a priori a mixture of the model's generators.
using KernelPrior = std::map<Path, Kernel>;

/// Raises ShapeMismatch unless the prior has a valid mixture at every
/// non-terminal node.
void check_shape(const MarketModel& model, const ProductPrior& prior);
void check_shape(const MarketModel& model, const KernelPrior& prior);

KernelPrior induced_kernels(const MarketModel& model, const ProductPrior& prior);

/// Leaf weights P_1 (x) p_2 (x) ... (x) p_T.
std::map<Path, Rational> prior_measure(const MarketModel& model, const ProductPrior& prior);
std::map<Path, Rational> prior_measure(const MarketModel& model, const KernelPrior& prior);

/// Uniform mixture of all generators at every node.
ProductPrior full_mixture(const MarketModel& model);

/// Pure selection from generator indices, one per internal node in
/// ScenarioLattice::internal_nodes() order.
ProductPrior pure_selection(const MarketModel& model, const std::vector<int>& choice);

/// Number of pure selections (saturates at UINT64_MAX).
std::uint64_t pure_selection_count(const MarketModel& model);

/// All pure selections in lexicographic order of their choice vectors.
/// Throws ExplosionGuard when the count exceeds `cap`.
std::vector<ProductPrior> pure_selections(const MarketModel& model, std::size_t cap = explosion_cap());

/// Nodewise convex combination a*P + (1-a)*Q of the mixture weights.
ProductPrior mix_priors(const ProductPrior& p, const ProductPrior& q, const Rational& a);

struct HedgingStrategy {
  Rational initial_capital;
  std::map<Path, Vec> positions;  // phi_{t+1}(node); missing means flat
};

/// x + sum_s phi_s . Delta S_s along the path to `leaf`.
Rational terminal_wealth(const MarketModel& model, const HedgingStrategy& strategy, const Path& leaf);

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b);

}  // namespace robusthedge
