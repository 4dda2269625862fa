#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "robusthedge/model.hpp"

namespace robusthedge {

/// One checked equality. Values are rational strings, or "match"/"mismatch"
/// style tokens for set equalities.
struct ChainRecord {
  std::string name;
  std::string left;
  std::string right;
  bool pass = false;
  std::string witness;

  bool operator==(const ChainRecord&) const = default;
};

struct ChainReport {
  bool na_holds = true;
  std::string na_failure;  // node key and certificate when NA(Q) fails
  std::string common_value;
  std::vector<ChainRecord> records;

  bool all_pass() const;
  bool operator==(const ChainReport&) const = default;
};

nlohmann::ordered_json chain_to_json(const ChainReport& report);
ChainReport chain_from_json(const nlohmann::json& j);
std::string chain_to_table(const ChainReport& report);

struct ChainOptions {
  Rational lambda = Rational(1, 2);
  std::vector<int> perturbation_ns{1, 10, 100};
  std::size_t phat_candidates = 32;
  std::size_t selection_limit = 64;  // pure selections enumerated for the domination check
};

/// Runs every price and support equality with exact comparison. When NA(Q)
/// fails the report carries the failure and no records.
ChainReport verify_chain(const MarketModel& model, const Claim& claim, const ChainOptions& options = {});

struct RandomBounds {
  int max_horizon = 3;
  int max_outcomes = 4;
  int max_assets = 2;
  int max_generators = 3;
  int max_denominator = 16;
  /// Probability (in 1/100) that a node's increments are left uncentered,
  /// which usually creates an arbitrage at that node.
  int uncentered_percent = 5;
};

struct Instance {
  MarketModel model;
  Claim claim;
};

/// Deterministic random market; increments are centered on the charged
/// outcomes at each node unless the node is drawn as uncentered.
Instance random_instance(std::mt19937_64& rng, const RandomBounds& bounds);

/// Shifts the increments of a reachable internal node so that every charged
/// increment of asset 0 is >= 0 with one > 0 (the subtree moves rigidly).
void inject_arbitrage(Instance& inst, std::mt19937_64& rng);

/// Greedy shrinking: repeatedly drops generators, outcomes, and zeroes
/// payoffs while `still_fails` holds.
Instance shrink(Instance inst, const std::function<bool(const Instance&)>& still_fails);

struct RandomFailure {
  int index = 0;
  std::string first_failure;
  std::string shrunk_market;  // market file of the shrunk counterexample

  bool operator==(const RandomFailure&) const = default;
};

struct RandomSummary {
  int requested = 0;
  int generated = 0;
  int rejected = 0;  // NA(Q) failed
  int passed = 0;
  int failed = 0;
  std::vector<RandomFailure> failures;

  bool operator==(const RandomSummary&) const = default;
};

/// Generates `count` NA-holding instances (rejecting and counting the rest)
/// and verifies the chain on each, in parallel over `threads` workers
/// (0 = hardware concurrency). The summary does not depend on the thread
/// count.
RandomSummary verify_random(int count, std::uint64_t seed, const RandomBounds& bounds = {}, unsigned threads = 0);

nlohmann::ordered_json summary_to_json(const RandomSummary& s);

}  // namespace robusthedge
