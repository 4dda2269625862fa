#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "robusthedge/arbitrage.hpp"
#include "robusthedge/chain.hpp"
#include "robusthedge/constructions.hpp"
#include "robusthedge/duality.hpp"
#include "robusthedge/fixtures.hpp"
#include "robusthedge/market_io.hpp"
#include "robusthedge/pricing.hpp"
#include "robusthedge/supports.hpp"

using namespace robusthedge;
using nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 2;
constexpr int kViolation = 3;
constexpr int kCapacity = 4;

struct Options {
  std::string input;
  std::string output = "-";
  std::string format = "json";

  std::string mode = "qs";
  std::string prior = "uniform";
  std::string claim;
  std::string what = "ptilde";
  std::string lambda = "1/2";
  std::string fixture;
  int param = 0;
  int count = 200;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

void flatten(const ordered_json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + (k.empty() ? std::string("\"\"") : k), rows);
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", rows);
  } else if (j.is_string()) {
    rows.emplace_back(prefix, j.get<std::string>());
  } else {
    rows.emplace_back(prefix, j.dump());
  }
}

std::string as_table(const ordered_json& j) {
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(j, "", rows);
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.first.size());
  std::ostringstream out;
  for (const auto& [k, v] : rows) out << k << std::string(width - k.size() + 2, ' ') << v << "\n";
  return out.str();
}

void emit(const Options& o, const std::string& text) {
  if (o.output == "-" || o.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.output);
  if (!f) throw BadParameter("cannot write " + o.output);
  f << text;
}

void emit_json(const Options& o, const ordered_json& j) { emit(o, o.format == "table" ? as_table(j) : j.dump(2) + "\n"); }

MarketFile input_market(const Options& o) {
  if (o.input.empty()) throw BadParameter("--input is required");
  return load_market_path(o.input);
}

Claim builtin_claim(const MarketModel& model, const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw BadParameter("unknown claim '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  const Rational k = parse_rational(spec.substr(colon + 1));
  Claim c;
  for (const auto& leaf : model.lattice.leaves()) {
    const Rational s = model.price(leaf)[0];
    if (kind == "digital") {
      c.payoff[leaf] = s >= k ? 1 : 0;
    } else if (kind == "call") {
      c.payoff[leaf] = s > k ? Rational(s - k) : Rational(0);
    } else if (kind == "put") {
      c.payoff[leaf] = s < k ? Rational(k - s) : Rational(0);
    } else {
      throw BadParameter("unknown claim kind '" + kind + "'");
    }
  }
  return c;
}

Claim resolve_claim(const MarketFile& mf, const std::string& spec) {
  if (spec.empty()) {
    if (!mf.claim) throw BadParameter("no claim in the market file; pass --claim");
    return *mf.claim;
  }
  if (spec.find(':') != std::string::npos) return builtin_claim(mf.model, spec);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(spec));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("claim file: ") + e.what());
  }
  if (j.contains("claim")) j = j["claim"];
  Claim c = claim_from_json(mf.model, j);
  validate(mf.model, c);
  return c;
}

ProductPrior resolve_prior(const MarketModel& model, const std::string& spec) {
  if (spec == "uniform") return full_mixture(model);
  if (spec == "ptilde") return build_ptilde_measure(model);
  if (spec.rfind("pure:", 0) == 0) {
    std::vector<int> choice;
    std::stringstream ss(spec.substr(5));
    for (std::string item; std::getline(ss, item, ',');) {
      try {
        choice.push_back(std::stoi(item));
      } catch (const std::exception&) {
        throw BadParameter("bad pure selection '" + spec + "'");
      }
    }
    return pure_selection(model, choice);
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(spec));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("prior file: ") + e.what());
  }
  return prior_from_json(model, j);
}

// The prior as a model whose only generator at each node is its kernel.
MarketModel singleton_model(const MarketModel& model, const KernelPrior& prior) {
  MarketModel out = model;
  out.root_generators = {prior.at(Path{})};
  for (auto& [node, gens] : out.kernels) gens = {prior.at(node)};
  return out;
}

ordered_json node_values_json(const MarketModel& model, const std::map<Path, Rational>& values) {
  ordered_json j = ordered_json::object();
  for (const auto& [node, v] : values) j[model.lattice.key(node)] = to_string(v);
  return j;
}

ordered_json measure_json(const MarketModel& model, const MartingaleMeasure& m) {
  return node_values_json(model, m.leaf_weights);
}

ordered_json report_json(const MarketModel& model, const PriceReport& r) {
  ordered_json j;
  j["semantics"] = to_string(r.semantics);
  j["price"] = to_string(r.price);
  ordered_json positions = ordered_json::object();
  for (const auto& [node, h] : r.strategy.positions) positions[model.lattice.key(node)] = vec_to_json(h);
  j["strategy"] = {{"initial_capital", to_string(r.strategy.initial_capital)}, {"positions", positions}};
  j["node_values"] = node_values_json(model, r.node_values);
  return j;
}

int cmd_validate(const Options& o) {
  const MarketFile mf = input_market(o);
  ordered_json j;
  j["valid"] = true;
  j["horizon"] = mf.model.horizon();
  j["assets"] = mf.model.assets;
  j["nodes"] = mf.model.lattice.node_count();
  j["leaves"] = mf.model.lattice.leaves().size();
  j["reachable_nodes"] = reachable(mf.model).nodes.size();
  j["has_claim"] = mf.claim.has_value();
  emit_json(o, j);
  return kOk;
}

int cmd_price(const Options& o) {
  const MarketFile mf = input_market(o);
  const Claim claim = resolve_claim(mf, o.claim);
  if (o.mode == "qs") {
    emit_json(o, report_json(mf.model, price_quasi_sure(mf.model, claim)));
  } else if (o.mode == "mono") {
    emit_json(o, report_json(mf.model, price_mono(mf.model, resolve_prior(mf.model, o.prior), claim)));
  } else {
    const LowerPrice lp = price_lower(mf.model, PatternFamily::all(mf.model), claim, true);
    ordered_json j;
    j["semantics"] = to_string(PriceSemantics::Lower);
    j["price"] = to_string(lp.price);
    j["maximizer"] = prior_to_json(mf.model, lp.maximizer);
    emit_json(o, j);
  }
  return kOk;
}

int cmd_na(const Options& o) {
  const MarketFile mf = input_market(o);
  const NaVerdict v = global_na_qs(mf.model);
  ordered_json j;
  j["na_holds"] = v.holds;
  j["node"] = v.node ? ordered_json(mf.model.lattice.key(*v.node)) : ordered_json(nullptr);
  j["certificate"] = vec_to_json(v.certificate);
  ordered_json failures = ordered_json::array();
  for (const auto& n : qs_failure_nodes(mf.model)) failures.push_back(mf.model.lattice.key(n));
  j["failure_nodes"] = failures;
  emit_json(o, j);
  return v.holds ? kOk : kViolation;
}

int cmd_supports(const Options& o) {
  const MarketFile mf = input_market(o);
  const ReachableTree tree = reachable(mf.model);
  ordered_json j = ordered_json::object();
  for (const auto& node : internal_nodes_of(mf.model, tree)) {
    j[mf.model.lattice.key(node)] = points_to_json(support_qs(mf.model, node).points);
  }
  emit_json(o, j);
  return kOk;
}

int cmd_dual(const Options& o) {
  const MarketFile mf = input_market(o);
  const Claim claim = resolve_claim(mf, o.claim);
  const EquivalenceEvidence ev = dual_sup_equivalent(mf.model, claim, {1, 10, 100});
  ordered_json j;
  j["value"] = to_string(ev.value);
  j["maximizer"] = measure_json(mf.model, ev.maximizer);
  ordered_json evidence;
  evidence["full_support"] = measure_json(mf.model, ev.full_support);
  evidence["full_support_expectation"] = to_string(ev.full_support_expectation);
  evidence["constant"] = to_string(ev.constant);
  ordered_json gaps = ordered_json::array();
  for (const auto& g : ev.gaps) {
    gaps.push_back({{"n", g.n}, {"expectation", to_string(g.expectation)}, {"gap", to_string(g.gap)},
                    {"law_holds", g.law_holds}});
  }
  evidence["gaps"] = gaps;
  evidence["holds"] = ev.holds;
  j["evidence"] = evidence;
  emit_json(o, j);
  return kOk;
}

int cmd_construct(const Options& o) {
  const MarketFile mf = input_market(o);
  const Rational lambda = parse_rational(o.lambda);
  MarketModel out;
  if (o.what == "ptilde") {
    out = singleton_model(mf.model, induced_kernels(mf.model, build_ptilde_measure(mf.model)));
  } else if (o.what == "family") {
    out = build_ptilde_family(mf.model, lambda);
  } else if (o.what == "phat") {
    const Claim claim = resolve_claim(mf, o.claim);
    const MarketModel family = build_ptilde_family(mf.model, lambda);
    const ProductPrior phat = build_phat(family, PatternFamily::all(family), claim);
    out = singleton_model(mf.model, induced_kernels(family, phat));
  } else {
    const ProductPrior q = resolve_prior(mf.model, o.prior);
    out = singleton_model(mf.model, induced_kernels(mf.model, na_repair_mixture(mf.model, q)));
  }
  emit(o, save_market(out, mf.claim) + "\n");
  return kOk;
}

int cmd_fixture(const Options& o) {
  const FixtureName name = parse_fixture_name(o.fixture);
  FixtureSpec spec{name, o.param};
  if (name == FixtureName::B && o.param == 0) spec.param = 2;
  const auto [model, claim] = make_fixture(spec);
  emit(o, save_market(model, claim) + "\n");
  return kOk;
}

int cmd_verify_chain(const Options& o) {
  const MarketFile mf = input_market(o);
  const Claim claim = resolve_claim(mf, o.claim);
  const ChainReport r = verify_chain(mf.model, claim);
  emit(o, o.format == "table" ? chain_to_table(r) : chain_to_json(r).dump(2) + "\n");
  return r.all_pass() ? kOk : kViolation;
}

int cmd_verify_random(const Options& o) {
  if (o.count < 0) throw BadParameter("--count must be nonnegative");
  const RandomSummary s = verify_random(o.count, o.seed, RandomBounds{}, o.threads);
  emit_json(o, summary_to_json(s));
  return s.failed == 0 ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact robust super-replication prices on finite scenario trees"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--input", o.input, "market file (JSON)");
  app.add_option("--output", o.output, "output path, '-' for stdout");
  app.add_option("--format", o.format, "json or table")->check(CLI::IsMember({"json", "table"}));

  auto* validate_cmd = app.add_subcommand("validate", "parse and validate a market file");
  auto* price = app.add_subcommand("price", "super-replication price");
  price->add_option("--mode", o.mode, "qs, mono or lower")->check(CLI::IsMember({"qs", "mono", "lower"}));
  price->add_option("--prior", o.prior, "uniform | pure:i,j,... | ptilde | prior file");
  price->add_option("--claim", o.claim, "claim file or digital:K | call:K | put:K");
  auto* na = app.add_subcommand("na", "no-arbitrage verdict and certificate");
  auto* supports = app.add_subcommand("supports", "quasi-sure conditional supports");
  auto* dual = app.add_subcommand("dual", "martingale dual value and gap evidence");
  dual->add_option("--claim", o.claim, "claim file or builtin");
  auto* construct = app.add_subcommand("construct", "build a prior or prior family");
  construct->add_option("--what", o.what, "ptilde, phat, family or repair")
      ->check(CLI::IsMember({"ptilde", "phat", "family", "repair"}));
  construct->add_option("--lambda", o.lambda, "mixing weight in (0, 1]");
  construct->add_option("--prior", o.prior, "prior to repair");
  construct->add_option("--claim", o.claim, "claim file or builtin");
  auto* fixture = app.add_subcommand("fixture", "emit a fixture market");
  fixture->add_option("--name", o.fixture, "A, B, C or D")->required();
  fixture->add_option("--param", o.param, "B: truncation level; D: seed");
  auto* chain = app.add_subcommand("verify-chain", "check every price equality on a market");
  chain->add_option("--claim", o.claim, "claim file or builtin");
  auto* random = app.add_subcommand("verify-random", "run the equality chain on random markets");
  random->add_option("--count", o.count, "number of NA-holding instances");
  random->add_option("--seed", o.seed, "generator seed");
  random->add_option("--threads", o.threads, "worker threads, 0 for all cores");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(o);
    if (price->parsed()) return cmd_price(o);
    if (na->parsed()) return cmd_na(o);
    if (supports->parsed()) return cmd_supports(o);
    if (dual->parsed()) return cmd_dual(o);
    if (construct->parsed()) return cmd_construct(o);
    if (fixture->parsed()) return cmd_fixture(o);
    if (chain->parsed()) return cmd_verify_chain(o);
    if (random->parsed()) return cmd_verify_random(o);
  } catch (const NoArbitrageViolation& e) {
    std::cerr << "no-arbitrage violation: " << e.what() << "\n";
    return kViolation;
  } catch (const InfeasiblePolytope& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kViolation;
  } catch (const UnboundedBelow& e) {
    std::cerr << "unbounded: " << e.what() << "\n";
    return kViolation;
  } catch (const ExplosionGuard& e) {
    std::cerr << "capacity exceeded: " << e.what() << "\n";
    return kCapacity;
  } catch (const CapacityError& e) {
    std::cerr << "capacity exceeded: " << e.what() << "\n";
    return kCapacity;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input at " << e.field() << ": " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
