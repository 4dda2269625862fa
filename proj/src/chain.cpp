#include "robusthedge/chain.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <thread>

#include "robusthedge/arbitrage.hpp"
#include "robusthedge/constructions.hpp"
#include "robusthedge/duality.hpp"
#include "robusthedge/market_io.hpp"
#include "robusthedge/pricing.hpp"
#include "robusthedge/supports.hpp"

namespace robusthedge {

using nlohmann::json;
using nlohmann::ordered_json;

bool ChainReport::all_pass() const {
  if (!na_holds || records.empty()) return false;
  return std::all_of(records.begin(), records.end(), [](const ChainRecord& r) { return r.pass; });
}

namespace {

class Recorder {
 public:
  explicit Recorder(ChainReport& r) : report_(r) {}

  void equal(std::string name, const Rational& left, const Rational& right, std::string witness = {}) {
    report_.records.push_back({std::move(name), to_string(left), to_string(right), left == right, std::move(witness)});
  }

  void holds(std::string name, bool ok, std::string witness = {}) {
    report_.records.push_back({std::move(name), ok ? "holds" : "fails", "holds", ok, std::move(witness)});
  }

  void error(std::string name, const std::exception& e) {
    report_.records.push_back({std::move(name), "error", "value", false, e.what()});
  }

 private:
  ChainReport& report_;
};

std::string node_witness(const MarketModel& model, const std::optional<Path>& node) {
  if (!node) return {};
  return "node \"" + model.lattice.key(*node) + "\"";
}

// Pure selections used for the domination clause: all of them when few,
// otherwise the "diagonal" selections s_i choosing generator min(i, g-1) at
// every node, which together use every (node, generator) pair.
std::vector<ProductPrior> domination_selections(const MarketModel& model, std::size_t limit) {
  if (pure_selection_count(model) <= limit) return pure_selections(model, limit);
  const auto nodes = model.lattice.internal_nodes();
  std::size_t widest = 0;
  for (const auto& n : nodes) widest = std::max(widest, model.generators(n).size());
  std::vector<ProductPrior> out;
  for (std::size_t i = 0; i < widest; ++i) {
    std::vector<int> choice;
    for (const auto& n : nodes) choice.push_back(static_cast<int>(std::min(i, model.generators(n).size() - 1)));
    out.push_back(pure_selection(model, choice));
  }
  return out;
}

bool dominated(const std::map<Path, Rational>& q, const std::map<Path, Rational>& p) {
  for (const auto& [leaf, w] : q) {
    if (sgn(w) > 0 && sgn(p.at(leaf)) == 0) return false;
  }
  return true;
}

}  // namespace

ChainReport verify_chain(const MarketModel& model, const Claim& claim, const ChainOptions& options) {
  ChainReport report;
  const NaVerdict na = global_na_qs(model);
  if (!na.holds) {
    report.na_holds = false;
    report.na_failure = "node \"" + model.lattice.key(*na.node) + "\", h = " + to_string(na.certificate);
    return report;
  }
  Recorder rec(report);
  const ReachableTree tree = reachable(model);

  Rational pi_q;
  try {
    const PriceReport qs = price_quasi_sure(model, claim);
    pi_q = qs.price;
    report.common_value = to_string(pi_q);
    const auto bad = find_superhedge_violation(model, qs, claim, tree);
    rec.holds("quasi-sure hedge dominates H on the reachable tree", !bad, node_witness(model, bad));
  } catch (const std::exception& e) {
    rec.error("pi_Q", e);
    return report;
  }

  // Ptilde family: price, prior-by-prior price, supremum and Phat.
  try {
    const MarketModel family_model = build_ptilde_family(model, options.lambda);
    const PatternFamily family = PatternFamily::all(family_model);
    const Rational pi_family = price_quasi_sure(family_model, claim).price;
    rec.equal("pi_Q == pi_Ptilde_family", pi_q, pi_family);

    const LowerPrice lower = price_lower(family_model, family, claim, true);
    rec.equal("pi_Ptilde_family == lower_pi_Ptilde_family", pi_family, lower.price);

    const Rational sup_mono = price_mono(family_model, lower.maximizer, claim).price;
    rec.equal("lower_pi_Ptilde_family == sup_P pi_P", lower.price, sup_mono);

    const ProductPrior phat = build_phat(family_model, family, claim, options.phat_candidates);
    const KernelPrior phat_kernels = induced_kernels(family_model, phat);
    const Rational pi_phat = price_mono(family_model, phat_kernels, claim).price;
    rec.equal("sup_P pi_P == pi_Phat", sup_mono, pi_phat);

    const NaVerdict na_phat = na_prior(family_model, phat_kernels);
    rec.holds("NA(Phat)", na_phat.holds, node_witness(model, na_phat.node));

    const Rational mono_dual = dual_sup_on(model, prior_tree(model, phat_kernels), claim).value;
    rec.equal("pi_Phat == sup over martingale measures << Phat", pi_phat, mono_dual);

    const auto d_phat = supports_match(model, std::vector<KernelPrior>{phat_kernels}, QuasiSure{});
    rec.holds("D_Phat == D_Q", d_phat.matches && prior_tree(model, phat_kernels) == tree,
              node_witness(model, d_phat.first_difference));

    const HullMembership phat_hull = hull_membership(model, phat_kernels);
    rec.holds("Phat lies in the hull of the generators", phat_hull.overall);

    // Every augmented generator charges exactly D_Q at every reachable node.
    std::optional<Path> bad_member;
    for (const auto& node : internal_nodes_of(model, tree)) {
      const auto dq = support_qs(model, node);
      for (const auto& g : family_model.generators(node)) {
        if (support_of(model, node, {g}).points != dq.points && !bad_member) bad_member = node;
      }
    }
    rec.holds("D_P == D_Q for every Ptilde-family generator", !bad_member, node_witness(model, bad_member));

    const NaVerdict sna = sna_family(family_model, family);
    rec.holds("sNA(Ptilde family)", sna.holds, node_witness(model, sna.node));

    const bool same_tree = reachable(family_model) == tree;
    const auto same_supports = supports_match(model, QuasiSure{}, QuasiSure{});
    const auto cross = supports_match(family_model, QuasiSure{}, QuasiSure{});
    bool qs_equal = true;
    for (const auto& node : internal_nodes_of(model, tree)) {
      qs_equal = qs_equal && support_qs(model, node).points == support_qs(family_model, node).points;
    }
    rec.holds("Ptilde family and Q have the same polar sets",
              same_tree && qs_equal && same_supports.matches && cross.matches);

    std::optional<std::string> domination_failure;
    for (const auto& q : domination_selections(model, options.selection_limit)) {
      const ProductPrior r = na_repair_mixture(model, q);
      const KernelPrior rk = induced_kernels(model, r);
      std::string why;
      if (!dominated(prior_measure(model, q), prior_measure(model, rk))) why = "Q not absolutely continuous";
      else if (!na_prior(model, rk).holds) why = "NA fails for the repair mixture";
      else if (!supports_match(model, std::vector<KernelPrior>{rk}, QuasiSure{}).matches ||
               prior_tree(model, rk) != tree) {
        why = "supports differ";
      }
      else if (!hull_membership(family_model, rk).overall) why = "repair mixture outside the Ptilde family";
      if (!why.empty()) {
        domination_failure = why;
        break;
      }
    }
    rec.holds("every Q is dominated by a Ptilde-family member", !domination_failure,
              domination_failure.value_or(""));
  } catch (const std::exception& e) {
    rec.error("Ptilde family chain", e);
  }

  // Primal-dual equality and the equivalent-measure gap law.
  try {
    const DualResult dual = dual_sup(model, claim);
    rec.equal("pi_Q == sup over M_a,Q", pi_q, dual.value);
    const std::string mcheck = check_martingale(model, dual.measure, tree);
    rec.holds("dual maximizer is a martingale measure", mcheck.empty(), mcheck);

    const EquivalenceEvidence ev = dual_sup_equivalent(model, claim, options.perturbation_ns);
    const std::string hat_check = check_martingale(model, ev.full_support, tree);
    bool full = hat_check.empty();
    for (const auto& leaf : leaves_of(model, tree)) full = full && sgn(ev.full_support.leaf_weights.at(leaf)) > 0;
    rec.holds("M_hat is an equivalent martingale measure", full, hat_check);
    for (const auto& g : ev.gaps) {
      rec.equal("gap law n=" + std::to_string(g.n) + ": n*(v - E_Mn H) == v - E_Mhat H", g.gap * g.n, ev.constant);
    }
    rec.holds("gap constant is nonnegative", sgn(ev.constant) >= 0);
  } catch (const std::exception& e) {
    rec.error("duality", e);
  }

  // Prior-by-prior suprema over Q itself.
  try {
    const LowerPrice over_q = price_lower(model, PatternFamily::all(model), claim, false);
    rec.equal("sup_Q pi^Q == pi_Q", over_q.price, pi_q);
    const PatternFamily q_star_family = na_admissible_family(model);
    const LowerPrice over_star = price_lower(model, q_star_family, claim, true);
    rec.equal("pi_Q == lower_pi over Q*", pi_q, over_star.price);
    const Rational attained = price_mono(model, over_star.maximizer, claim).price;
    rec.equal("sup over Q* is attained", over_star.price, attained);
  } catch (const std::exception& e) {
    rec.error("suprema over Q", e);
  }

  try {
    const ProductPrior pt = build_ptilde_measure(model);
    const KernelPrior ptk = induced_kernels(model, pt);
    const auto m = supports_match(model, std::vector<KernelPrior>{ptk}, QuasiSure{});
    rec.holds("D_Ptilde == D_Q", m.matches && prior_tree(model, ptk) == tree, node_witness(model, m.first_difference));
    rec.holds("failure nodes of Ptilde equal those of Q",
              prior_failure_nodes(model, ptk) == qs_failure_nodes(model));
    rec.holds("Ptilde lies in the hull of the generators", hull_membership(model, ptk).overall);
  } catch (const std::exception& e) {
    rec.error("Ptilde measure", e);
  }
  return report;
}

ordered_json chain_to_json(const ChainReport& report) {
  ordered_json j;
  j["na_holds"] = report.na_holds;
  j["na_failure"] = report.na_failure;
  j["common_value"] = report.common_value;
  j["all_pass"] = report.all_pass();
  ordered_json recs = ordered_json::array();
  for (const auto& r : report.records) {
    recs.push_back({{"name", r.name}, {"left", r.left}, {"right", r.right}, {"pass", r.pass}, {"witness", r.witness}});
  }
  j["records"] = std::move(recs);
  return j;
}

ChainReport chain_from_json(const json& j) {
  ChainReport r;
  try {
    r.na_holds = j.at("na_holds").get<bool>();
    r.na_failure = j.at("na_failure").get<std::string>();
    r.common_value = j.at("common_value").get<std::string>();
    for (const auto& x : j.at("records")) {
      r.records.push_back({x.at("name").get<std::string>(), x.at("left").get<std::string>(),
                           x.at("right").get<std::string>(), x.at("pass").get<bool>(),
                           x.at("witness").get<std::string>()});
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed chain report: ") + e.what());
  }
  return r;
}

std::string chain_to_table(const ChainReport& report) {
  std::ostringstream out;
  if (!report.na_holds) {
    out << "NA(Q) fails: " << report.na_failure << "\n";
    return out.str();
  }
  std::size_t width = 0;
  for (const auto& r : report.records) width = std::max(width, r.name.size());
  for (const auto& r : report.records) {
    out << (r.pass ? "PASS  " : "FAIL  ") << r.name << std::string(width - r.name.size() + 2, ' ') << r.left;
    if (r.left != r.right) out << " vs " << r.right;
    if (!r.witness.empty()) out << "  [" << r.witness << "]";
    out << "\n";
  }
  out << (report.all_pass() ? "all PASS" : "FAIL") << ", common value " << report.common_value << "\n";
  return out.str();
}

namespace {

long draw(std::mt19937_64& rng, long k) { return static_cast<long>(rng() % static_cast<std::uint64_t>(k)); }

Rational ratio(long n, long d) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

}  // namespace

Instance random_instance(std::mt19937_64& rng, const RandomBounds& b) {
  Instance inst;
  MarketModel& m = inst.model;
  const int horizon = 1 + static_cast<int>(draw(rng, b.max_horizon));
  std::vector<std::vector<std::string>> periods;
  for (int t = 0; t < horizon; ++t) {
    const int arity = 2 + static_cast<int>(draw(rng, std::max(1, b.max_outcomes - 1)));
    std::vector<std::string> labels;
    for (int k = 0; k < arity; ++k) labels.push_back(std::string(1, static_cast<char>('a' + k)));
    periods.push_back(std::move(labels));
  }
  m.lattice = ScenarioLattice(std::move(periods));
  m.assets = 1 + static_cast<int>(draw(rng, b.max_assets));
  Vec s0;
  for (int i = 0; i < m.assets; ++i) s0.push_back(Rational(draw(rng, 5)));
  m.prices[Path{}] = s0;

  const long inc_den = 4;
  const long weight_cap = std::max<long>(1, b.max_denominator / std::max(1, b.max_outcomes));
  for (const auto& node : m.lattice.internal_nodes()) {
    const int arity = m.lattice.arity(static_cast<int>(node.size()));
    const int g_count = 1 + static_cast<int>(draw(rng, b.max_generators));
    std::vector<Kernel> gens;
    std::vector<bool> charged(arity, false);
    for (int g = 0; g < g_count; ++g) {
      const long mask = 1 + draw(rng, (1L << arity) - 1);
      std::vector<long> w(arity, 0);
      long total = 0;
      for (int o = 0; o < arity; ++o) {
        if (mask >> o & 1) {
          w[o] = 1 + draw(rng, weight_cap);
          total += w[o];
          charged[o] = true;
        }
      }
      Kernel k{Vec(arity)};
      for (int o = 0; o < arity; ++o) k.weights[o] = ratio(w[o], total);
      gens.push_back(std::move(k));
    }
    if (node.empty()) {
      m.root_generators = std::move(gens);
    } else {
      m.kernels[node] = std::move(gens);
    }

    const bool centered = draw(rng, 100) >= b.uncentered_percent;
    std::vector<int> charged_list;
    for (int o = 0; o < arity; ++o) {
      if (charged[o]) charged_list.push_back(o);
    }
    std::vector<std::vector<long>> inc(arity, std::vector<long>(m.assets));
    for (int i = 0; i < m.assets; ++i) {
      long sum = 0;
      for (int o = 0; o < arity; ++o) {
        inc[o][i] = draw(rng, 17) - 8;
        if (charged[o] && o != charged_list.back()) sum += inc[o][i];
      }
      // The charged increments average to zero, so zero lies in the relative
      // interior of their convex hull.
      if (centered) inc[charged_list.back()][i] = -sum;
    }
    const Vec& s = m.prices.at(node);
    for (int o = 0; o < arity; ++o) {
      Path child = node;
      child.push_back(o);
      Vec p(m.assets);
      for (int i = 0; i < m.assets; ++i) p[i] = s[i] + ratio(inc[o][i], inc_den);
      m.prices[child] = std::move(p);
    }
  }
  for (const auto& leaf : m.lattice.leaves()) {
    const long den = 1L << draw(rng, 3);
    inst.claim.payoff[leaf] = ratio(draw(rng, 17) - 8, den);
  }
  validate(m, inst.claim);
  return inst;
}

namespace {

void shift_subtree(MarketModel& m, const Path& root, int asset, const Rational& delta) {
  for (auto& [node, price] : m.prices) {
    if (node.size() >= root.size() && std::equal(root.begin(), root.end(), node.begin())) price[asset] += delta;
  }
}

}  // namespace

void inject_arbitrage(Instance& inst, std::mt19937_64& rng) {
  MarketModel& m = inst.model;
  const auto nodes = internal_nodes_of(m, reachable(m));
  const Path node = nodes[draw(rng, static_cast<long>(nodes.size()))];
  const int arity = m.lattice.arity(static_cast<int>(node.size()));
  const SupportSet s = support_qs(m, node);
  std::optional<Rational> low;
  std::vector<int> charged;
  for (int o = 0; o < arity; ++o) {
    if (!s.outcome_point[o]) continue;
    charged.push_back(o);
    const Rational x = m.increment(node, o)[0];
    if (!low || x < *low) low = x;
  }
  bool positive = false;
  for (int o = 0; o < arity; ++o) {
    Path child = node;
    child.push_back(o);
    shift_subtree(m, child, 0, -*low);
    positive = positive || (s.outcome_point[o] && sgn(m.increment(node, o)[0]) > 0);
  }
  if (!positive) {
    Path child = node;
    child.push_back(charged.front());
    shift_subtree(m, child, 0, Rational(1));
  }
  validate(m, inst.claim);
}

namespace {

// Removes outcome `k` of period `t`; nullopt if that leaves a kernel set empty.
std::optional<Instance> drop_outcome(const Instance& inst, int t, int k) {
  const MarketModel& m = inst.model;
  if (m.lattice.arity(t) < 2) return std::nullopt;
  auto periods = m.lattice.periods();
  periods[t].erase(periods[t].begin() + k);
  auto remap = [&](const Path& p) -> std::optional<Path> {
    Path out = p;
    if (static_cast<int>(p.size()) > t) {
      if (p[t] == k) return std::nullopt;
      if (p[t] > k) --out[t];
    }
    return out;
  };
  Instance out;
  out.model.lattice = ScenarioLattice(periods);
  out.model.assets = m.assets;
  for (const auto& [node, price] : m.prices) {
    if (auto n = remap(node)) out.model.prices[*n] = price;
  }
  for (const auto& [leaf, v] : inst.claim.payoff) {
    if (auto n = remap(leaf)) out.claim.payoff[*n] = v;
  }
  auto reduce = [&](const std::vector<Kernel>& gens, int depth) {
    std::vector<Kernel> kept;
    for (const auto& g : gens) {
      Kernel k2 = g;
      if (depth == t) {
        k2.weights.erase(k2.weights.begin() + k);
        Rational total = 0;
        for (const auto& w : k2.weights) total += w;
        if (sgn(total) == 0) continue;
        for (auto& w : k2.weights) w /= total;
      }
      if (std::find(kept.begin(), kept.end(), k2) == kept.end()) kept.push_back(std::move(k2));
    }
    return kept;
  };
  out.model.root_generators = reduce(m.root_generators, 0);
  if (out.model.root_generators.empty()) return std::nullopt;
  for (const auto& [node, gens] : m.kernels) {
    auto n = remap(node);
    if (!n) continue;
    auto kept = reduce(gens, static_cast<int>(node.size()));
    if (kept.empty()) return std::nullopt;
    out.model.kernels[*n] = std::move(kept);
  }
  return out;
}

}  // namespace

Instance shrink(Instance inst, const std::function<bool(const Instance&)>& still_fails) {
  bool progress = true;
  while (progress) {
    progress = false;
    auto accept = [&](Instance candidate) {
      if (!still_fails(candidate)) return false;
      inst = std::move(candidate);
      progress = true;
      return true;
    };
    for (int t = 0; t < inst.model.horizon() && !progress; ++t) {
      for (int k = inst.model.lattice.arity(t) - 1; k >= 0 && !progress; --k) {
        if (auto c = drop_outcome(inst, t, k)) accept(std::move(*c));
      }
    }
    for (const auto& node : inst.model.lattice.internal_nodes()) {
      if (progress) break;
      const auto& gens = inst.model.generators(node);
      for (std::size_t g = gens.size(); g-- > 0 && gens.size() > 1 && !progress;) {
        Instance c = inst;
        auto& list = node.empty() ? c.model.root_generators : c.model.kernels.at(node);
        list.erase(list.begin() + static_cast<std::ptrdiff_t>(g));
        accept(std::move(c));
      }
    }
    for (const auto& [leaf, v] : inst.claim.payoff) {
      if (progress) break;
      if (sgn(v) == 0) continue;
      Instance c = inst;
      c.claim.payoff[leaf] = 0;
      accept(std::move(c));
    }
  }
  return inst;
}

RandomSummary verify_random(int count, std::uint64_t seed, const RandomBounds& bounds, unsigned threads) {
  RandomSummary summary;
  summary.requested = count;
  std::mt19937_64 rng(seed);
  std::vector<Instance> instances;
  const long max_attempts = 100L * std::max(count, 1);
  for (long attempt = 0; static_cast<int>(instances.size()) < count && attempt < max_attempts; ++attempt) {
    Instance inst = random_instance(rng, bounds);
    ++summary.generated;
    if (!global_na_qs(inst.model).holds) {
      ++summary.rejected;
      continue;
    }
    instances.push_back(std::move(inst));
  }

  std::vector<ChainReport> reports(instances.size());
  std::atomic<std::size_t> next{0};
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, instances.size())));
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < instances.size();) {
      reports[i] = verify_chain(instances[i].model, instances[i].claim);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (reports[i].all_pass()) {
      ++summary.passed;
      continue;
    }
    ++summary.failed;
    RandomFailure f;
    f.index = static_cast<int>(i);
    for (const auto& r : reports[i].records) {
      if (!r.pass) {
        f.first_failure = r.name + ": " + r.left + " vs " + r.right;
        break;
      }
    }
    const Instance small = shrink(instances[i], [](const Instance& c) {
      try {
        validate(c.model, c.claim);
        if (!global_na_qs(c.model).holds) return false;
        return !verify_chain(c.model, c.claim).all_pass();
      } catch (const Error&) {
        return false;
      }
    });
    f.shrunk_market = save_market(small.model, small.claim, -1);
    summary.failures.push_back(std::move(f));
  }
  return summary;
}

ordered_json summary_to_json(const RandomSummary& s) {
  ordered_json j;
  j["requested"] = s.requested;
  j["generated"] = s.generated;
  j["rejected_na"] = s.rejected;
  j["verified"] = s.passed + s.failed;
  j["passed"] = s.passed;
  j["failed"] = s.failed;
  ordered_json fs = ordered_json::array();
  for (const auto& f : s.failures) {
    fs.push_back({{"index", f.index}, {"first_failure", f.first_failure}, {"shrunk_market", f.shrunk_market}});
  }
  j["failures"] = std::move(fs);
  return j;
}

}  // namespace robusthedge
