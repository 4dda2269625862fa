#include "robusthedge/market_io.hpp"

#include <fstream>
#include <sstream>

namespace robusthedge {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string quoted(const std::string& s) { return "[\"" + s + "\"]"; }

const json& require(const json& obj, const char* name) {
  if (!obj.is_object() || !obj.contains(name)) throw ParseError(std::string("missing field \"") + name + "\"");
  return obj.at(name);
}

Rational rational_field(const json& j, const std::string& field) {
  if (!j.is_string()) throw ParseError(field + ": expected a rational string");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const ParseError& e) {
    throw ParseError(field + ": " + e.what());
  }
}

Kernel kernel_from_json(const ScenarioLattice& lat, int depth, const json& j, const std::string& field) {
  if (!j.is_object()) throw ParseError(field + ": expected a weight map");
  Kernel k{Vec(lat.arity(depth), Rational(0))};
  for (const auto& [label, w] : j.items()) {
    const int o = lat.outcome_index(depth, label);
    if (o < 0) throw ValidationError(field, "unknown outcome \"" + label + "\"");
    k.weights[o] = rational_field(w, field + quoted(label));
  }
  return k;
}

std::vector<Kernel> generators_from_json(const ScenarioLattice& lat, int depth, const json& j,
                                         const std::string& field) {
  if (!j.is_array()) throw ParseError(field + ": expected a list of weight maps");
  std::vector<Kernel> out;
  for (std::size_t g = 0; g < j.size(); ++g) {
    out.push_back(kernel_from_json(lat, depth, j[g], field + "[" + std::to_string(g) + "]"));
  }
  return out;
}

ordered_json kernel_to_json(const ScenarioLattice& lat, int depth, const Kernel& k) {
  ordered_json out = ordered_json::object();
  for (int o = 0; o < lat.arity(depth); ++o) {
    if (sgn(k.weights[o]) != 0) out[lat.outcomes_after(depth)[o]] = to_string(k.weights[o]);
  }
  return out;
}

}  // namespace

ordered_json vec_to_json(const Vec& v) {
  ordered_json out = ordered_json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

ordered_json points_to_json(const std::vector<Vec>& points) {
  ordered_json out = ordered_json::array();
  for (const auto& p : points) out.push_back(vec_to_json(p));
  return out;
}

Claim claim_from_json(const MarketModel& model, const json& j, const std::string& field) {
  if (!j.is_object()) throw ParseError(field + ": expected a map leaf-key -> rational");
  Claim claim;
  for (const auto& [key, v] : j.items()) {
    const Path leaf = model.lattice.parse_key(key, field + quoted(key));
    if (!model.lattice.is_terminal(leaf)) throw ValidationError(field + quoted(key), "not a leaf");
    claim.payoff[leaf] = rational_field(v, field + quoted(key));
  }
  return claim;
}

ordered_json claim_to_json(const MarketModel& model, const Claim& claim) {
  ordered_json out = ordered_json::object();
  for (const auto& [leaf, v] : claim.payoff) out[model.lattice.key(leaf)] = to_string(v);
  return out;
}

MarketFile load_market(std::string_view bytes) {
  json doc;
  try {
    doc = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("market file must be a JSON object");

  const json& horizon = require(doc, "horizon");
  const json& assets = require(doc, "assets");
  const json& periods = require(doc, "periods");
  if (!horizon.is_number_integer()) throw ParseError("horizon: expected an integer");
  if (!assets.is_number_integer()) throw ParseError("assets: expected an integer");
  if (!periods.is_array()) throw ParseError("periods: expected a list");

  std::vector<std::vector<std::string>> alphabets;
  for (std::size_t t = 0; t < periods.size(); ++t) {
    const std::string field = "periods[" + std::to_string(t) + "].outcomes";
    const json& outs = require(periods[t], "outcomes");
    if (!outs.is_array()) throw ParseError(field + ": expected a list of strings");
    std::vector<std::string> labels;
    for (const auto& l : outs) {
      if (!l.is_string()) throw ParseError(field + ": expected a list of strings");
      labels.push_back(l.get<std::string>());
    }
    alphabets.push_back(std::move(labels));
  }
  if (horizon.get<long long>() != static_cast<long long>(alphabets.size())) {
    throw ValidationError("horizon", "horizon " + horizon.dump() + " differs from the " +
                                         std::to_string(alphabets.size()) + " listed periods");
  }

  MarketFile file;
  MarketModel& m = file.model;
  m.lattice = ScenarioLattice(std::move(alphabets));
  if (assets.get<long long>() < 1) throw ValidationError("assets", "must be at least 1");
  m.assets = static_cast<int>(assets.get<long long>());
  if (m.lattice.horizon() < 1) throw ValidationError("horizon", "must be at least 1");
  // Label checks come first so that keys parse unambiguously.
  {
    MarketModel probe;
    probe.lattice = m.lattice;
    try {
      validate(probe);
    } catch (const ValidationError& e) {
      if (e.field().rfind("periods", 0) == 0 || e.field() == "horizon") throw;
    }
  }

  const json& prices = require(doc, "prices");
  if (!prices.is_object()) throw ParseError("prices: expected a map node-key -> list");
  for (const auto& [key, v] : prices.items()) {
    const std::string field = "prices" + quoted(key);
    const Path node = m.lattice.parse_key(key, field);
    if (!v.is_array()) throw ParseError(field + ": expected a list of rational strings");
    Vec p;
    for (std::size_t i = 0; i < v.size(); ++i) p.push_back(rational_field(v[i], field + "[" + std::to_string(i) + "]"));
    m.prices[node] = std::move(p);
  }

  m.root_generators = generators_from_json(m.lattice, 0, require(doc, "root_generators"), "root_generators");

  if (doc.contains("kernels")) {
    const json& kernels = doc.at("kernels");
    if (!kernels.is_object()) throw ParseError("kernels: expected a map node-key -> list");
    for (const auto& [key, v] : kernels.items()) {
      const std::string field = "kernels" + quoted(key);
      const Path node = m.lattice.parse_key(key, field);
      if (node.empty() || m.lattice.is_terminal(node)) {
        throw ValidationError(field, "kernel sets belong to nodes at depth 1..T-1");
      }
      m.kernels[node] = generators_from_json(m.lattice, static_cast<int>(node.size()), v, field);
    }
  }

  if (doc.contains("claim")) {
    file.claim = claim_from_json(m, doc.at("claim"));
    validate(m, *file.claim);
  } else {
    validate(m);
  }
  return file;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

MarketFile load_market_path(const std::string& path) { return load_market(read_file(path)); }

ordered_json market_to_json(const MarketModel& model, const std::optional<Claim>& claim) {
  const auto& lat = model.lattice;
  ordered_json doc;
  doc["horizon"] = lat.horizon();
  doc["assets"] = model.assets;
  ordered_json periods = ordered_json::array();
  for (const auto& labels : lat.periods()) periods.push_back({{"outcomes", labels}});
  doc["periods"] = std::move(periods);

  ordered_json prices = ordered_json::object();
  for (int t = 0; t <= lat.horizon(); ++t) {
    for (const auto& node : lat.nodes_at(t)) prices[lat.key(node)] = vec_to_json(model.price(node));
  }
  doc["prices"] = std::move(prices);

  ordered_json roots = ordered_json::array();
  for (const auto& k : model.root_generators) roots.push_back(kernel_to_json(lat, 0, k));
  doc["root_generators"] = std::move(roots);

  ordered_json kernels = ordered_json::object();
  for (int t = 1; t < lat.horizon(); ++t) {
    for (const auto& node : lat.nodes_at(t)) {
      ordered_json list = ordered_json::array();
      for (const auto& k : model.generators(node)) list.push_back(kernel_to_json(lat, t, k));
      kernels[lat.key(node)] = std::move(list);
    }
  }
  doc["kernels"] = std::move(kernels);
  if (claim) doc["claim"] = claim_to_json(model, *claim);
  return doc;
}

std::string save_market(const MarketModel& model, const std::optional<Claim>& claim, int indent) {
  return market_to_json(model, claim).dump(indent);
}

ordered_json prior_to_json(const MarketModel& model, const ProductPrior& prior) {
  ordered_json out = ordered_json::object();
  for (const auto& node : model.lattice.internal_nodes()) {
    out[model.lattice.key(node)] = vec_to_json(prior.mixtures.at(node));
  }
  return out;
}

ProductPrior prior_from_json(const MarketModel& model, const json& j) {
  if (!j.is_object()) throw ParseError("prior: expected a map node-key -> mixture weights");
  ProductPrior p;
  for (const auto& [key, v] : j.items()) {
    const std::string field = "prior" + quoted(key);
    const Path node = model.lattice.parse_key(key, field);
    if (!v.is_array()) throw ParseError(field + ": expected a list of rational strings");
    std::vector<Rational> mix;
    for (std::size_t i = 0; i < v.size(); ++i) mix.push_back(rational_field(v[i], field + "[" + std::to_string(i) + "]"));
    p.mixtures[node] = std::move(mix);
  }
  check_shape(model, p);
  return p;
}

}  // namespace robusthedge
