#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "robusthedge/model.hpp"
#include "json.hpp"

namespace robusthedge {

struct MarketFile {
  MarketModel model;
  std::optional<Claim> claim;

  bool operator==(const MarketFile&) const = default;
};

/// Parses and validates a market file (UTF-8 JSON). Throws ParseError for
/// malformed JSON or rationals and ValidationError for data that breaks a
/// model invariant.
MarketFile load_market(std::string_view bytes);

MarketFile load_market_path(const std::string& path);

nlohmann::ordered_json market_to_json(const MarketModel& model, const std::optional<Claim>& claim);
std::string save_market(const MarketModel& model, const std::optional<Claim>& claim, int indent = 2);

/// Claim as a map leaf-key -> rational string.
nlohmann::ordered_json claim_to_json(const MarketModel& model, const Claim& claim);
Claim claim_from_json(const MarketModel& model, const nlohmann::json& j, const std::string& field = "claim");

nlohmann::ordered_json prior_to_json(const MarketModel& model, const ProductPrior& prior);
ProductPrior prior_from_json(const MarketModel& model, const nlohmann::json& j);

nlohmann::ordered_json points_to_json(const std::vector<Vec>& points);
nlohmann::ordered_json vec_to_json(const Vec& v);

std::string read_file(const std::string& path);

}  // namespace robusthedge
