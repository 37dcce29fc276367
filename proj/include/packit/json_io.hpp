#pragma once

#include <json.hpp>

#include "packit/arithmetic.hpp"
#include "packit/encoding.hpp"
#include "packit/error.hpp"
#include "packit/rules.hpp"
#include "packit/search.hpp"

namespace packit {

/// Version of the state document below; bumped on incompatible changes.
inline constexpr int kStateSchemaVersion = 1;

nlohmann::json to_json(const Placement& p);
nlohmann::json to_json(const std::vector<Placement>& moves);

/// {schema_version, rows, cols, turn, start_turn, cells (row arrays of turn
/// tags, 0 empty, -1 prefilled), transcript, occupied, free, full, perfect}.
nlohmann::json to_json(const GameState& state);

nlohmann::json to_json(const ArithmeticProfile& profile);
nlohmann::json to_json(const Verdict& verdict);
nlohmann::json to_json(const ClauseStats& stats);
nlohmann::json to_json(const PackingResult& result);
nlohmann::json to_json(const Feasibility& feasibility);

/// ApiError document {code, message, detail}.
nlohmann::json api_error(std::string_view code, std::string_view message,
                         const nlohmann::json& detail = nullptr);
nlohmann::json api_error(const Error& error, const nlohmann::json& detail = nullptr);

/// Reads {t, h, v, x, y}. Throws Error(Parse) on missing or non-integer fields.
Placement placement_from_json(const nlohmann::json& doc);

}  // namespace packit
