#include "packit/json_io.hpp"

#include <limits>

namespace packit {

using nlohmann::json;

json to_json(const Placement& p) {
  return json{{"t", p.turn}, {"h", p.h}, {"v", p.v}, {"x", p.x}, {"y", p.y}};
}

json to_json(const std::vector<Placement>& moves) {
  json out = json::array();
  for (const Placement& p : moves) out.push_back(to_json(p));
  return out;
}

json to_json(const GameState& state) {
  const GridDims dims = state.dims();
  json cells = json::array();
  for (int r = 0; r < dims.rows; ++r) {
    json row = json::array();
    for (int c = 0; c < dims.cols; ++c) row.push_back(state.tag(r, c));
    cells.push_back(std::move(row));
  }
  return json{{"schema_version", kStateSchemaVersion},
              {"rows", dims.rows},
              {"cols", dims.cols},
              {"turn", state.turn()},
              {"start_turn", state.start_turn()},
              {"cells", std::move(cells)},
              {"transcript", to_json(state.transcript())},
              {"occupied", state.occupied_count()},
              {"free", state.free_count()},
              {"full", state.full()},
              {"perfect", state.full()}};
}

json to_json(const ArithmeticProfile& profile) {
  return json{{"rows", profile.dims.rows},
              {"cols", profile.dims.cols},
              {"rectangles", profile.rectangles},
              {"gap", profile.gap},
              {"primes", profile.primes},
              {"next_is_prime", profile.next_is_prime},
              {"next_prime_blocked", profile.next_prime_blocked}};
}

json to_json(const Verdict& verdict) {
  return json{{"kind", verdict_name(verdict.kind)},
              {"witness", verdict.witness},
              {"profile", to_json(verdict.profile)}};
}

json to_json(const ClauseStats& stats) {
  json families = json::object();
  for (const auto& [family, count] : stats.by_family) {
    families[std::string(family_name(static_cast<ClauseFamily>(family)))] = count;
  }
  return json{{"vars", stats.vars}, {"clauses", stats.clauses}, {"by_family", std::move(families)}};
}

json to_json(const PackingResult& result) {
  json out{{"status", packing_status_name(result.status)},
           {"reason", result.reason},
           {"seconds", result.seconds},
           {"attempts", result.attempts},
           {"exhaustive", result.exhaustive},
           {"transcript", to_json(result.transcript)}};
  out["encoding"] = result.encoding ? to_json(*result.encoding) : json(nullptr);
  if (!result.solver_stats.empty()) out["solver_stats"] = result.solver_stats;
  return out;
}

json to_json(const Feasibility& feasibility) {
  return json{{"answer", feasibility_name(feasibility.answer)},
              {"seconds", feasibility.seconds},
              {"witness", to_json(feasibility.witness)}};
}

json api_error(std::string_view code, std::string_view message, const json& detail) {
  return json{{"code", code}, {"message", message}, {"detail", detail}};
}

json api_error(const Error& error, const json& detail) {
  return api_error(code_name(error.code()), error.what(), detail);
}

Placement placement_from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::Parse, "placement must be a JSON object");
  auto field = [&](const char* name) {
    const auto it = doc.find(name);
    if (it == doc.end() || !it->is_number_integer()) {
      throw Error(ErrorCode::Parse, std::string("placement field `") + name + "` must be an integer");
    }
    const auto value = it->get<std::int64_t>();
    if (value < std::numeric_limits<int>::min() || value > std::numeric_limits<int>::max()) {
      throw Error(ErrorCode::Parse, std::string("placement field `") + name + "` is out of range");
    }
    return static_cast<int>(value);
  };
  return Placement{field("t"), field("h"), field("v"), field("x"), field("y")};
}

}  // namespace packit
