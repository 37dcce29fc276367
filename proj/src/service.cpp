#include "packit/service.hpp"

#include <httplib.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "packit/arithmetic.hpp"
#include "packit/error.hpp"
#include "packit/json_io.hpp"
#include "packit/sat_solver.hpp"
#include "packit/search.hpp"
#include "packit/text_format.hpp"

namespace packit {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kMaxSide = 200;
constexpr double kMaxBudgetSeconds = 600.0;

std::int64_t now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

HttpResponse reply(int status, const json& doc) { return HttpResponse{status, doc.dump()}; }

HttpResponse fail(int status, std::string_view code, std::string_view message, const json& detail = nullptr) {
  return reply(status, api_error(code, message, detail));
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Overlap:
    case ErrorCode::Area:
    case ErrorCode::Bounds:
    case ErrorCode::TurnMismatch:
      return 409;
    case ErrorCode::Solver:
      return 503;
    case ErrorCode::Decode:
      return 500;
    default:
      return 400;
  }
}

std::vector<std::string_view> split_path(std::string_view path) {
  if (const auto q = path.find('?'); q != std::string_view::npos) path = path.substr(0, q);
  std::vector<std::string_view> parts;
  while (!path.empty()) {
    const auto slash = path.find('/');
    const std::string_view part = path.substr(0, slash);
    if (!part.empty()) parts.push_back(part);
    if (slash == std::string_view::npos) break;
    path = path.substr(slash + 1);
  }
  return parts;
}

json parse_body(std::string_view body) {
  if (body.find_first_not_of(" \t\r\n") == std::string_view::npos) return json::object();
  json doc = json::parse(body.begin(), body.end(), nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorCode::Parse, "request body is not valid JSON");
  if (!doc.is_object()) throw Error(ErrorCode::Parse, "request body must be a JSON object");
  return doc;
}

int int_field(const json& doc, const char* name, int low, int high, std::optional<int> fallback = {}) {
  const auto it = doc.find(name);
  if (it == doc.end() || it->is_null()) {
    if (fallback) return *fallback;
    throw Error(ErrorCode::Parse, std::string("missing field `") + name + "`");
  }
  if (!it->is_number_integer()) throw Error(ErrorCode::Parse, std::string("`") + name + "` must be an integer");
  const auto value = it->get<std::int64_t>();
  if (value < low || value > high) {
    throw Error(ErrorCode::InvalidDims, std::string("`") + name + "` must lie in [" + std::to_string(low) + ", " +
                                            std::to_string(high) + "]");
  }
  return static_cast<int>(value);
}

double budget_field(const json& doc, double fallback) {
  const auto it = doc.find("budget_s");
  if (it == doc.end() || it->is_null()) return fallback;
  if (!it->is_number()) throw Error(ErrorCode::Parse, "`budget_s` must be a number");
  const double value = it->get<double>();
  if (!(value > 0) || value > kMaxBudgetSeconds) {
    throw Error(ErrorCode::Range, "`budget_s` must lie in (0, 600]");
  }
  return value;
}

std::chrono::milliseconds to_ms(double seconds) {
  return std::chrono::milliseconds(static_cast<std::int64_t>(seconds * 1000.0));
}

std::optional<std::int64_t> parse_dim(std::string_view text) {
  std::int64_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) return std::nullopt;
  return value;
}

std::string mask_string(const GameState& state) {
  std::string out;
  for (int cell : state.cells()) out += cell == kEmptyCell ? '.' : '#';
  return out;
}

}  // namespace

std::string_view mode_name(GameMode mode) { return mode == GameMode::Solitaire ? "solitaire" : "two-player"; }

struct Service::Session {
  std::mutex mu;
  std::string id;
  GameMode mode = GameMode::Solitaire;
  GameState initial;
  GameState state;
  std::int64_t created = 0;
  std::int64_t updated = 0;
  std::string log_path;

  Session(std::string id_, GameMode mode_, GameState start)
      : id(std::move(id_)), mode(mode_), initial(start), state(std::move(start)) {}

  void append(const std::string& line) const {
    if (log_path.empty()) return;
    std::ofstream out(log_path, std::ios::app);
    out << line << '\n';
    out.flush();
    if (!out) throw Error(ErrorCode::InvalidInput, "cannot write session log " + log_path);
  }

  json document() const {
    json doc{{"id", id},
             {"mode", mode_name(mode)},
             {"created_ms", created},
             {"updated_ms", updated},
             {"state", to_json(state)}};
    if (mode == GameMode::TwoPlayer) {
      const TwoPlayerStatus status = two_player_status(state);
      doc["two_player"] = json{{"mover", static_cast<int>(status.mover)},
                               {"finished", status.finished},
                               {"loser", status.loser ? json(static_cast<int>(*status.loser)) : json(nullptr)}};
    }
    return doc;
  }
};

Service::Service(ServiceConfig config) : config_(std::move(config)) {
  std::random_device rd;
  id_state_ = (std::uint64_t{rd()} << 32) ^ rd() ^ static_cast<std::uint64_t>(now_ms());
  if (!config_.data_dir.empty()) {
    fs::create_directories(config_.data_dir);
    load_sessions();
  }
}

Service::~Service() = default;

std::size_t Service::session_count() const {
  std::shared_lock lock(sessions_mu_);
  return sessions_.size();
}

bool Service::solver_available() const {
  return SatSolver(SolverConfig{config_.solver_path, config_.solver_args}).available();
}

std::string Service::new_id() {
  std::lock_guard lock(id_mu_);
  // splitmix64 over a random seed; collisions are checked by the caller.
  id_state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = id_state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << z;
  return os.str();
}

Service::SessionPtr Service::find(const std::string& id) const {
  std::shared_lock lock(sessions_mu_);
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

Service::SessionPtr Service::create(GameState initial, GameMode mode) {
  std::string id;
  do {
    id = new_id();
  } while (find(id));
  auto session = std::make_shared<Session>(id, mode, std::move(initial));
  session->created = session->updated = now_ms();
  if (!config_.data_dir.empty()) {
    session->log_path = (fs::path(config_.data_dir) / (id + ".log")).string();
    std::ostringstream header;
    const GridDims dims = session->initial.dims();
    header << "# packit session log\n"
           << "id " << id << '\n'
           << "mode " << mode_name(mode) << '\n'
           << "grid " << dims.rows << ' ' << dims.cols << ' ' << session->initial.start_turn() << '\n';
    if (session->initial.occupied_count() > 0) header << "prefill " << mask_string(session->initial) << '\n';
    header << "created " << session->created;
    session->append(header.str());
  }
  std::unique_lock lock(sessions_mu_);
  sessions_.emplace(id, session);
  return session;
}

void Service::load_sessions() {
  std::vector<fs::path> logs;
  for (const auto& entry : fs::directory_iterator(config_.data_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".log") logs.push_back(entry.path());
  }
  std::sort(logs.begin(), logs.end());
  for (const fs::path& path : logs) {
    try {
      std::ifstream in(path);
      std::string id;
      GameMode mode = GameMode::Solitaire;
      std::optional<GridDims> dims;
      int start_turn = 1;
      std::string prefill;
      std::int64_t created = 0;
      std::int64_t updated = 0;
      std::vector<Placement> moves;
      for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream words(line);
        std::string kind;
        words >> kind;
        if (kind == "id") {
          words >> id;
        } else if (kind == "mode") {
          std::string name;
          words >> name;
          if (name == "two-player") {
            mode = GameMode::TwoPlayer;
          } else if (name != "solitaire") {
            throw Error(ErrorCode::Parse, "unknown mode " + name);
          }
        } else if (kind == "grid") {
          GridDims d;
          if (!(words >> d.rows >> d.cols >> start_turn)) throw Error(ErrorCode::Parse, "bad grid line");
          dims = d;
        } else if (kind == "prefill") {
          words >> prefill;
        } else if (kind == "created") {
          words >> created;
          updated = created;
        } else if (kind == "move") {
          Placement p;
          if (!(words >> p.turn >> p.h >> p.v >> p.x >> p.y)) throw Error(ErrorCode::Parse, "bad move line");
          words >> updated;
          moves.push_back(p);
        } else if (kind == "undo") {
          if (moves.empty()) throw Error(ErrorCode::Parse, "undo without a move");
          moves.pop_back();
          words >> updated;
        } else {
          throw Error(ErrorCode::Parse, "unknown record `" + kind + "`");
        }
      }
      if (id.empty() || !dims) throw Error(ErrorCode::Parse, "missing id or grid record");
      if (id + ".log" != path.filename().string()) throw Error(ErrorCode::Parse, "id does not match file name");
      std::vector<bool> mask(static_cast<std::size_t>(dims->area()), false);
      if (!prefill.empty()) {
        if (prefill.size() != mask.size()) throw Error(ErrorCode::Parse, "prefill size mismatch");
        for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = prefill[i] == '#';
      }
      GameState initial = GameState::from_partial(*dims, mask, start_turn);
      GameState state = initial;
      for (const Placement& p : moves) state = apply_placement(state, p);
      auto session = std::make_shared<Session>(id, mode, std::move(initial));
      session->state = std::move(state);
      session->created = created;
      session->updated = updated;
      session->log_path = path.string();
      std::unique_lock lock(sessions_mu_);
      sessions_.emplace(id, std::move(session));
    } catch (const std::exception& e) {
      load_errors_.push_back(path.string() + ": " + e.what());
    }
  }
}

HttpResponse Service::handle(std::string_view method, std::string_view path, std::string_view body) {
  try {
    const auto parts = split_path(path);
    auto wrong_method = [&] { return fail(405, "method", "method not allowed on " + std::string(path)); };
    if (parts.size() == 1 && parts[0] == "health") {
      if (method != "GET") return wrong_method();
      return reply(200, json{{"status", "ok"},
                             {"schema_version", kStateSchemaVersion},
                             {"solver_available", solver_available()},
                             {"sessions", session_count()}});
    }
    if (!parts.empty() && parts[0] == "games") {
      if (parts.size() == 1) {
        if (method == "POST") return create_game(body);
        if (method == "GET") return list_games();
        return wrong_method();
      }
      if (parts.size() <= 3) {
        return session_request(std::string(parts[1]), parts.size() == 3 ? parts[2] : "", method, body);
      }
    }
    if (parts.size() == 3 && parts[0] == "verdict") {
      if (method != "GET") return wrong_method();
      return verdict_request(parts[1], parts[2]);
    }
    if (parts.size() == 1 && parts[0] == "solve") {
      if (method != "POST") return wrong_method();
      return solve_request(body);
    }
    return fail(404, "not-found", "no route for " + std::string(method) + " " + std::string(path));
  } catch (const Error& e) {
    return reply(status_for(e.code()), api_error(e));
  } catch (const std::exception& e) {
    return fail(500, "internal", e.what());
  }
}

HttpResponse Service::create_game(std::string_view body) {
  const json doc = parse_body(body);
  GameMode mode = GameMode::Solitaire;
  if (const auto it = doc.find("mode"); it != doc.end() && !it->is_null()) {
    if (!it->is_string()) throw Error(ErrorCode::Parse, "`mode` must be a string");
    const auto name = it->get<std::string>();
    if (name == "two-player") {
      mode = GameMode::TwoPlayer;
    } else if (name != "solitaire") {
      throw Error(ErrorCode::Parse, "`mode` must be \"solitaire\" or \"two-player\"");
    }
  }
  std::optional<GameState> initial;
  if (const auto it = doc.find("grid"); it != doc.end() && !it->is_null()) {
    if (!it->is_string()) throw Error(ErrorCode::Parse, "`grid` must be partial-grid text");
    initial = parse_partial_grid(it->get<std::string>());
    if (initial->dims().rows > kMaxSide || initial->dims().cols > kMaxSide) {
      throw Error(ErrorCode::InvalidDims, "grid sides are limited to " + std::to_string(kMaxSide));
    }
  } else {
    const int n = int_field(doc, "n", 1, kMaxSide);
    const int m = int_field(doc, "m", 1, kMaxSide, n);
    initial = GameState(GridDims{m, n});
  }
  const SessionPtr session = create(std::move(*initial), mode);
  std::lock_guard lock(session->mu);
  return reply(201, session->document());
}

HttpResponse Service::list_games() const {
  std::vector<SessionPtr> all;
  {
    std::shared_lock lock(sessions_mu_);
    for (const auto& [id, session] : sessions_) all.push_back(session);
  }
  json out = json::array();
  for (const SessionPtr& s : all) {
    std::lock_guard lock(s->mu);
    out.push_back(json{{"id", s->id},
                       {"mode", mode_name(s->mode)},
                       {"rows", s->state.dims().rows},
                       {"cols", s->state.dims().cols},
                       {"turn", s->state.turn()},
                       {"full", s->state.full()},
                       {"updated_ms", s->updated}});
  }
  std::sort(out.begin(), out.end(), [](const json& a, const json& b) { return a["id"] < b["id"]; });
  return reply(200, json{{"games", std::move(out)}});
}

HttpResponse Service::session_request(const std::string& id, std::string_view action, std::string_view method,
                                      std::string_view body) {
  const SessionPtr session = find(id);
  if (!session) return fail(404, "not-found", "unknown session " + id);
  std::lock_guard lock(session->mu);
  auto wrong_method = [&] { return fail(405, "method", "method not allowed"); };

  if (action.empty()) {
    if (method != "GET") return wrong_method();
    return reply(200, session->document());
  }
  if (action == "legal") {
    if (method != "GET") return wrong_method();
    return reply(200, json{{"turn", session->state.turn()}, {"placements", to_json(legal_placements(session->state))}});
  }
  if (action == "moves") {
    if (method != "POST") return wrong_method();
    const Placement p = placement_from_json(parse_body(body));
    try {
      GameState next = apply_placement(session->state, p);
      const std::int64_t stamp = now_ms();
      std::ostringstream line;
      line << "move " << p.turn << ' ' << p.h << ' ' << p.v << ' ' << p.x << ' ' << p.y << ' ' << stamp;
      session->append(line.str());
      session->state = std::move(next);
      session->updated = stamp;
    } catch (const Error& e) {
      return reply(status_for(e.code()), api_error(e, to_json(p)));
    }
    return reply(200, session->document());
  }
  if (action == "undo") {
    if (method != "POST") return wrong_method();
    const auto& moves = session->state.transcript();
    if (moves.empty()) return fail(409, "turn", "nothing to undo");
    GameState previous = session->initial;
    for (std::size_t i = 0; i + 1 < moves.size(); ++i) previous = apply_placement(previous, moves[i]);
    const std::int64_t stamp = now_ms();
    session->append("undo " + std::to_string(stamp));
    session->state = std::move(previous);
    session->updated = stamp;
    return reply(200, session->document());
  }
  if (action == "hint") {
    if (method != "POST") return wrong_method();
    const json doc = parse_body(body);
    CompletionOptions options;
    options.time_budget = to_ms(budget_field(doc, config_.default_budget));
    options.solver = SolverConfig{config_.solver_path, config_.solver_args};
    const bool full = doc.value("full", false);
    if (session->state.free_count() > options.brute_force_cells && !solver_available()) {
      return fail(503, "solver", "SAT solver `" + config_.solver_path + "` is not available");
    }
    const Feasibility answer = completion_query(session->state, options);
    json out{{"answer", feasibility_name(answer.answer)},
             {"seconds", answer.seconds},
             {"turn", session->state.turn()},
             {"suggestion", answer.witness.empty() ? json(nullptr) : to_json(answer.witness.front())}};
    if (full) out["witness"] = to_json(answer.witness);
    return reply(200, out);
  }
  return fail(404, "not-found", "unknown session action " + std::string(action));
}

HttpResponse Service::verdict_request(std::string_view m_text, std::string_view n_text) const {
  const auto m = parse_dim(m_text);
  const auto n = parse_dim(n_text);
  if (!m || !n) return fail(400, "parse", "grid dimensions must be integers");
  if (*m < 1 || *n < 1 || *m > 1'000'000 || *n > 1'000'000) {
    return fail(400, "invalid-dims", "grid dimensions must lie in [1, 1000000]");
  }
  return reply(200, to_json(verdict(*m, *n)));
}

HttpResponse Service::solve_request(std::string_view body) const {
  const json doc = parse_body(body);
  const int n = int_field(doc, "n", 1, kMaxSide);
  const int m = int_field(doc, "m", 1, kMaxSide, n);
  SearchOptions options;
  options.time_budget = to_ms(budget_field(doc, config_.default_budget));
  options.selection_retries = int_field(doc, "retries", 0, 1000, 8);
  options.solver = SolverConfig{config_.solver_path, config_.solver_args};
  if (verdict(m, n).kind == VerdictKind::Open && !solver_available()) {
    return fail(503, "solver", "SAT solver `" + config_.solver_path + "` is not available");
  }
  return reply(200, to_json(solve_perfect(GridDims{m, n}, options)));
}

// ---------------------------------------------------------------------------

struct HttpServer::Impl {
  Service& service;
  httplib::Server server;

  explicit Impl(Service& s) : service(s) {
    auto forward = [this](const httplib::Request& req, httplib::Response& res) {
      const HttpResponse out = service.handle(req.method, req.path, req.body);
      res.status = out.status;
      res.set_header("Access-Control-Allow-Origin", "*");
      res.set_content(out.body, "application/json");
    };
    server.Get(R"(/.*)", forward);
    server.Post(R"(/.*)", forward);
    server.Put(R"(/.*)", forward);
    server.Delete(R"(/.*)", forward);
    server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Origin", "*");
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });
  }
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::serve() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace packit
