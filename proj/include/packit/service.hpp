#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "packit/config.hpp"
#include "packit/rules.hpp"

namespace packit {

struct HttpResponse {
  int status = 200;
  std::string body;  ///< JSON
};

enum class GameMode { Solitaire, TwoPlayer };

std::string_view mode_name(GameMode mode);

/// JSON API over game sessions. `handle` is the whole routing surface; the
/// socket layer (HttpServer) only forwards to it.
class Service {
 public:
  explicit Service(ServiceConfig config);
  ~Service();

  HttpResponse handle(std::string_view method, std::string_view path, std::string_view body);

  const ServiceConfig& config() const { return config_; }
  std::size_t session_count() const;
  /// Log files skipped at startup, with the reason.
  const std::vector<std::string>& load_errors() const { return load_errors_; }

 private:
  struct Session;
  using SessionPtr = std::shared_ptr<Session>;

  SessionPtr find(const std::string& id) const;
  SessionPtr create(GameState initial, GameMode mode);
  void load_sessions();
  std::string new_id();
  bool solver_available() const;

  HttpResponse create_game(std::string_view body);
  HttpResponse list_games() const;
  HttpResponse session_request(const std::string& id, std::string_view action, std::string_view method,
                               std::string_view body);
  HttpResponse verdict_request(std::string_view m, std::string_view n) const;
  HttpResponse solve_request(std::string_view body) const;

  ServiceConfig config_;
  mutable std::shared_mutex sessions_mu_;
  std::unordered_map<std::string, SessionPtr> sessions_;
  std::mutex id_mu_;
  std::uint64_t id_state_ = 0;
  std::vector<std::string> load_errors_;
};

/// cpp-httplib binding for a Service.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();

  /// Binds without serving; port 0 picks a free port. Returns the bound port
  /// or -1 on failure.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  bool serve();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace packit
