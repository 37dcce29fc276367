#include <doctest.h>
#include <httplib.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>
#include <thread>

#include "packit/config.hpp"
#include "packit/error.hpp"
#include "packit/service.hpp"
#include "support/fixtures.hpp"

using namespace packit;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

ServiceConfig test_config() {
  ServiceConfig c;
  if (const char* s = std::getenv("PACKIT_SOLVER")) c.solver_path = s;
  return c;
}

struct Call {
  int status;
  json body;
};

Call call(Service& svc, std::string_view method, std::string_view path, const json& body = nullptr) {
  const HttpResponse r = svc.handle(method, path, body.is_null() ? "" : body.dump());
  return {r.status, json::parse(r.body)};
}

json move_json(const Placement& p) { return json{{"t", p.turn}, {"h", p.h}, {"v", p.v}, {"x", p.x}, {"y", p.y}}; }

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("packit-test-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

}  // namespace

TEST_SUITE("service") {

TEST_CASE("health and verdicts") {
  Service svc(test_config());
  const Call health = call(svc, "GET", "/health");
  CHECK(health.status == 200);
  CHECK(health.body["status"] == "ok");
  CHECK(health.body["schema_version"] == 1);

  const Call eighteen = call(svc, "GET", "/verdict/18/18");
  CHECK(eighteen.status == 200);
  CHECK(eighteen.body["kind"] == "LargeGapImpossible");
  CHECK(eighteen.body["witness"] == "gap 24 > K 24 - |P| 2 - 1Kp 0");
  CHECK(eighteen.body["profile"]["rectangles"] == 24);
  CHECK(call(svc, "GET", "/verdict/7/7").body["kind"] == "Open");
  CHECK(call(svc, "GET", "/verdict/x/7").status == 400);
  CHECK(call(svc, "GET", "/verdict/0/7").status == 400);
  CHECK(call(svc, "POST", "/verdict/5/5").status == 405);
}

TEST_CASE("unknown routes and bad bodies") {
  Service svc(test_config());
  const Call missing = call(svc, "GET", "/nope");
  CHECK(missing.status == 404);
  CHECK(missing.body["code"] == "not-found");
  CHECK(call(svc, "GET", "/games/0123456789abcdef").status == 404);
  CHECK(call(svc, "POST", "/health").status == 405);

  const HttpResponse garbage = svc.handle("POST", "/games", "{not json");
  CHECK(garbage.status == 400);
  CHECK(json::parse(garbage.body)["code"] == "parse");
  CHECK(call(svc, "POST", "/games", json{{"n", 0}}).status == 400);
  CHECK(call(svc, "POST", "/games", json{{"n", 201}}).status == 400);
  CHECK(call(svc, "POST", "/games", json{{"n", "five"}}).status == 400);
  CHECK(call(svc, "POST", "/games", json{{"n", 5}, {"mode", "chess"}}).status == 400);
  CHECK(call(svc, "POST", "/games", json::array()).status == 400);
}

TEST_CASE("a full solitaire game") {
  Service svc(test_config());
  const Call created = call(svc, "POST", "/games", json{{"n", 5}});
  REQUIRE(created.status == 201);
  const std::string id = created.body["id"];
  CHECK(id.size() == 16);
  CHECK(created.body["mode"] == "solitaire");
  CHECK(created.body["state"]["turn"] == 1);
  CHECK(created.body["state"]["rows"] == 5);

  const Call legal = call(svc, "GET", "/games/" + id + "/legal");
  CHECK(legal.status == 200);
  CHECK(legal.body["placements"].size() == 65);

  Call last{};
  for (const Placement& p : fixtures::figure_perfect()) {
    last = call(svc, "POST", "/games/" + id + "/moves", move_json(p));
    REQUIRE(last.status == 200);
  }
  CHECK(last.body["state"]["full"] == true);
  CHECK(last.body["state"]["perfect"] == true);
  CHECK(last.body["state"]["transcript"].size() == 6);

  const Call listing = call(svc, "GET", "/games");
  REQUIRE(listing.body["games"].size() == 1);
  CHECK(listing.body["games"][0]["id"] == id);
  CHECK(listing.body["games"][0]["full"] == true);
}

TEST_CASE("illegal moves are conflicts") {
  Service svc(test_config());
  const std::string id = call(svc, "POST", "/games", json{{"n", 5}}).body["id"];
  const std::string moves = "/games/" + id + "/moves";
  REQUIRE(call(svc, "POST", moves, move_json({1, 2, 1, 0, 0})).status == 200);

  const Call overlap = call(svc, "POST", moves, move_json({2, 1, 2, 1, 0}));
  CHECK(overlap.status == 409);
  CHECK(overlap.body["code"] == "overlap");
  CHECK(overlap.body["detail"]["x"] == 1);
  CHECK(call(svc, "POST", moves, move_json({2, 1, 1, 3, 3})).body["code"] == "area");
  CHECK(call(svc, "POST", moves, move_json({3, 1, 3, 3, 3})).body["code"] == "turn");
  CHECK(call(svc, "POST", moves, move_json({2, 1, 2, 4, 4})).body["code"] == "bounds");
  CHECK(call(svc, "POST", moves, json{{"t", 2}}).status == 400);
  // The session is unchanged by rejected moves.
  CHECK(call(svc, "GET", "/games/" + id).body["state"]["turn"] == 2);
}

TEST_CASE("undo") {
  Service svc(test_config());
  const std::string id = call(svc, "POST", "/games", json{{"n", 4}}).body["id"];
  const Call empty = call(svc, "POST", "/games/" + id + "/undo");
  CHECK(empty.status == 409);
  CHECK(empty.body["code"] == "turn");
  REQUIRE(call(svc, "POST", "/games/" + id + "/moves", move_json({1, 1, 1, 0, 0})).status == 200);
  REQUIRE(call(svc, "POST", "/games/" + id + "/moves", move_json({2, 3, 1, 1, 0})).status == 200);
  const Call back = call(svc, "POST", "/games/" + id + "/undo");
  CHECK(back.status == 200);
  CHECK(back.body["state"]["turn"] == 2);
  CHECK(back.body["state"]["occupied"] == 1);
  CHECK(call(svc, "GET", "/games/" + id + "/undo").status == 405);
}

TEST_CASE("two-player sessions report the mover") {
  Service svc(test_config());
  const Call created = call(svc, "POST", "/games", json{{"n", 3}, {"mode", "two-player"}});
  REQUIRE(created.status == 201);
  CHECK(created.body["two_player"]["mover"] == 1);
  CHECK(created.body["two_player"]["finished"] == false);
  const std::string id = created.body["id"];
  const Call after = call(svc, "POST", "/games/" + id + "/moves", move_json({1, 1, 1, 0, 0}));
  CHECK(after.body["two_player"]["mover"] == 2);
}

TEST_CASE("hints") {
  Service svc(test_config());
  const std::string id = call(svc, "POST", "/games", json{{"n", 5}}).body["id"];
  const Call hint = call(svc, "POST", "/games/" + id + "/hint", json{{"budget_s", 30}, {"full", true}});
  REQUIRE(hint.status == 200);
  CHECK(hint.body["answer"] == "yes");
  CHECK(hint.body["suggestion"]["t"] == 1);
  CHECK(hint.body["witness"].size() == 6);
  // Following the suggestion keeps the game alive.
  CHECK(call(svc, "POST", "/games/" + id + "/moves", hint.body["suggestion"]).status == 200);

  const std::string six = call(svc, "POST", "/games", json{{"n", 6}}).body["id"];
  const Call no = call(svc, "POST", "/games/" + six + "/hint");
  CHECK(no.body["answer"] == "no");
  CHECK(no.body["suggestion"].is_null());
  CHECK(call(svc, "POST", "/games/" + six + "/hint", json{{"budget_s", 0}}).status == 400);
  CHECK(call(svc, "POST", "/games/" + six + "/hint", json{{"budget_s", 601}}).status == 400);

  ServiceConfig offline = test_config();
  offline.solver_path = "/nonexistent/solver";
  Service off(offline);
  const std::string big = call(off, "POST", "/games", json{{"n", 9}}).body["id"];
  const Call unavailable = call(off, "POST", "/games/" + big + "/hint");
  CHECK(unavailable.status == 503);
  CHECK(unavailable.body["code"] == "solver");
  const std::string small = call(off, "POST", "/games", json{{"n", 5}}).body["id"];
  CHECK(call(off, "POST", "/games/" + small + "/hint").body["answer"] == "yes");
}

TEST_CASE("partial-grid sessions") {
  Service svc(test_config());
  const Call created = call(svc, "POST", "/games", json{{"grid", "3 3 2\n###\n...\n...\n"}});
  REQUIRE(created.status == 201);
  CHECK(created.body["state"]["turn"] == 2);
  CHECK(created.body["state"]["free"] == 6);
  const std::string id = created.body["id"];
  CHECK(call(svc, "POST", "/games/" + id + "/hint").body["answer"] == "yes");
  CHECK(call(svc, "POST", "/games", json{{"grid", "3 3\n"}}).status == 400);
}

TEST_CASE("solve endpoint") {
  Service svc(test_config());
  const Call five = call(svc, "POST", "/solve", json{{"n", 5}, {"budget_s", 60}});
  REQUIRE(five.status == 200);
  CHECK(five.body["status"] == "perfect");
  CHECK(five.body["transcript"].size() == 6);
  const Call six = call(svc, "POST", "/solve", json{{"n", 6}});
  CHECK(six.body["status"] == "arithmetically-impossible");
  CHECK(call(svc, "POST", "/solve", json{{"n", 5}, {"retries", -1}}).status == 400);
  CHECK(call(svc, "GET", "/solve").status == 405);

  ServiceConfig offline = test_config();
  offline.solver_path = "/nonexistent/solver";
  Service off(offline);
  CHECK(call(off, "POST", "/solve", json{{"n", 5}}).status == 503);
  CHECK(call(off, "POST", "/solve", json{{"n", 6}}).status == 200);
}

TEST_CASE("sessions persist across restarts") {
  TempDir dir;
  ServiceConfig config = test_config();
  config.data_dir = dir.path.string();
  std::string id, two;
  {
    Service svc(config);
    id = call(svc, "POST", "/games", json{{"n", 5}}).body["id"];
    for (const Placement& p : fixtures::figure_perfect()) call(svc, "POST", "/games/" + id + "/moves", move_json(p));
    call(svc, "POST", "/games/" + id + "/undo");
    two = call(svc, "POST", "/games", json{{"grid", "2 3 1\n#..\n...\n"}, {"mode", "two-player"}}).body["id"];
    call(svc, "POST", "/games/" + two + "/moves", move_json({1, 1, 1, 1, 0}));
  }
  std::ofstream(dir.path / "broken.log") << "id broken\nmove 1 1\n";
  Service again(config);
  CHECK(again.session_count() == 2);
  CHECK(again.load_errors().size() == 1);
  const Call back = call(again, "GET", "/games/" + id);
  REQUIRE(back.status == 200);
  CHECK(back.body["state"]["turn"] == 6);
  CHECK(back.body["state"]["transcript"].size() == 5);
  const Call restored = call(again, "GET", "/games/" + two);
  REQUIRE(restored.status == 200);
  CHECK(restored.body["mode"] == "two-player");
  CHECK(restored.body["state"]["occupied"] == 2);
  CHECK(restored.body["state"]["start_turn"] == 1);
  // Undo still stops at the prefilled cells.
  call(again, "POST", "/games/" + two + "/undo");
  CHECK(call(again, "GET", "/games/" + two).body["state"]["occupied"] == 1);
}

TEST_CASE("http server round trip") {
  Service svc(test_config());
  HttpServer server(svc);
  const int port = server.bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  std::thread loop([&] { server.serve(); });
  httplib::Client client("127.0.0.1", port);
  client.set_connection_timeout(5);

  const auto health = client.Get("/health");
  REQUIRE(health);
  CHECK(health->status == 200);
  CHECK(health->get_header_value("Access-Control-Allow-Origin") == "*");

  const auto created = client.Post("/games", json{{"n", 5}}.dump(), "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  const std::string id = json::parse(created->body)["id"];
  const auto moved = client.Post("/games/" + id + "/moves", move_json({1, 2, 1, 0, 0}).dump(), "application/json");
  REQUIRE(moved);
  CHECK(moved->status == 200);
  const auto clash = client.Post("/games/" + id + "/moves", move_json({2, 1, 2, 0, 0}).dump(), "application/json");
  REQUIRE(clash);
  CHECK(clash->status == 409);
  const auto options = client.Options("/games");
  REQUIRE(options);
  CHECK(options->status == 204);

  server.stop();
  loop.join();
}

TEST_CASE("config files and environment overrides") {
  std::istringstream in(
      "# service settings\n"
      "host = 0.0.0.0\n"
      "port = 9091\n"
      "solver_path = \"/opt/kissat\"\n"
      "solver_args = --quiet --seed=1\n"
      "default_budget = 2.5\n"
      "data_dir = /tmp/packit\n");
  const ServiceConfig c = parse_config(in);
  CHECK(c.host == "0.0.0.0");
  CHECK(c.port == 9091);
  CHECK(c.solver_path == "/opt/kissat");
  CHECK(c.solver_args == std::vector<std::string>{"--quiet", "--seed=1"});
  CHECK(c.default_budget == doctest::Approx(2.5));
  CHECK(c.data_dir == "/tmp/packit");

  for (const char* bad : {"colour = red\n", "port = many\n", "port\n", "port = 70000\n"}) {
    CAPTURE(bad);
    std::istringstream b(bad);
    CHECK_THROWS_AS(parse_config(b), Error);
  }

  const char* saved = std::getenv("PACKIT_SOLVER");
  const std::string previous = saved != nullptr ? saved : "";
  ::setenv("PACKIT_PORT", "7777", 1);
  ::setenv("PACKIT_SOLVER", "/usr/bin/true", 1);
  const ServiceConfig env = apply_environment(c);
  CHECK(env.port == 7777);
  CHECK(env.solver_path == "/usr/bin/true");
  ::unsetenv("PACKIT_PORT");
  if (saved != nullptr) {
    ::setenv("PACKIT_SOLVER", previous.c_str(), 1);
  } else {
    ::unsetenv("PACKIT_SOLVER");
  }
}

}  // TEST_SUITE
