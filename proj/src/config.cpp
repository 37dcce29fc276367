#include "packit/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "packit/error.hpp"

namespace packit {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string unquote(const std::string& value, int line) {
  if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
    return value.substr(1, value.size() - 2);
  }
  if (!value.empty() && value.front() == '"') {
    throw Error(ErrorCode::Parse, "config line " + std::to_string(line) + ": unterminated string");
  }
  return value;
}

int parse_port(const std::string& text, const std::string& where) {
  std::size_t used = 0;
  int port = -1;
  try {
    port = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || port < 0 || port > 65535) {
    throw Error(ErrorCode::Parse, where + ": port must be an integer in [0, 65535]");
  }
  return port;
}

std::vector<std::string> split_words(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string word; in >> word;) out.push_back(word);
  return out;
}

}  // namespace

ServiceConfig parse_config(std::istream& in, ServiceConfig config) {
  int number = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++number;
    // A '#' inside a quoted value is kept.
    std::string line;
    bool quoted = false;
    for (char ch : raw) {
      if (ch == '"') quoted = !quoted;
      if (ch == '#' && !quoted) break;
      line += ch;
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "config line " + std::to_string(number);
    if (eq == std::string::npos) throw Error(ErrorCode::Parse, where + ": expected `key = value`");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = unquote(trim(line.substr(eq + 1)), number);
    if (key == "host") {
      config.host = value;
    } else if (key == "port") {
      config.port = parse_port(value, where);
    } else if (key == "solver_path") {
      config.solver_path = value;
    } else if (key == "solver_args") {
      config.solver_args = split_words(value);
    } else if (key == "default_budget") {
      char* end = nullptr;
      const double budget = std::strtod(value.c_str(), &end);
      if (value.empty() || *end != '\0' || !(budget > 0)) {
        throw Error(ErrorCode::Parse, where + ": default_budget must be a positive number of seconds");
      }
      config.default_budget = budget;
    } else if (key == "data_dir") {
      config.data_dir = value;
    } else {
      throw Error(ErrorCode::Parse, where + ": unknown key `" + key + "`");
    }
  }
  return config;
}

ServiceConfig load_config(const std::string& path, ServiceConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open config file " + path);
  return parse_config(in, std::move(base));
}

ServiceConfig apply_environment(ServiceConfig config) {
  if (const char* solver = std::getenv("PACKIT_SOLVER"); solver != nullptr && *solver != '\0') {
    config.solver_path = solver;
  }
  if (const char* args = std::getenv("PACKIT_SOLVER_ARGS"); args != nullptr) {
    config.solver_args = split_words(args);
  }
  if (const char* port = std::getenv("PACKIT_PORT"); port != nullptr && *port != '\0') {
    config.port = parse_port(port, "PACKIT_PORT");
  }
  return config;
}

}  // namespace packit
