#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace packit {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string solver_path = "kissat";
  std::vector<std::string> solver_args;
  double default_budget = 10.0;  ///< seconds, for hint and solve requests
  std::string data_dir;          ///< session logs; empty disables persistence
};

/// `key = value` lines; `#` starts a comment; string values may be quoted.
/// Keys: host, port, solver_path, solver_args, default_budget, data_dir.
/// Throws Error(Parse) on unknown keys or malformed values.
ServiceConfig parse_config(std::istream& in, ServiceConfig base = {});
ServiceConfig load_config(const std::string& path, ServiceConfig base = {});

/// PACKIT_SOLVER, PACKIT_SOLVER_ARGS and PACKIT_PORT override file values.
ServiceConfig apply_environment(ServiceConfig config);

}  // namespace packit
