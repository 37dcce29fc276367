#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "packit/encoding.hpp"

namespace packit {

/// External DIMACS solver. `path` is a file path or a name looked up on PATH.
struct SolverConfig {
  std::string path = "kissat";
  std::vector<std::string> extra_args;
};

/// Defaults overridden by PACKIT_SOLVER and PACKIT_SOLVER_ARGS
/// (whitespace-separated).
SolverConfig solver_from_environment(SolverConfig base = {});

/// Absolute path of an executable, searching PATH for bare names.
std::optional<std::string> resolve_executable(const std::string& name);

enum class SatStatus { Sat, Unsat, Timeout };

struct SatOutcome {
  SatStatus status = SatStatus::Timeout;
  Model model;
  double seconds = 0.0;
  std::vector<std::string> stats;  ///< trailing `c` lines of solver output
};

/// Runs one solver process per call; instances hold no mutable state and may
/// be shared across threads.
class SatSolver {
 public:
  explicit SatSolver(SolverConfig config = solver_from_environment());

  const SolverConfig& config() const { return config_; }
  /// True when the configured executable can be found.
  bool available() const;

  /// Writes the formula to a temporary file, runs the solver and kills it
  /// once `budget` elapses. Throws Error(Solver) if the process cannot be
  /// started or reports neither SAT nor UNSAT.
  SatOutcome solve(const CnfFormula& formula, std::chrono::milliseconds budget) const;

 private:
  SolverConfig config_;
};

}  // namespace packit
