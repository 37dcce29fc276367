#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "packit/encoding.hpp"
#include "packit/rules.hpp"
#include "packit/sat_solver.hpp"

namespace packit {

enum class PackingStatus { Perfect, ArithmeticallyImpossible, Unsat, Timeout };

std::string_view packing_status_name(PackingStatus status);

struct PackingResult {
  PackingStatus status = PackingStatus::Timeout;
  std::vector<Placement> transcript;  ///< filled only for Perfect
  /// Verdict witness or "dp-none" when impossible, "no packing found" for
  /// Unsat. Unsat never means the grid is impossible.
  std::string reason;
  double seconds = 0.0;
  int attempts = 0;  ///< selections/factorizations tried, or DFS nodes
  /// Unsat after every area vector and factorization was refuted, so the
  /// grid really has no perfect game.
  bool exhaustive = false;
  std::optional<ClauseStats> encoding;  ///< last formula handed to the solver
  std::vector<std::string> solver_stats;
};

struct SearchOptions {
  std::chrono::milliseconds time_budget{std::chrono::minutes(10)};
  /// Further attempts after the first; negative means no limit.
  int selection_retries = 8;
  SolverConfig solver = solver_from_environment();
};

/// Select, encode, solve, decode and re-verify. Throws Error(Solver) when
/// the solver process fails.
PackingResult solve_perfect(GridDims dims, const SearchOptions& options = {});

/// Exact-cover DFS from the first empty cell over unused turns, without SAT.
/// Timeout once `node_cap` placements have been tried.
PackingResult brute_force_perfect(GridDims dims, std::uint64_t node_cap);

/// Same search from an arbitrary (possibly prefilled) position; the
/// transcript holds only the new moves.
PackingResult brute_force_complete(const GameState& state, std::uint64_t node_cap,
                                   std::optional<std::chrono::steady_clock::time_point> deadline = {});

enum class FeasibilityAnswer { Yes, No, Unknown };

std::string_view feasibility_name(FeasibilityAnswer answer);

struct Feasibility {
  FeasibilityAnswer answer = FeasibilityAnswer::Unknown;
  std::vector<Placement> witness;  ///< moves from state.turn() to a full board
  double seconds = 0.0;
};

struct CompletionOptions {
  std::chrono::milliseconds time_budget{std::chrono::seconds(10)};
  /// Positions with at most this many free cells go to brute force first.
  std::int64_t brute_force_cells = 40;
  std::uint64_t node_cap = 2'000'000;
  SolverConfig solver = solver_from_environment();
};

/// Whether the position can still end in a full board. No is only returned
/// when every remaining option was refuted.
Feasibility completion_query(const GameState& state, const CompletionOptions& options = {});

/// Perfect game on the 2 x n^2/2 grid by the row construction. Throws
/// Error(InvalidInput) unless n is even and 2 <= n <= 46340.
std::vector<Placement> construct_two_row(int n);

}  // namespace packit
