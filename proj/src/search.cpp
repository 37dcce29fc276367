#include "packit/search.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "packit/arithmetic.hpp"
#include "packit/error.hpp"
#include "packit/selection.hpp"

namespace packit {

using Clock = std::chrono::steady_clock;

std::string_view packing_status_name(PackingStatus status) {
  switch (status) {
    case PackingStatus::Perfect: return "perfect";
    case PackingStatus::ArithmeticallyImpossible: return "arithmetically-impossible";
    case PackingStatus::Unsat: return "unsat";
    case PackingStatus::Timeout: return "timeout";
  }
  return "unknown";
}

std::string_view feasibility_name(FeasibilityAnswer answer) {
  switch (answer) {
    case FeasibilityAnswer::Yes: return "yes";
    case FeasibilityAnswer::No: return "no";
    case FeasibilityAnswer::Unknown: return "unknown";
  }
  return "unknown";
}

namespace {

constexpr const char* kNoPacking = "no packing found";
constexpr std::size_t kSelectionCap = 4096;

double since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---------------------------------------------------------------------------
// Brute force

/// The rectangle covering the first empty cell (row-major) must have that
/// cell as its top-left corner, so every branch places an unused turn there.
class CoverSearch {
 public:
  CoverSearch(const GameState& state, int turns, std::uint64_t node_cap,
              std::optional<Clock::time_point> deadline)
      : rows_(state.dims().rows),
        cols_(state.dims().cols),
        first_turn_(state.turn()),
        used_(static_cast<std::size_t>(turns), 0),
        unused_(turns),
        node_cap_(node_cap),
        deadline_(deadline) {
    const std::vector<bool> mask = state.occupancy();
    occ_.assign(mask.begin(), mask.end());
    std::int64_t base = 0;
    for (int k = 0; k < turns; ++k) base += first_turn_ + k;
    spare_ = state.free_count() - base;
    shapes_.resize(static_cast<std::size_t>(turns));
    for (int k = 0; k < turns; ++k) {
      const std::int64_t t = first_turn_ + k;
      for (std::int64_t a : {t, t + 1}) {
        std::vector<Extent> both;
        for (const Extent& e : fitting_extents(a, rows_, cols_)) {
          both.push_back(e);
          if (e.h != e.v) both.push_back(Extent{e.v, e.h});
        }
        shapes_[static_cast<std::size_t>(k)].push_back(std::move(both));
      }
    }
  }

  /// Turns whose every shape is unusable make the budget unreachable.
  bool budget_possible() const {
    if (spare_ < 0 || spare_ > unused_) return false;
    std::int64_t must_expand = 0, must_keep = 0;
    for (const auto& pair : shapes_) {
      if (pair[0].empty() && pair[1].empty()) return false;
      if (pair[0].empty()) ++must_expand;
      if (pair[1].empty()) ++must_keep;
    }
    return must_expand <= spare_ && must_keep <= unused_ - spare_;
  }

  /// true: found; false: exhausted or stopped (see stopped()).
  bool run() { return step(0); }

  bool stopped() const { return stopped_; }
  std::uint64_t nodes() const { return nodes_; }
  std::vector<Placement> moves() const {
    std::vector<Placement> out = stack_;
    std::sort(out.begin(), out.end(),
              [](const Placement& a, const Placement& b) { return a.turn < b.turn; });
    return out;
  }

 private:
  bool free_block(int x, int y, const Extent& e) const {
    if (x + e.h > cols_ || y + e.v > rows_) return false;
    for (int r = y; r < y + e.v; ++r) {
      const std::size_t row = static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_);
      for (int c = x; c < x + e.h; ++c) {
        if (occ_[row + static_cast<std::size_t>(c)]) return false;
      }
    }
    return true;
  }

  void mark(int x, int y, const Extent& e, char value) {
    for (int r = y; r < y + e.v; ++r) {
      const std::size_t row = static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_);
      for (int c = x; c < x + e.h; ++c) occ_[row + static_cast<std::size_t>(c)] = value;
    }
  }

  bool step(std::size_t from) {
    while (from < occ_.size() && occ_[from]) ++from;
    if (from == occ_.size()) return unused_ == 0;
    const int y = static_cast<int>(from / static_cast<std::size_t>(cols_));
    const int x = static_cast<int>(from % static_cast<std::size_t>(cols_));
    for (std::size_t k = 0; k < used_.size(); ++k) {
      if (used_[k]) continue;
      for (int expand = 0; expand < 2; ++expand) {
        if (expand == 0 && spare_ > unused_ - 1) continue;
        if (expand == 1 && spare_ < 1) continue;
        for (const Extent& e : shapes_[k][static_cast<std::size_t>(expand)]) {
          if (!free_block(x, y, e)) continue;
          if (++nodes_ > node_cap_ ||
              (deadline_ && (nodes_ & 0xfff) == 0 && Clock::now() >= *deadline_)) {
            stopped_ = true;
            return false;
          }
          used_[k] = 1;
          --unused_;
          spare_ -= expand;
          mark(x, y, e, 1);
          stack_.push_back(Placement{first_turn_ + static_cast<int>(k), e.h, e.v, x, y});
          if (step(from + 1)) return true;
          stack_.pop_back();
          mark(x, y, e, 0);
          spare_ += expand;
          ++unused_;
          used_[k] = 0;
          if (stopped_) return false;
        }
      }
    }
    return false;
  }

  int rows_;
  int cols_;
  int first_turn_;
  std::vector<char> occ_;
  std::vector<char> used_;
  int unused_;
  std::int64_t spare_ = 0;
  std::vector<std::vector<std::vector<Extent>>> shapes_;  // [turn][expand]
  std::uint64_t node_cap_;
  std::optional<Clock::time_point> deadline_;
  std::uint64_t nodes_ = 0;
  bool stopped_ = false;
  std::vector<Placement> stack_;
};

// ---------------------------------------------------------------------------
// SAT orchestration

struct SatSearch {
  GridDims dims;
  int first_turn = 1;
  int turns = 0;
  std::int64_t target = 0;
  const std::vector<bool>* blocked = nullptr;
  const GameState* start = nullptr;  // for re-verification of completions
  int retries = 8;
  Clock::time_point deadline;
};

/// Advances `idx` to the next factorization combination; false once all
/// combinations have been visited.
bool next_combination(std::vector<std::size_t>& idx, const std::vector<std::vector<Extent>>& opts) {
  for (std::size_t k = idx.size(); k-- > 0;) {
    if (++idx[k] < opts[k].size()) return true;
    idx[k] = 0;
  }
  return false;
}

PackingResult run_sat_search(const SatSearch& job, const SatSolver& solver) {
  const auto start = Clock::now();
  PackingResult result;
  const DpTable table(job.dims, job.first_turn, job.turns, job.target);
  if (!table.feasible()) {
    result.status = PackingStatus::ArithmeticallyImpossible;
    result.reason = "dp-none";
    result.exhaustive = true;
    result.seconds = since(start);
    return result;
  }
  // Without a retry limit the selection list is still capped; hitting the
  // cap makes an Unsat answer non-exhaustive.
  const std::size_t limit = job.retries < 0 ? kSelectionCap : static_cast<std::size_t>(job.retries) + 1;
  const std::vector<RectangleSelection> selections = enumerate_selections(table, limit);
  const bool all_selections = selections.size() < limit;

  bool out_of_attempts = false;
  for (const RectangleSelection& base : selections) {
    std::vector<std::vector<Extent>> opts;
    for (const Extent& e : base.rects) {
      opts.push_back(fitting_extents(e.area(), job.dims.rows, job.dims.cols));
    }
    std::vector<std::size_t> idx(opts.size(), 0);
    do {
      if (job.retries >= 0 && result.attempts > job.retries) {
        out_of_attempts = true;
        break;
      }
      const auto now = Clock::now();
      if (now >= job.deadline) {
        result.status = PackingStatus::Timeout;
        result.seconds = since(start);
        return result;
      }
      RectangleSelection sel = base;
      for (std::size_t k = 0; k < sel.rects.size(); ++k) sel.rects[k] = opts[k][idx[k]];
      ++result.attempts;
      Encoding enc = job.blocked != nullptr ? encode(job.dims, sel, *job.blocked) : encode(job.dims, sel);
      result.encoding = clause_stats(enc.formula, enc.map);
      const auto budget = std::chrono::duration_cast<std::chrono::milliseconds>(job.deadline - now);
      SatOutcome outcome = solver.solve(enc.formula, std::max(budget, std::chrono::milliseconds(1)));
      result.solver_stats = std::move(outcome.stats);
      if (outcome.status == SatStatus::Timeout) {
        result.status = PackingStatus::Timeout;
        result.seconds = since(start);
        return result;
      }
      if (outcome.status == SatStatus::Sat) {
        const DecodedPacking packing = decode_model(enc.map, outcome.model);
        std::vector<Placement> moves = to_placements(enc.map, packing);
        const VerifyReport report = job.start != nullptr ? verify_transcript(*job.start, moves)
                                                         : verify_transcript(job.dims, moves);
        if (!report.valid || !report.perfect) {
          throw Error(ErrorCode::Decode, "decoded packing failed verification: " + report.failure);
        }
        result.status = PackingStatus::Perfect;
        result.transcript = std::move(moves);
        result.seconds = since(start);
        return result;
      }
    } while (next_combination(idx, opts));
    if (out_of_attempts) break;
  }
  result.status = PackingStatus::Unsat;
  result.reason = kNoPacking;
  result.exhaustive = all_selections && !out_of_attempts;
  result.seconds = since(start);
  return result;
}

}  // namespace

PackingResult brute_force_complete(const GameState& state, std::uint64_t node_cap,
                                   std::optional<Clock::time_point> deadline) {
  const auto start = Clock::now();
  PackingResult result;
  if (state.full()) {
    result.status = PackingStatus::Perfect;
    result.exhaustive = true;
    return result;
  }
  const auto turns = turns_to_fill(state.free_count(), state.turn());
  if (!turns || !DpTable(state.dims(), state.turn(), *turns, state.free_count()).feasible()) {
    result.status = PackingStatus::ArithmeticallyImpossible;
    result.reason = "dp-none";
    result.exhaustive = true;
    result.seconds = since(start);
    return result;
  }
  CoverSearch dfs(state, *turns, node_cap, deadline);
  const bool found = dfs.budget_possible() && dfs.run();
  result.attempts = static_cast<int>(std::min<std::uint64_t>(dfs.nodes(), std::numeric_limits<int>::max()));
  result.seconds = since(start);
  if (found) {
    result.transcript = dfs.moves();
    const VerifyReport report = verify_transcript(state, result.transcript);
    if (!report.valid || !report.perfect) {
      throw Error(ErrorCode::Decode, "brute-force packing failed verification: " + report.failure);
    }
    result.status = PackingStatus::Perfect;
  } else if (dfs.stopped()) {
    result.status = PackingStatus::Timeout;
  } else {
    result.status = PackingStatus::Unsat;
    result.reason = kNoPacking;
    result.exhaustive = true;
  }
  return result;
}

PackingResult brute_force_perfect(GridDims dims, std::uint64_t node_cap) {
  return brute_force_complete(GameState(dims), node_cap);
}

PackingResult solve_perfect(GridDims dims, const SearchOptions& options) {
  const auto start = Clock::now();
  const GameState empty(dims);  // validates dims
  const Verdict v = verdict(dims.rows, dims.cols);
  if (v.kind != VerdictKind::Open) {
    PackingResult result;
    result.status = PackingStatus::ArithmeticallyImpossible;
    result.reason = std::string(verdict_name(v.kind)) + ": " + v.witness;
    result.exhaustive = true;
    result.seconds = since(start);
    return result;
  }
  SatSearch job;
  job.dims = dims;
  job.turns = static_cast<int>(v.profile.rectangles);
  job.target = dims.area();
  job.retries = options.selection_retries;
  job.deadline = start + options.time_budget;
  const SatSolver solver(options.solver);
  PackingResult result = run_sat_search(job, solver);
  result.seconds = since(start);
  return result;
}

Feasibility completion_query(const GameState& state, const CompletionOptions& options) {
  const auto start = Clock::now();
  const auto deadline = start + options.time_budget;
  Feasibility out;
  auto finish = [&](FeasibilityAnswer answer, std::vector<Placement> witness = {}) {
    out.answer = answer;
    out.witness = std::move(witness);
    out.seconds = since(start);
    return out;
  };
  if (state.full()) return finish(FeasibilityAnswer::Yes);
  const auto turns = turns_to_fill(state.free_count(), state.turn());
  if (!turns) return finish(FeasibilityAnswer::No);
  if (!DpTable(state.dims(), state.turn(), *turns, state.free_count()).feasible()) {
    return finish(FeasibilityAnswer::No);
  }

  const SatSolver solver(options.solver);
  const bool have_solver = solver.available();
  if (state.free_count() <= options.brute_force_cells || !have_solver) {
    const std::uint64_t cap = have_solver ? options.node_cap : std::numeric_limits<std::uint64_t>::max();
    const PackingResult bf = brute_force_complete(state, cap, deadline);
    if (bf.status == PackingStatus::Perfect) return finish(FeasibilityAnswer::Yes, bf.transcript);
    if (bf.exhaustive) return finish(FeasibilityAnswer::No);
    if (!have_solver || Clock::now() >= deadline) return finish(FeasibilityAnswer::Unknown);
  }

  SatSearch job;
  job.dims = state.dims();
  job.first_turn = state.turn();
  job.turns = *turns;
  job.target = state.free_count();
  const std::vector<bool> blocked = state.occupancy();
  job.blocked = &blocked;
  job.start = &state;
  job.retries = -1;
  job.deadline = deadline;
  try {
    const PackingResult sat = run_sat_search(job, solver);
    if (sat.status == PackingStatus::Perfect) return finish(FeasibilityAnswer::Yes, sat.transcript);
    if (sat.exhaustive) return finish(FeasibilityAnswer::No);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Solver) throw;
  }
  return finish(FeasibilityAnswer::Unknown);
}

// ---------------------------------------------------------------------------
// Two-row construction

std::vector<Placement> construct_two_row(int n) {
  if (n < 2 || n % 2 != 0 || n > 46340) {
    throw Error(ErrorCode::InvalidInput, "two-row construction needs an even n in [2, 46340], got " +
                                             std::to_string(n));
  }
  const std::int64_t area = std::int64_t{n} * n;
  const AreaSplit split = split_area(area);
  const int turns = static_cast<int>(split.rectangles);
  const std::int64_t gap = split.gap;
  const int half = n / 2;

  // row[t] in {1, 2}; expanded[t] says whether turn t took area t + 1.
  std::vector<int> row(static_cast<std::size_t>(turns) + 1, 2);
  std::vector<char> expanded(static_cast<std::size_t>(turns) + 1, 0);
  if (n == 2) {
    row[1] = 1;
    expanded[1] = 1;
  } else if (n == 4) {
    // Row one 2, 2, 4 and row two 3, 5.
    row[1] = row[2] = row[4] = 1;
    expanded[1] = 1;
  } else {
    for (int t = 1; t <= n - 1; ++t) row[static_cast<std::size_t>(t)] = 1;
    if (gap <= half) {
      for (int t = 1; t <= gap; ++t) expanded[static_cast<std::size_t>(t)] = 1;
      if (gap < half) {
        std::swap(row[static_cast<std::size_t>(half + gap)], row[static_cast<std::size_t>(n)]);
      }
    } else if (gap < n - 1) {
      const int i = static_cast<int>(gap) - half;
      row[static_cast<std::size_t>(i)] = 2;
      std::int64_t left = gap;
      for (int t = 1; t <= n - 1 && left > 0; ++t) {
        if (row[static_cast<std::size_t>(t)] != 1) continue;
        expanded[static_cast<std::size_t>(t)] = 1;
        --left;
      }
    } else {
      for (int t = 1; t <= n - 1; ++t) expanded[static_cast<std::size_t>(t)] = 1;
      std::int64_t left = gap - (n - 1);
      for (int t = n; t <= turns && left > 0; ++t, --left) expanded[static_cast<std::size_t>(t)] = 1;
      row[static_cast<std::size_t>(half - 2)] = 2;
    }
  }

  std::vector<Placement> moves;
  moves.reserve(static_cast<std::size_t>(turns));
  int cursor[3] = {0, 0, 0};
  for (int t = 1; t <= turns; ++t) {
    const auto k = static_cast<std::size_t>(t);
    const int length = t + expanded[k];
    moves.push_back(Placement{t, length, 1, cursor[row[k]], row[k] - 1});
    cursor[row[k]] += length;
  }
  return moves;
}

}  // namespace packit
