#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "packit/rules.hpp"

namespace packit {

/// Rectangle dimensions. `h` columns by `v` rows.
struct Extent {
  int h = 0;
  int v = 0;

  std::int64_t area() const { return std::int64_t{h} * v; }
  bool operator==(const Extent&) const = default;
};

/// Divisor pair of `area` fitting an m x n grid (short side <= min(m, n),
/// long side <= max(m, n)) whose long side is minimal, short side first.
std::optional<Extent> fits(std::int64_t area, int m, int n);

/// Every fitting divisor pair, short side first, ordered from most square
/// to most elongated.
std::vector<Extent> fitting_extents(std::int64_t area, int m, int n);

/// Rectangles for turns first_turn, first_turn + 1, ... in order.
struct RectangleSelection {
  GridDims dims;
  int first_turn = 1;
  std::vector<Extent> rects;

  std::int64_t total_area() const;
  /// Number of turns that took the t+1 option.
  int expansion_count() const;
  /// Area choices only.
  std::vector<std::int64_t> areas() const;
};

/// Subset-sum style table: `reachable(k, T)` says whether the first k turns
/// (counted from `first_turn`) can take fitting areas totalling T.
class DpTable {
 public:
  DpTable(GridDims dims, int first_turn, int turns, std::int64_t target);

  const GridDims& dims() const { return dims_; }
  int first_turn() const { return first_turn_; }
  int turns() const { return turns_; }
  std::int64_t target() const { return target_; }

  bool reachable(int k, std::int64_t total) const;
  /// True when the full turn range can reach the target exactly.
  bool feasible() const { return reachable(turns_, target_); }

  /// Whether turn `first_turn + k - 1` may take area `a`.
  bool area_fits(std::int64_t a) const;

 private:
  GridDims dims_;
  int first_turn_;
  int turns_;
  std::int64_t target_;
  std::int64_t width_;
  std::vector<char> cells_;
};

/// Table for a perfect game of the empty grid: K(m, n) turns, target m*n.
DpTable dp_table(int m, int n);

/// Backtracks one selection out of the table; area t is preferred over t+1
/// when walking down from the last turn. Dimensions use fits().
std::optional<RectangleSelection> extract_selection(const DpTable& table);

/// Up to `limit` distinct area vectors in the same backtracking order.
std::vector<RectangleSelection> enumerate_selections(const DpTable& table, std::size_t limit);
std::vector<RectangleSelection> enumerate_selections(int m, int n, std::size_t limit);

/// Number of turns needed to fill `free_cells` starting at `first_turn`,
/// or nullopt when no turn count is consistent with the area rule.
std::optional<int> turns_to_fill(std::int64_t free_cells, int first_turn);

/// Throws Error(InvalidInput) unless `sel` honours areas, fits and total.
void check_selection(const RectangleSelection& sel, std::int64_t expected_total);

// Selection text format: one `t h v` line per rectangle.
std::string format_selection(const RectangleSelection& sel);
RectangleSelection parse_selection(std::istream& in, GridDims dims);

}  // namespace packit
