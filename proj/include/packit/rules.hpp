#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace packit {

/// Grid of `rows` × `cols` cells. Orientation is not normalized here.
struct GridDims {
  int rows = 0;
  int cols = 0;

  std::int64_t area() const { return std::int64_t{rows} * cols; }
  bool operator==(const GridDims&) const = default;
};

/// One move: rectangle of `h` columns by `v` rows with top-left cell at
/// column `x`, row `y`, placed on turn `turn`.
struct Placement {
  int turn = 0;
  int h = 0;
  int v = 0;
  int x = 0;
  int y = 0;

  std::int64_t area() const { return std::int64_t{h} * v; }
  bool operator==(const Placement&) const = default;
};

/// Cell tag values. Positive tags are the turn that filled the cell.
inline constexpr int kEmptyCell = 0;
inline constexpr int kPrefilledCell = -1;

/// Immutable game position. Cells carry the turn that filled them so that
/// diagnostics and the UI can tell rectangles apart.
class GameState {
 public:
  /// Empty board at turn 1. Throws Error(InvalidDims) on non-positive dims.
  explicit GameState(GridDims dims);

  /// Partially filled board (row-major `filled` mask) whose first move is on
  /// `start_turn`. Used for SolitairePackIt! positions and reduced instances.
  static GameState from_partial(GridDims dims, const std::vector<bool>& filled,
                                int start_turn);

  const GridDims& dims() const { return dims_; }
  int turn() const { return start_turn_ + static_cast<int>(transcript_.size()); }
  int start_turn() const { return start_turn_; }
  const std::vector<Placement>& transcript() const { return transcript_; }

  int tag(int row, int col) const { return cells_[index(row, col)]; }
  bool occupied(int row, int col) const { return tag(row, col) != kEmptyCell; }
  const std::vector<int>& cells() const { return cells_; }

  std::int64_t occupied_count() const { return occupied_; }
  std::int64_t free_count() const { return dims_.area() - occupied_; }
  bool full() const { return free_count() == 0; }

  /// True when `p` lies inside the grid and touches no occupied cell.
  bool fits_free(const Placement& p) const;

  /// Row-major occupancy mask (prefilled and placed cells alike).
  std::vector<bool> occupancy() const;

  bool operator==(const GameState&) const = default;

 private:
  friend GameState apply_placement(const GameState&, const Placement&);

  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(dims_.cols) +
           static_cast<std::size_t>(col);
  }

  GridDims dims_;
  std::vector<int> cells_;
  std::int64_t occupied_ = 0;
  int start_turn_ = 1;
  std::vector<Placement> transcript_;
};

GameState new_game(GridDims dims);

/// Every legal move for `state.turn()`, sorted by (h, v, y, x).
std::vector<Placement> legal_placements(const GameState& state);

/// Returns the successor state. Errors: TurnMismatch, Area, Bounds, Overlap.
GameState apply_placement(const GameState& state, const Placement& p);

struct VerifyReport {
  bool valid = false;
  bool perfect = false;
  std::optional<int> failed_turn;
  std::string failure;
};

/// Replays `moves` onto an empty board starting at turn 1.
VerifyReport verify_transcript(GridDims dims, std::span<const Placement> moves);

/// Replays `moves` onto an arbitrary starting position.
VerifyReport verify_transcript(const GameState& start,
                               std::span<const Placement> moves);

enum class Player { One = 1, Two = 2 };

struct TwoPlayerStatus {
  Player mover = Player::One;
  bool finished = false;
  std::optional<Player> loser;
};

TwoPlayerStatus two_player_status(const GameState& state);

}  // namespace packit
