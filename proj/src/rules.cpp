#include "packit/rules.hpp"

#include <sstream>

#include "packit/error.hpp"

namespace packit {

std::string_view code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidDims: return "invalid-dims";
    case ErrorCode::TurnMismatch: return "turn";
    case ErrorCode::Overlap: return "overlap";
    case ErrorCode::Bounds: return "bounds";
    case ErrorCode::Area: return "area";
    case ErrorCode::Range: return "range";
    case ErrorCode::InvalidInput: return "invalid-input";
    case ErrorCode::Decode: return "decode";
    case ErrorCode::Format: return "format";
    case ErrorCode::Size: return "size";
    case ErrorCode::Duplicate: return "duplicate";
    case ErrorCode::Partition: return "partition";
    case ErrorCode::Solver: return "solver";
    case ErrorCode::Parse: return "parse";
  }
  return "unknown";
}

namespace {

void check_dims(GridDims dims) {
  if (dims.rows < 1 || dims.cols < 1) {
    std::ostringstream os;
    os << "grid dimensions must be positive, got " << dims.rows << "x" << dims.cols;
    throw Error(ErrorCode::InvalidDims, os.str());
  }
  // Cell indices are stored in size_t but areas feed 64-bit arithmetic code.
  if (dims.area() > (std::int64_t{1} << 31)) {
    throw Error(ErrorCode::InvalidDims, "grid too large");
  }
}

std::string describe(const Placement& p) {
  std::ostringstream os;
  os << "(" << p.turn << " " << p.h << " " << p.v << " " << p.x << " " << p.y << ")";
  return os.str();
}

}  // namespace

GameState::GameState(GridDims dims) : dims_(dims) {
  check_dims(dims);
  cells_.assign(static_cast<std::size_t>(dims.area()), kEmptyCell);
}

GameState GameState::from_partial(GridDims dims, const std::vector<bool>& filled,
                                  int start_turn) {
  GameState state(dims);
  if (filled.size() != state.cells_.size()) {
    throw Error(ErrorCode::InvalidInput, "occupancy mask does not match grid size");
  }
  if (start_turn < 1) {
    throw Error(ErrorCode::InvalidInput, "start turn must be positive");
  }
  for (std::size_t i = 0; i < filled.size(); ++i) {
    if (filled[i]) {
      state.cells_[i] = kPrefilledCell;
      ++state.occupied_;
    }
  }
  state.start_turn_ = start_turn;
  return state;
}

bool GameState::fits_free(const Placement& p) const {
  if (p.h < 1 || p.v < 1 || p.x < 0 || p.y < 0) return false;
  if (p.x + std::int64_t{p.h} > dims_.cols || p.y + std::int64_t{p.v} > dims_.rows) {
    return false;
  }
  for (int r = p.y; r < p.y + p.v; ++r) {
    for (int c = p.x; c < p.x + p.h; ++c) {
      if (cells_[index(r, c)] != kEmptyCell) return false;
    }
  }
  return true;
}

std::vector<bool> GameState::occupancy() const {
  std::vector<bool> mask(cells_.size());
  for (std::size_t i = 0; i < cells_.size(); ++i) mask[i] = cells_[i] != kEmptyCell;
  return mask;
}

GameState new_game(GridDims dims) { return GameState(dims); }

std::vector<Placement> legal_placements(const GameState& state) {
  const int t = state.turn();
  const GridDims dims = state.dims();
  std::vector<Placement> out;
  // h ascending, then v ascending; only (h, v) with h*v in {t, t+1}.
  for (int h = 1; h <= dims.cols; ++h) {
    for (int v = 1; v <= dims.rows; ++v) {
      const std::int64_t a = std::int64_t{h} * v;
      if (a != t && a != std::int64_t{t} + 1) continue;
      for (int y = 0; y + v <= dims.rows; ++y) {
        for (int x = 0; x + h <= dims.cols; ++x) {
          Placement p{t, h, v, x, y};
          if (state.fits_free(p)) out.push_back(p);
        }
      }
    }
  }
  return out;
}

GameState apply_placement(const GameState& state, const Placement& p) {
  const int t = state.turn();
  if (p.turn != t) {
    std::ostringstream os;
    os << "placement " << describe(p) << " is for turn " << p.turn << " but the game is at turn " << t;
    throw Error(ErrorCode::TurnMismatch, os.str());
  }
  if (p.h < 1 || p.v < 1 || (p.area() != t && p.area() != std::int64_t{t} + 1)) {
    std::ostringstream os;
    os << "placement " << describe(p) << " has area " << p.area() << ", turn " << t
       << " requires " << t << " or " << t + 1;
    throw Error(ErrorCode::Area, os.str());
  }
  const GridDims dims = state.dims();
  if (p.x < 0 || p.y < 0 || p.x + std::int64_t{p.h} > dims.cols ||
      p.y + std::int64_t{p.v} > dims.rows) {
    std::ostringstream os;
    os << "placement " << describe(p) << " leaves the " << dims.rows << "x" << dims.cols << " grid";
    throw Error(ErrorCode::Bounds, os.str());
  }
  for (int r = p.y; r < p.y + p.v; ++r) {
    for (int c = p.x; c < p.x + p.h; ++c) {
      const int tag = state.tag(r, c);
      if (tag != kEmptyCell) {
        std::ostringstream os;
        os << "placement " << describe(p) << " overlaps cell (row " << r << ", col " << c << ")";
        if (tag > 0) {
          os << " filled on turn " << tag;
        } else {
          os << " which is prefilled";
        }
        throw Error(ErrorCode::Overlap, os.str());
      }
    }
  }
  GameState next = state;
  for (int r = p.y; r < p.y + p.v; ++r) {
    for (int c = p.x; c < p.x + p.h; ++c) next.cells_[next.index(r, c)] = t;
  }
  next.occupied_ += p.area();
  next.transcript_.push_back(p);
  return next;
}

VerifyReport verify_transcript(GridDims dims, std::span<const Placement> moves) {
  return verify_transcript(GameState(dims), moves);
}

VerifyReport verify_transcript(const GameState& start,
                               std::span<const Placement> moves) {
  VerifyReport report;
  GameState state = start;
  for (const Placement& p : moves) {
    try {
      state = apply_placement(state, p);
    } catch (const Error& e) {
      report.failed_turn = state.turn();
      report.failure = std::string(code_name(e.code())) + ": " + e.what();
      return report;
    }
  }
  report.valid = true;
  report.perfect = state.full();
  return report;
}

TwoPlayerStatus two_player_status(const GameState& state) {
  TwoPlayerStatus status;
  status.mover = state.turn() % 2 == 1 ? Player::One : Player::Two;
  status.finished = legal_placements(state).empty();
  if (status.finished) status.loser = status.mover;
  return status;
}

}  // namespace packit
