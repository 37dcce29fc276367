#include "packit/text_format.hpp"

#include <iomanip>
#include <istream>
#include <sstream>

#include "packit/error.hpp"

namespace packit {

namespace {

bool skippable(const std::string& line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string::npos || line[first] == '#';
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

std::vector<Placement> parse_transcript(std::istream& in) {
  std::vector<Placement> moves;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    std::istringstream fields(line);
    Placement p;
    std::string extra;
    if (!(fields >> p.turn >> p.h >> p.v >> p.x >> p.y) || (fields >> extra)) {
      throw Error(ErrorCode::Parse,
                  "transcript line " + std::to_string(line_no) + ": expected `t h v x y`, got `" +
                      strip_cr(line) + "`");
    }
    moves.push_back(p);
  }
  return moves;
}

std::vector<Placement> parse_transcript(const std::string& text) {
  std::istringstream in(text);
  return parse_transcript(in);
}

std::string format_transcript(const std::vector<Placement>& moves) {
  std::ostringstream os;
  for (const Placement& p : moves) {
    os << p.turn << ' ' << p.h << ' ' << p.v << ' ' << p.x << ' ' << p.y << '\n';
  }
  return os.str();
}

GameState parse_partial_grid(std::istream& in) {
  std::string line;
  int rows = 0, cols = 0, turn = 0;
  while (std::getline(in, line)) {
    if (skippable(line)) continue;
    std::istringstream header(line);
    if (!(header >> rows >> cols >> turn)) {
      throw Error(ErrorCode::Parse, "partial grid header must be `m n t`");
    }
    break;
  }
  if (rows < 1 || cols < 1 || turn < 1) {
    throw Error(ErrorCode::Parse, "partial grid header missing or non-positive");
  }
  GridDims dims{rows, cols};
  std::vector<bool> filled;
  filled.reserve(static_cast<std::size_t>(dims.area()));
  int row = 0;
  while (row < rows && std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    if (static_cast<int>(line.size()) != cols) {
      throw Error(ErrorCode::Parse, "partial grid row " + std::to_string(row) + " has " +
                                        std::to_string(line.size()) + " characters, expected " +
                                        std::to_string(cols));
    }
    for (char ch : line) {
      if (ch != '.' && ch != '#') {
        throw Error(ErrorCode::Parse, std::string("unexpected character `") + ch + "` in partial grid");
      }
      filled.push_back(ch == '#');
    }
    ++row;
  }
  if (row != rows) throw Error(ErrorCode::Parse, "partial grid is truncated");
  return GameState::from_partial(dims, filled, turn);
}

GameState parse_partial_grid(const std::string& text) {
  std::istringstream in(text);
  return parse_partial_grid(in);
}

std::string format_partial_grid(const GameState& state) {
  std::ostringstream os;
  const GridDims dims = state.dims();
  os << dims.rows << ' ' << dims.cols << ' ' << state.turn() << '\n';
  for (int r = 0; r < dims.rows; ++r) {
    for (int c = 0; c < dims.cols; ++c) os << (state.occupied(r, c) ? '#' : '.');
    os << '\n';
  }
  return os.str();
}

std::string render_board(const GameState& state) {
  const GridDims dims = state.dims();
  int width = 2;
  for (int t = state.turn(); t >= 10; t /= 10) ++width;
  std::ostringstream os;
  for (int r = 0; r < dims.rows; ++r) {
    for (int c = 0; c < dims.cols; ++c) {
      const int tag = state.tag(r, c);
      if (tag == kEmptyCell) {
        os << std::setw(width) << '.';
      } else if (tag == kPrefilledCell) {
        os << std::setw(width) << '#';
      } else {
        os << std::setw(width) << tag;
      }
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace packit
