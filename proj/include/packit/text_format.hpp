#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "packit/rules.hpp"

namespace packit {

// Transcript: one `t h v x y` line per move; blank lines and `#` comments are
// skipped.
std::vector<Placement> parse_transcript(std::istream& in);
std::vector<Placement> parse_transcript(const std::string& text);
std::string format_transcript(const std::vector<Placement>& moves);

// Partial grid: header `m n t`, then m rows of n characters, `.` empty and
// `#` filled. Placed cells of a state are written as `#` too.
GameState parse_partial_grid(std::istream& in);
GameState parse_partial_grid(const std::string& text);
std::string format_partial_grid(const GameState& state);

/// Human-readable board with turn labels, used by the CLI and diagnostics.
std::string render_board(const GameState& state);

}  // namespace packit
