#pragma once

// Hand-checked transcripts shared by several suites.

#include <vector>

#include "packit/rules.hpp"

namespace packit::fixtures {

/// 5x5 perfect game.
inline std::vector<Placement> figure_perfect() {
  return {{1, 2, 1, 0, 0}, {2, 1, 3, 2, 0}, {3, 2, 2, 0, 1},
          {4, 1, 5, 3, 0}, {5, 1, 5, 4, 0}, {6, 3, 2, 0, 3}};
}

/// 5x5 game that gets stuck with one free cell.
inline std::vector<Placement> figure_imperfect() {
  return {{1, 1, 2, 0, 0}, {2, 1, 3, 1, 0}, {3, 1, 3, 2, 0},
          {4, 1, 5, 3, 0}, {5, 1, 5, 4, 0}, {6, 3, 2, 0, 3}};
}

/// 6x6 game up to turn 7 (area 8), leaving 7 cells that no later turn fits.
inline std::vector<Placement> small_gap_six() {
  return {{1, 1, 1, 0, 0}, {2, 2, 1, 1, 0}, {3, 3, 1, 3, 0}, {4, 2, 2, 0, 1},
          {5, 1, 5, 5, 1}, {6, 2, 3, 0, 3}, {7, 2, 4, 2, 1}};
}

}  // namespace packit::fixtures
