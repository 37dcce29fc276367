#pragma once

#include "packit/sat_solver.hpp"

namespace packit::testing {

/// Solver configured from PACKIT_SOLVER; CTest points it at the kissat found
/// at configure time.
inline const SatSolver& solver() {
  static const SatSolver instance;
  return instance;
}

}  // namespace packit::testing
