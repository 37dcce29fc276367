#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "packit/rules.hpp"

namespace packit {

/// k(k+1)/2. Throws Error(Range) if the result does not fit in int64.
std::int64_t triangle(std::int64_t k);

/// Largest k with triangle(k) <= r.
std::int64_t tau(std::int64_t r);

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(std::uint64_t n);

/// Rectangle count K and expansion count (gap) for an area, without the
/// prime census. Cheap enough for Pell-scale grids.
struct AreaSplit {
  std::int64_t rectangles = 0;
  std::int64_t gap = 0;
};
AreaSplit split_area(std::int64_t area);

struct ArithmeticProfile {
  GridDims dims;  ///< normalized: rows <= cols
  std::int64_t rectangles = 0;  ///< K(m, n)
  std::int64_t gap = 0;         ///< m*n - T_K
  std::vector<std::int64_t> primes;  ///< primes p with n < p <= K
  bool next_is_prime = false;        ///< K + 1 prime
  /// K + 1 prime and longer than the long side, so turn K cannot expand.
  /// Only this case counts in the large-gap bound: a 1 x (K+1) strip that
  /// fits (1 x 2, 2 x 7, ...) leaves the expansion available.
  bool next_prime_blocked = false;
};

ArithmeticProfile profile(std::int64_t m, std::int64_t n);

enum class VerdictKind { SmallGapImpossible, LargeGapImpossible, Open };

std::string_view verdict_name(VerdictKind kind);

struct Verdict {
  VerdictKind kind = VerdictKind::Open;
  std::string witness;  ///< the deciding inequality with numbers filled in
  ArithmeticProfile profile;
};

/// Classification from the small-gap and large-gap impossibility theorems.
/// `Open` never claims that a perfect game exists.
Verdict verdict(std::int64_t m, std::int64_t n);

struct PellSolution {
  std::int64_t n = 0;
  std::int64_t t = 0;
  int generation = 0;
};

/// Grid sizes with gap(n, n) = 1 taken from the solution family of
/// t^2 - 8 n^2 = -7 seeded at (n, t) = (11, 31).
std::vector<PellSolution> pell_gap_one_family(int count);

}  // namespace packit
