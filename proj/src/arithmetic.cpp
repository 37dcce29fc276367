#include "packit/arithmetic.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "packit/error.hpp"

namespace packit {

namespace {

using u128 = unsigned __int128;

std::int64_t checked_mul(std::int64_t a, std::int64_t b, const char* what) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw Error(ErrorCode::Range, std::string(what) + " overflows 64-bit arithmetic");
  }
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b, const char* what) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw Error(ErrorCode::Range, std::string(what) + " overflows 64-bit arithmetic");
  }
  return out;
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

}  // namespace

std::int64_t triangle(std::int64_t k) {
  if (k < 0) throw Error(ErrorCode::Range, "triangle number of a negative index");
  // One of k, k+1 is even; divide first so the product is exact.
  const std::int64_t k1 = checked_add(k, 1, "triangle number");
  return k % 2 == 0 ? checked_mul(k / 2, k1, "triangle number")
                    : checked_mul(k, k1 / 2, "triangle number");
}

std::int64_t tau(std::int64_t r) {
  if (r < 0) throw Error(ErrorCode::Range, "tau of a negative value");
  const long double root = std::sqrt(8.0L * static_cast<long double>(r) + 1.0L);
  auto k = static_cast<std::int64_t>(std::floor(root / 2.0L - 0.5L));
  if (k < 0) k = 0;
  // The float estimate can be off by one near perfect squares.
  while (k > 0 && triangle(k) > r) --k;
  while (static_cast<u128>(k + 1) * static_cast<u128>(k + 2) / 2 <= static_cast<u128>(r)) ++k;
  return k;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  static constexpr std::uint64_t kWitnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t p : kWitnesses) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : kWitnesses) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

AreaSplit split_area(std::int64_t area) {
  AreaSplit split;
  split.rectangles = tau(area);
  split.gap = area - triangle(split.rectangles);
  return split;
}

ArithmeticProfile profile(std::int64_t m, std::int64_t n) {
  if (m < 1 || n < 1) throw Error(ErrorCode::InvalidDims, "grid dimensions must be positive");
  if (m > n) std::swap(m, n);
  if (n > std::numeric_limits<int>::max()) {
    throw Error(ErrorCode::Range, "grid side exceeds the supported range");
  }
  const std::int64_t area = checked_mul(m, n, "grid area");
  ArithmeticProfile out;
  out.dims = GridDims{static_cast<int>(m), static_cast<int>(n)};
  const AreaSplit split = split_area(area);
  out.rectangles = split.rectangles;
  out.gap = split.gap;
  for (std::int64_t p = n + 1; p <= out.rectangles; ++p) {
    if (is_prime(static_cast<std::uint64_t>(p))) out.primes.push_back(p);
  }
  out.next_is_prime = is_prime(static_cast<std::uint64_t>(out.rectangles) + 1);
  out.next_prime_blocked = out.next_is_prime && out.rectangles + 1 > out.dims.cols;
  return out;
}

std::string_view verdict_name(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::SmallGapImpossible: return "SmallGapImpossible";
    case VerdictKind::LargeGapImpossible: return "LargeGapImpossible";
    case VerdictKind::Open: return "Open";
  }
  return "Open";
}

Verdict verdict(std::int64_t m, std::int64_t n) {
  Verdict v;
  v.profile = profile(m, n);
  const ArithmeticProfile& pr = v.profile;
  const auto p_count = static_cast<std::int64_t>(pr.primes.size());
  const std::int64_t indicator = pr.next_prime_blocked ? 1 : 0;
  const std::int64_t upper = pr.rectangles - p_count - indicator;
  std::ostringstream os;
  if (pr.gap < p_count) {
    v.kind = VerdictKind::SmallGapImpossible;
    os << "gap " << pr.gap << " < |P| " << p_count;
  } else if (pr.gap > upper) {
    v.kind = VerdictKind::LargeGapImpossible;
    os << "gap " << pr.gap << " > K " << pr.rectangles << " - |P| " << p_count << " - 1Kp "
       << indicator;
  } else {
    v.kind = VerdictKind::Open;
    os << "|P| " << p_count << " <= gap " << pr.gap << " <= K " << pr.rectangles << " - |P| "
       << p_count << " - 1Kp " << indicator;
  }
  v.witness = os.str();
  return v;
}

std::vector<PellSolution> pell_gap_one_family(int count) {
  if (count < 1) throw Error(ErrorCode::InvalidInput, "count must be positive");
  constexpr std::int64_t kSeedN = 11;
  constexpr std::int64_t kSeedT = 31;
  std::vector<PellSolution> out;
  // (th, nh) runs over the powers of the fundamental solution (3, 1) of
  // th^2 - 8 nh^2 = 1, starting from the identity (1, 0).
  std::int64_t th = 1, nh = 0;
  for (int i = 0; i < count; ++i) {
    const std::int64_t n = checked_add(checked_mul(kSeedT, nh, "Pell solution"),
                                       checked_mul(kSeedN, th, "Pell solution"), "Pell solution");
    const std::int64_t t = checked_add(checked_mul(kSeedT, th, "Pell solution"),
                                       checked_mul(8 * kSeedN, nh, "Pell solution"),
                                       "Pell solution");
    const std::int64_t area = checked_mul(n, n, "Pell grid area");
    const u128 lhs = static_cast<u128>(t) * static_cast<u128>(t) + 7;
    const u128 rhs = static_cast<u128>(8) * static_cast<u128>(n) * static_cast<u128>(n);
    const AreaSplit split = split_area(area);
    if (lhs != rhs || t % 2 == 0 || split.gap != 1 || split.rectangles != (t - 1) / 2) {
      throw Error(ErrorCode::Range, "Pell family self-check failed at n = " + std::to_string(n));
    }
    out.push_back(PellSolution{n, t, i});
    if (i + 1 == count) break;
    const std::int64_t next_th =
        checked_add(checked_mul(3, th, "Pell solution"), checked_mul(8, nh, "Pell solution"),
                    "Pell solution");
    const std::int64_t next_nh = checked_add(th, checked_mul(3, nh, "Pell solution"), "Pell solution");
    th = next_th;
    nh = next_nh;
  }
  return out;
}

}  // namespace packit
