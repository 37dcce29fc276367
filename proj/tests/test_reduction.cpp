#include <doctest.h>

#include <numeric>
#include <random>
#include <set>

#include "packit/error.hpp"
#include "packit/reduction.hpp"

using namespace packit;

namespace {

ErrorCode code_of(std::vector<std::int64_t> values) {
  try {
    validate_partition_instance(std::move(values));
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("instance was accepted");
  return ErrorCode::InvalidInput;
}

/// Assigns every element to one of k bins of capacity T, in input order.
bool bins_fill(const std::vector<std::int64_t>& a, std::size_t i, std::vector<std::int64_t>& load,
               std::vector<int>& count, std::int64_t target) {
  if (i == a.size()) return true;
  for (std::size_t b = 0; b < load.size(); ++b) {
    if (count[b] == 3 || load[b] + a[i] > target) continue;
    load[b] += a[i];
    ++count[b];
    const bool ok = bins_fill(a, i + 1, load, count, target);
    load[b] -= a[i];
    --count[b];
    if (ok) return true;
  }
  return false;
}

bool partition_exists(const PartitionInstance& inst) {
  std::vector<std::int64_t> load(static_cast<std::size_t>(inst.triples()), 0);
  std::vector<int> count(load.size(), 0);
  return bins_fill(inst.values, 0, load, count, inst.target);
}

bool perfect_on(const ReducedInstance& r, const std::vector<Placement>& moves) {
  const VerifyReport report = verify_transcript(r.state(), moves);
  return report.valid && report.perfect;
}

std::size_t index(const ReducedInstance& r, int row, int col) {
  return static_cast<std::size_t>(row) * static_cast<std::size_t>(r.dims.cols) + static_cast<std::size_t>(col);
}

}  // namespace

TEST_SUITE("reduction") {

TEST_CASE("instance validation") {
  const PartitionInstance ok = validate_partition_instance({24, 16, 20});
  CHECK(ok.target == 60);
  CHECK(ok.values == std::vector<std::int64_t>{16, 20, 24});
  CHECK(ok.triples() == 1);

  CHECK(code_of({4, 4, 4}) == ErrorCode::Duplicate);
  CHECK(code_of({8, 12, 16}) == ErrorCode::Range);
  CHECK(code_of({16, 20, 24, 28, 32, 36}) == ErrorCode::Range);
  CHECK(code_of({24, 28, 32, 36, 40, 44}) == ErrorCode::Range);
  CHECK(code_of({16, 20}) == ErrorCode::Size);
  CHECK(code_of({}) == ErrorCode::Size);
  CHECK(code_of({16, 21, 24}) == ErrorCode::Format);
  CHECK(code_of({0, 20, 24}) == ErrorCode::Format);
  CHECK(code_of({-4, 20, 24}) == ErrorCode::Format);
  // T = 128 and the bounds are strict, so 32 is out.
  CHECK(code_of({32, 36, 40, 44, 48, 56}) == ErrorCode::Range);
  CHECK(validate_partition_instance({32, 36, 40, 44, 48, 52}).target == 126);
  // Sum 472 over three triples; the T check comes before the range check.
  CHECK(code_of({36, 40, 44, 48, 52, 56, 60, 64, 72}) == ErrorCode::Format);
}

TEST_CASE("brute-force 3-partition") {
  const auto one = brute_force_three_partition(validate_partition_instance({16, 20, 24}));
  REQUIRE(one.has_value());
  CHECK(*one == std::vector<Triple>{{16, 20, 24}});

  const PartitionInstance two = validate_partition_instance({36, 40, 44, 48, 52, 60});
  const auto found = brute_force_three_partition(two);
  REQUIRE(found.has_value());
  std::multiset<std::int64_t> used;
  for (const Triple& t : *found) {
    CHECK(t[0] + t[1] + t[2] == two.target);
    used.insert(t.begin(), t.end());
  }
  CHECK(used == std::multiset<std::int64_t>(two.values.begin(), two.values.end()));

  // All three-element sums are multiples of 4 but T = 126 is not.
  CHECK_FALSE(brute_force_three_partition(validate_partition_instance({32, 36, 40, 44, 48, 52})).has_value());
}

TEST_CASE("3-partition search agrees with bin filling on random instances") {
  std::mt19937 rng(5);
  int valid = 0;
  for (int round = 0; round < 4000 && valid < 200; ++round) {
    const int k = 2 + static_cast<int>(rng() % 2);
    std::set<std::int64_t> pick;
    while (static_cast<int>(pick.size()) < 3 * k) pick.insert(4 * (5 + static_cast<std::int64_t>(rng() % 20)));
    PartitionInstance inst;
    try {
      inst = validate_partition_instance(std::vector<std::int64_t>(pick.begin(), pick.end()));
    } catch (const Error&) {
      continue;
    }
    ++valid;
    CHECK(brute_force_three_partition(inst).has_value() == partition_exists(inst));
  }
  CHECK(valid > 20);
}

TEST_CASE("grid layout for {16, 20, 24}") {
  const ReducedInstance r = build_grid(validate_partition_instance({16, 20, 24}));
  CHECK(r.dims == GridDims{63, 63});
  CHECK(r.start_turn == 1);
  std::string names;
  for (const Gadget& g : r.gadgets) {
    names += std::string(gadget_name(g.kind));
    if (g.kind != GadgetKind::E) names += std::to_string(g.alpha);
    names += ' ';
  }
  CHECK(names == "E S1 D3 D5 D7 D9 D11 D13 D15 S18 D19 S22 D23 ");
  CHECK(r.gadget_columns == 39);
  CHECK(r.empty_cells() == 60 + 1 + 2 * (3 + 5 + 7 + 9 + 11 + 13 + 15 + 19 + 23) + 18 + 22);
  for (int row = 60; row < 63; ++row) {
    for (int col = 0; col < 63; ++col) CHECK(r.filled[index(r, row, col)]);
  }
  for (int row = 0; row < 63; ++row) {
    for (int col = 39; col < 63; ++col) CHECK(r.filled[index(r, row, col)]);
  }
  // Only middle columns have holes.
  for (int row = 0; row < 63; ++row) {
    for (int col = 0; col < 39; ++col) {
      if (col % 3 != 1) CHECK(r.filled[index(r, row, col)]);
    }
  }
  // D(3): rows 0..2 empty, row 3 filled, rows 4..6 empty.
  const int d3 = r.gadgets[2].column + 1;
  CHECK_FALSE(r.filled[index(r, 2, d3)]);
  CHECK(r.filled[index(r, 3, d3)]);
  CHECK_FALSE(r.filled[index(r, 6, d3)]);
  CHECK(r.filled[index(r, 7, d3)]);
}

TEST_CASE("forward packing fills the grid") {
  const PartitionInstance inst = validate_partition_instance({16, 20, 24});
  const ReducedInstance r = build_grid(inst);
  const auto moves = forward_pack(r, {{16, 20, 24}});
  CHECK(moves.size() == 24);
  CHECK(perfect_on(r, moves));
  CHECK(moves[0] == Placement{1, 1, 1, r.gadgets[1].column + 1, 0});
  // Turns 2 and 3 share the two holes of D(3).
  CHECK(moves[1].x == r.gadgets[2].column + 1);
  CHECK(moves[2].x == r.gadgets[2].column + 1);
  CHECK(moves[1].area() == 3);
  CHECK(moves[2].area() == 3);
  std::int64_t placed = 0;
  for (const Placement& p : moves) placed += p.area();
  CHECK(placed == r.empty_cells());
}

TEST_CASE("round trip on every small valid instance with a partition") {
  std::mt19937 rng(9);
  int checked = 0;
  for (int round = 0; round < 6000 && checked < 25; ++round) {
    const int k = 1 + static_cast<int>(rng() % 3);
    std::set<std::int64_t> pick;
    while (static_cast<int>(pick.size()) < 3 * k) pick.insert(4 * (4 + static_cast<std::int64_t>(rng() % 14)));
    PartitionInstance inst;
    try {
      inst = validate_partition_instance(std::vector<std::int64_t>(pick.begin(), pick.end()));
    } catch (const Error&) {
      continue;
    }
    const auto partition = brute_force_three_partition(inst);
    if (!partition) continue;
    ++checked;
    const ReducedInstance r = build_grid(inst);
    CAPTURE(inst.target);
    CHECK(r.gadget_columns < r.dims.cols);
    int odd = 0;
    for (std::int64_t m = 3; m < inst.values.back(); m += 2) ++odd;
    CHECK(r.gadget_columns == inst.size() + 3 * odd + 3);
    const auto moves = forward_pack(r, *partition);
    CHECK(perfect_on(r, moves));
  }
  CHECK(checked >= 10);
}

TEST_CASE("forward_pack rejects bad partitions") {
  const ReducedInstance r = build_grid(validate_partition_instance({36, 40, 44, 48, 52, 60}));
  for (const std::vector<Triple>& bad :
       {std::vector<Triple>{{36, 40, 44}, {48, 52, 60}}, std::vector<Triple>{{36, 44, 60}},
        std::vector<Triple>{{36, 44, 60}, {36, 44, 60}}, std::vector<Triple>{{36, 44, 60}, {40, 48, 56}}}) {
    try {
      forward_pack(r, bad);
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Partition);
    }
  }
  CHECK(perfect_on(r, forward_pack(r, {{36, 44, 60}, {40, 48, 52}})));
}

TEST_CASE("tampering with any gadget hole breaks the packing") {
  const ReducedInstance r = build_grid(validate_partition_instance({16, 20, 24}));
  const auto moves = forward_pack(r, {{16, 20, 24}});
  REQUIRE(perfect_on(r, moves));
  for (const Gadget& g : r.gadgets) {
    CAPTURE(gadget_name(g.kind));
    CAPTURE(g.alpha);
    const int mid = g.column + 1;
    const int bottom = g.kind == GadgetKind::E ? static_cast<int>(r.instance.target)
                       : g.kind == GadgetKind::S ? static_cast<int>(g.alpha)
                                                 : static_cast<int>(2 * g.alpha + 1);
    // One more empty cell below the hole.
    ReducedInstance grown = r;
    grown.filled[index(r, bottom, mid)] = false;
    CHECK_FALSE(perfect_on(grown, moves));
    // One hole cell filled in.
    ReducedInstance shrunk = r;
    shrunk.filled[index(r, 0, mid)] = true;
    CHECK_FALSE(perfect_on(shrunk, moves));
    // A neighbouring wall cell opened instead.
    ReducedInstance wall = r;
    wall.filled[index(r, 0, g.column)] = false;
    CHECK_FALSE(perfect_on(wall, moves));
  }
}

}  // TEST_SUITE
