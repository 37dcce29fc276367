#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "packit/arithmetic.hpp"
#include "packit/error.hpp"
#include "packit/selection.hpp"
#include "support/oracles.hpp"

using namespace packit;

TEST_SUITE("selection") {

TEST_CASE("fits") {
  CHECK_FALSE(fits(7, 6, 6).has_value());
  REQUIRE(fits(6, 6, 6).has_value());
  CHECK(*fits(6, 6, 6) == Extent{2, 3});
  CHECK_FALSE(fits(19, 18, 18).has_value());
  CHECK(*fits(12, 6, 6) == Extent{3, 4});
  // Rectangular grids need the short side to fit the short dimension.
  CHECK_FALSE(fits(9, 2, 8).has_value());
  CHECK(*fits(8, 2, 8) == Extent{2, 4});
  CHECK(*fits(7, 2, 8) == Extent{1, 7});
  CHECK(fitting_extents(12, 6, 6) == std::vector<Extent>{{3, 4}, {2, 6}});
  for (int a = 1; a <= 80; ++a) {
    for (int m = 1; m <= 9; ++m) {
      for (int n = 1; n <= 9; ++n) CHECK(fits(a, m, n).has_value() == oracle::area_fits(a, m, n));
    }
  }
}

TEST_CASE("dp tables") {
  const DpTable six = dp_table(6, 6);
  CHECK(six.turns() == 8);
  CHECK_FALSE(six.reachable(8, 36));
  CHECK(oracle::all_area_vectors(6, 6).empty());

  const DpTable five = dp_table(5, 5);
  CHECK(five.turns() == 6);
  CHECK(five.reachable(6, 25));
  CHECK(five.reachable(0, 0));

  CHECK_FALSE(dp_table(18, 18).reachable(24, 324));
}

TEST_CASE("dp agrees with subset enumeration up to 12x12") {
  for (int m = 1; m <= 12; ++m) {
    for (int n = m; n <= 12; ++n) {
      CAPTURE(m);
      CAPTURE(n);
      const bool any = !oracle::all_area_vectors(m, n).empty();
      CHECK(dp_table(m, n).feasible() == any);
      CHECK(dp_table(n, m).feasible() == any);
      CHECK(oracle::selection_exists(m, n) == any);
    }
  }
}

TEST_CASE("extract_selection") {
  const auto three = extract_selection(dp_table(3, 3));
  REQUIRE(three.has_value());
  CHECK(three->areas() == std::vector<std::int64_t>{2, 3, 4});
  CHECK(three->rects == std::vector<Extent>{{1, 2}, {1, 3}, {2, 2}});

  CHECK_FALSE(extract_selection(dp_table(6, 6)).has_value());

  const auto one = extract_selection(dp_table(1, 1));
  REQUIRE(one.has_value());
  CHECK(one->rects == std::vector<Extent>{{1, 1}});

  const auto five = extract_selection(dp_table(5, 5));
  REQUIRE(five.has_value());
  CHECK(five->total_area() == 25);
}

TEST_CASE("late turns prefer area t") {
  // 5x5: K 6, gap 4. Walking down from turn 6 keeps area t while the
  // remaining turns can still absorb the gap.
  const auto five = extract_selection(dp_table(5, 5));
  REQUIRE(five.has_value());
  CHECK(five->areas() == std::vector<std::int64_t>{2, 3, 4, 5, 5, 6});
}

TEST_CASE("selections satisfy their invariants and use gap expansions") {
  for (int m = 1; m <= 30; ++m) {
    for (int n = m; n <= 30; ++n) {
      const auto sel = extract_selection(dp_table(m, n));
      if (!sel) continue;
      CHECK_NOTHROW(check_selection(*sel, std::int64_t{m} * n));
      CHECK(sel->expansion_count() == profile(m, n).gap);
      CHECK(static_cast<std::int64_t>(sel->rects.size()) == profile(m, n).rectangles);
      for (const Extent& e : sel->rects) {
        CHECK(std::min(e.h, e.v) <= m);
        CHECK(std::max(e.h, e.v) <= n);
      }
    }
  }
}

TEST_CASE("enumerate_selections") {
  const auto three = enumerate_selections(3, 3, 10);
  REQUIRE(three.size() == 1);
  CHECK(three[0].areas() == std::vector<std::int64_t>{2, 3, 4});

  const auto five = enumerate_selections(5, 5, 1000);
  std::set<std::vector<std::int64_t>> from_oracle;
  for (const auto& v : oracle::all_area_vectors(5, 5)) from_oracle.insert(v);
  std::set<std::vector<std::int64_t>> from_dp;
  for (const auto& s : five) {
    for (std::int64_t a : s.areas()) CHECK(a != 7);
    from_dp.insert(s.areas());
  }
  CHECK(five.size() == from_dp.size());
  CHECK(from_dp == from_oracle);

  CHECK(enumerate_selections(1, 1, 5).size() == 1);
  CHECK(enumerate_selections(6, 6, 5).empty());
  CHECK(enumerate_selections(5, 5, 2).size() == 2);
  CHECK(enumerate_selections(5, 5, 1)[0].areas() == extract_selection(dp_table(5, 5))->areas());
}

TEST_CASE("turns_to_fill") {
  CHECK(turns_to_fill(0, 1) == 0);
  CHECK(turns_to_fill(25, 1) == 6);
  CHECK(turns_to_fill(36, 1) == 8);
  CHECK(turns_to_fill(6, 2) == 2);
  CHECK(turns_to_fill(1, 2) == std::nullopt);
  for (std::int64_t area = 1; area <= 500; ++area) CHECK(turns_to_fill(area, 1) == split_area(area).rectangles);
}

TEST_CASE("check_selection rejects broken selections") {
  RectangleSelection sel{{3, 3}, 1, {{1, 2}, {1, 3}, {2, 2}}};
  CHECK_NOTHROW(check_selection(sel, 9));
  CHECK_THROWS_AS(check_selection(sel, 10), Error);
  sel.rects[1] = Extent{1, 5};
  CHECK_THROWS_AS(check_selection(sel, 9), Error);
  sel.rects[1] = Extent{2, 2};
  CHECK_THROWS_AS(check_selection(sel, 9), Error);
}

TEST_CASE("selection text format") {
  const auto sel = *extract_selection(dp_table(5, 5));
  const std::string text = format_selection(sel);
  std::istringstream in(text);
  const RectangleSelection back = parse_selection(in, GridDims{5, 5});
  CHECK(back.rects == sel.rects);
  CHECK(back.first_turn == 1);
  std::istringstream gap("1 1 2\n3 1 3\n");
  CHECK_THROWS_AS(parse_selection(gap, GridDims{3, 3}), Error);
}

}  // TEST_SUITE
