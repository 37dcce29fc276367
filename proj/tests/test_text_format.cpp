#include <doctest.h>

#include "packit/error.hpp"
#include "packit/text_format.hpp"
#include "support/fixtures.hpp"

using namespace packit;

TEST_SUITE("text") {

TEST_CASE("transcript round trip") {
  const auto moves = fixtures::figure_perfect();
  const std::string text = format_transcript(moves);
  CHECK(text.rfind("1 2 1 0 0\n", 0) == 0);
  CHECK(parse_transcript(text) == moves);
  CHECK(parse_transcript("# header\n\n1 1 1 0 0\n  # indented comment\n2 1 2 1 0\n").size() == 2);
}

TEST_CASE("malformed transcripts are parse errors") {
  for (const char* bad : {"1 2 1 0\n", "1 2 1 0 0 7\n", "a b c d e\n", "1 2 1 0 0x\n"}) {
    CAPTURE(bad);
    try {
      parse_transcript(std::string(bad));
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Parse);
    }
  }
}

TEST_CASE("partial grid round trip") {
  const std::string text = "3 4 2\n##..\n....\n.#..\n";
  const GameState s = parse_partial_grid(text);
  CHECK(s.dims() == GridDims{3, 4});
  CHECK(s.turn() == 2);
  CHECK(s.occupied(0, 0));
  CHECK(s.occupied(2, 1));
  CHECK_FALSE(s.occupied(1, 1));
  CHECK(s.free_count() == 9);
  CHECK(format_partial_grid(s) == text);
}

TEST_CASE("bad partial grids") {
  for (const char* bad : {"2 2 1\n..\n", "2 2 1\n..\n.x\n", "2 2\n..\n..\n", "2 2 1\n...\n..\n", "0 2 1\n"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_partial_grid(std::string(bad)), Error);
  }
}

TEST_CASE("render shows turn labels") {
  GameState s = new_game({5, 5});
  for (const Placement& p : fixtures::figure_perfect()) s = apply_placement(s, p);
  const std::string board = render_board(s);
  CHECK(board.find('6') != std::string::npos);
  CHECK(board.find('.') == std::string::npos);
}

}  // TEST_SUITE
