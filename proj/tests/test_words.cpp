#include <doctest.h>

#include <random>
#include <set>

#include "avoid/scan.hpp"
#include "avoid/spec.hpp"
#include "oracles.hpp"

using namespace avoid;
using namespace avoid::testing;

TEST_SUITE("words") {

TEST_CASE("word construction and digit form") {
  Word w = Word::parse("0310201023", 4);
  CHECK(w.size() == 10);
  CHECK(w.alphabet_size() == 4);
  CHECK(w.str() == "0310201023");
  CHECK(Word::parse("012").alphabet_size() == 3);
  CHECK(Word::parse("0").alphabet_size() == 2);
  CHECK_THROWS_AS(Word::parse("0130", 3), UsageError);
  CHECK_THROWS_AS(Word::parse("01a"), UsageError);
  CHECK_THROWS_AS(Word({5}, 4), UsageError);
  CHECK_THROWS_AS(Word(0), UsageError);
}

TEST_CASE("slices, prefixes and suffixes") {
  Word w = Word::parse("0120120", 3);
  CHECK(w.slice(1, 3).str() == "120");
  CHECK(w.prefix(2).str() == "01");
  CHECK(w.suffix(2).str() == "20");
  CHECK(w.starts_with(Word::parse("012", 3)));
  CHECK(w.ends_with(Word::parse("120", 3)));
  CHECK_FALSE(w.ends_with(Word::parse("0120120120", 3)));
  CHECK_THROWS_AS(w.slice(5, 3), UsageError);
  CHECK((Word::parse("01", 2) + Word::parse("10", 2)).str() == "0110");
}

TEST_CASE("word lists") {
  auto ws = parse_word_list("# header\n000\n\n111  # trailing\n", 2);
  REQUIRE(ws.size() == 2);
  CHECK(ws[1].str() == "111");
  CHECK(format_word_list(ws) == "000\n111\n");
  try {
    parse_word_list("00\n0x1\n", 2);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("every binary word of length 4 contains a square") {
  for (unsigned bits = 0; bits < 16; ++bits) {
    Word w(2);
    for (int i = 3; i >= 0; --i)
      w.push_back(static_cast<Symbol>((bits >> i) & 1));
    CHECK_MESSAGE(max_square_root(w) >= 1, w.str());
    CHECK(!naive_squares(w, 1).empty());
  }
  CHECK(max_square_root(Word::parse("010", 2)) == 0);
}

TEST_CASE("square scanner agrees with the quadratic oracle") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 400; ++trial) {
    unsigned k = 2 + static_cast<unsigned>(rng() % 3);
    std::size_t n = rng() % 60;
    Word w = random_word(rng, k, n);
    std::size_t min_root = 1 + rng() % 4;
    auto got = find_squares(w, min_root);
    auto want = naive_squares(w, min_root);
    REQUIRE_MESSAGE(got == want, w.str());
    std::size_t max_root = 0;
    for (const auto& s : naive_squares(w, 1))
      max_root = std::max(max_root, s.root_length);
    CHECK(max_square_root(w) == max_root);
    for (std::size_t p = 1; 2 * p <= n; ++p) {
      std::vector<SquareOccurrence> exact;
      for (const auto& s : want)
        if (s.root_length == p)
          exact.push_back(s);
      if (p >= min_root)
        CHECK(find_squares_with_root(w, p) == exact);
    }
    std::size_t lo = 1 + rng() % 3, hi = lo + rng() % 10;
    auto first = first_square_in_range(w, lo, hi);
    std::optional<SquareOccurrence> oracle;
    for (std::size_t p = lo; p <= hi && !oracle; ++p)
      for (const auto& s : naive_squares(w, 1))
        if (s.root_length == p) {
          oracle = s;
          break;
        }
    CHECK(first == oracle);
  }
}

TEST_CASE("cube scanner agrees with the quadratic oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    Word w = random_word(rng, 2, rng() % 50);
    REQUIRE_MESSAGE(find_cubes(w) == naive_cubes(w), w.str());
  }
  CHECK(find_cubes(Word::parse("000", 2)).size() == 1);
  CHECK(find_cubes(Word::parse("001001001", 2)).front().root_length == 3);
}

TEST_CASE("gap pattern scanner agrees with the oracle") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 400; ++trial) {
    Word w = random_word(rng, 4, rng() % 40);
    GapPattern p{static_cast<Symbol>(rng() % 4), static_cast<Symbol>(rng() % 4),
                 static_cast<Symbol>(rng() % 4)};
    auto got = contains_gap_pattern(w, p);
    auto want = naive_gap(w, p);
    REQUIRE_MESSAGE(got.has_value() == want.has_value(), (w.str() + " " + to_string(p)));
    if (got) {
      CHECK(got->first_pos == want->first_pos);
      CHECK(got->alpha_length == want->alpha_length);
      CHECK(got->middle_pos == got->first_pos + got->alpha_length + 1);
      CHECK(got->last_pos == got->first_pos + 2 * got->alpha_length + 2);
    }
  }
  auto occ = contains_gap_pattern(Word::parse("2103022", 4), GapPattern{1, 3, 2});
  REQUIRE(occ);
  CHECK(occ->first_pos == 1);
  CHECK(occ->alpha_length == 1);
  CHECK(to_string(GapPattern{1, 3, 2}) == "1α3α2");
}

TEST_CASE("forbidden factor scan") {
  Word w = Word::parse("0120312", 4);
  std::vector<Word> fs{Word::parse("312", 4), Word::parse("31", 4), Word::parse("20", 4)};
  auto hit = scan_forbidden(w, fs);
  REQUIRE(hit);
  CHECK(hit->position == 2);
  CHECK(hit->factor.str() == "20");
  hit = scan_forbidden(Word::parse("0312", 4), fs);
  REQUIRE(hit);
  CHECK(hit->factor.str() == "31");
  CHECK(find_factor(w, Word::parse("12", 4), 2) == std::optional<std::size_t>(5));
  CHECK_FALSE(contains_factor(w, Word::parse("33", 4)));
}

TEST_CASE("perfect shuffle") {
  CHECK(perfect_shuffle(Word::parse("010", 2), Word::parse("001", 2)).str() == "001001");
  CHECK_THROWS_AS(perfect_shuffle(Word::parse("01", 2), Word::parse("0", 2)), UsageError);
}

TEST_CASE("suffix repetitions match the oracle") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    Word w = random_word(rng, 2, 1 + rng() % 30);
    auto reps = suffix_repetitions(w.symbols(), true);
    std::vector<std::size_t> sq, cu;
    const std::size_t n = w.size();
    for (std::size_t p = 1; 2 * p <= n; ++p) {
      if (w.slice(n - 2 * p, p) == w.slice(n - p, p))
        sq.push_back(p);
      if (3 * p <= n && w.slice(n - 3 * p, p) == w.slice(n - p, p) &&
          w.slice(n - 2 * p, p) == w.slice(n - p, p))
        cu.push_back(p);
    }
    CHECK(reps.square_roots == sq);
    CHECK(reps.cube_roots == cu);
  }
}

} // TEST_SUITE

TEST_SUITE("spec") {

TEST_CASE("parse and round trip") {
  AvoidanceSpec s = parse_spec(
      "# binary\nalphabet 2\nsquares forbid-roots-at-least 4\ncubefree yes\nforbid 000 111\n");
  CHECK(s.alphabet_size == 2);
  CHECK(std::get<ForbidRootsAtLeast>(s.square_policy).threshold == 4);
  CHECK(s.cubefree);
  CHECK(s.forbidden_factors.size() == 2);
  CHECK(parse_spec(s.str()) == s);
  CHECK(s.max_allowed_square_root() == std::optional<std::size_t>(3));

  AvoidanceSpec wl = parse_spec("alphabet 2\nsquares whitelist 00 11 0101\n");
  CHECK(wl.max_allowed_square_root() == std::optional<std::size_t>(2));
  CHECK(parse_spec(wl.str()) == wl);
  CHECK(parse_spec("alphabet 3\nsquares forbid-all\n").squarefree());
  CHECK_FALSE(parse_spec("alphabet 3\n").max_allowed_square_root().has_value());
}

TEST_CASE("errors carry line numbers") {
  auto line_of = [](const char* text) -> std::size_t {
    try {
      parse_spec(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("alphabet 2\n\nsquares sometimes\n") == 3);
  CHECK(line_of("alphabet 2\nforbid 012\n") == 2);
  CHECK(line_of("alphabet 2\nsquares whitelist 01\n") == 2);
  CHECK(line_of("alphabet 11\n") == 1);
  CHECK(line_of("cubefree maybe\n") == 1);
  CHECK(line_of("squares forbid-all\n") != 0);
  CHECK(line_of("alphabet 2\nsquares forbid-roots-at-least 0\n") == 2);
}

TEST_CASE("satisfies_spec agrees with the naive checker") {
  std::vector<AvoidanceSpec> specs = {
      parse_spec("alphabet 2\nsquares forbid-roots-at-least 4\ncubefree yes\n"),
      parse_spec("alphabet 2\nsquares whitelist 00 11 0101\n"),
      parse_spec("alphabet 3\nsquares forbid-all\nforbid 02 121\n"),
      parse_spec("alphabet 2\nforbid 000 111\n"),
      parse_spec("alphabet 2\nsquares forbid-roots-at-least 2\n"),
  };
  std::mt19937_64 rng(17);
  for (const AvoidanceSpec& s : specs)
    for (int trial = 0; trial < 300; ++trial) {
      Word w = random_word(rng, s.alphabet_size, rng() % 24);
      bool fast = satisfies_spec(w, s).ok();
      REQUIRE_MESSAGE(fast == naive_legal(w, s), (w.str() + "\n" + s.str()));
      bool incremental = true;
      for (std::size_t i = 1; i <= w.size() && incremental; ++i)
        incremental = suffix_legal(w.symbols().first(i), s);
      CHECK(incremental == fast);
    }
}

TEST_CASE("violations report kind and place") {
  AvoidanceSpec s = parse_spec("alphabet 2\nsquares forbid-roots-at-least 2\ncubefree yes\n");
  auto v = satisfies_spec(Word::parse("0100100", 2), s);
  REQUIRE_FALSE(v.ok());
  CHECK(v.violation->kind == ViolationKind::Square);
  CHECK(v.violation->position == 0);
  CHECK(v.violation->factor.str() == "010010");
  v = satisfies_spec(Word::parse("1000", 2), s);
  REQUIRE_FALSE(v.ok());
  CHECK(v.violation->kind == ViolationKind::Cube);
  CHECK(to_string(ViolationKind::ForbiddenFactor) == "forbidden-factor");
}

} // TEST_SUITE
