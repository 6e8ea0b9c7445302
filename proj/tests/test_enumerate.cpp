#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <set>

#include <Eigen/Dense>

#include "avoid/enumerate.hpp"
#include "avoid/instances.hpp"
#include "oracles.hpp"

using namespace avoid;
using namespace avoid::testing;

namespace {

const AvoidanceSpec& cubefree_spec() {
  static const AvoidanceSpec s = *builtin_spec("dekking");
  return s;
}

const AvoidanceSpec& whitelist_spec() {
  static const AvoidanceSpec s = *builtin_spec("fraenkel-simpson");
  return s;
}

std::vector<std::uint64_t> naive_counts(const AvoidanceSpec& s, std::size_t n_max) {
  std::vector<std::uint64_t> out;
  for (std::size_t n = 0; n <= n_max; ++n) {
    std::uint64_t c = 0;
    all_words(2, n, [&](const Word& w) { c += naive_legal(w, s); });
    out.push_back(c);
  }
  return out;
}

std::vector<std::uint64_t> as_u64(const std::vector<BigInt>& xs) {
  std::vector<std::uint64_t> out;
  for (const BigInt& x : xs)
    out.push_back(static_cast<std::uint64_t>(x));
  return out;
}

AvoidanceSpec forbid(std::initializer_list<const char*> ws) {
  AvoidanceSpec s;
  for (const char* w : ws)
    s.forbidden_factors.push_back(Word::parse(w, 2));
  return s;
}

// Spectral radius of the live-state transition matrix, via a dense
// eigen-decomposition.
double dense_spectral_radius(const FactorAutomaton& a) {
  std::vector<std::size_t> index(a.states(), a.states());
  std::size_t n = 0;
  for (std::size_t q = 0; q < a.states(); ++q)
    if (!a.dead(q))
      index[q] = n++;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t q = 0; q < a.states(); ++q) {
    if (a.dead(q))
      continue;
    for (Symbol x = 0; x < a.alphabet_size(); ++x) {
      std::size_t r = a.next(q, x);
      if (!a.dead(r))
        m(index[r], index[q]) += 1;
    }
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  double best = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    best = std::max(best, std::abs(es.eigenvalues()[i]));
  return best;
}

// Longest legal word by breadth-first extension, checked with the naive
// oracle only.
std::pair<std::size_t, std::vector<Word>> naive_longest(const AvoidanceSpec& s) {
  std::vector<Word> level{Word(2)};
  std::size_t n = 0;
  while (true) {
    std::vector<Word> next;
    for (const Word& w : level)
      for (Symbol x = 0; x < 2; ++x) {
        Word v = w;
        v.push_back(x);
        if (naive_legal(v, s))
          next.push_back(v);
      }
    if (next.empty())
      return {n, level};
    level = std::move(next);
    ++n;
  }
}

} // namespace

TEST_SUITE("counting") {

TEST_CASE("exact counts agree with brute force up to length 16") {
  CHECK(as_u64(count_avoiding(cubefree_spec(), 16, 1).counts) == naive_counts(cubefree_spec(), 16));
  CHECK(as_u64(count_avoiding(whitelist_spec(), 16, 1).counts) ==
        naive_counts(whitelist_spec(), 16));
}

TEST_CASE("tabulated counts") {
  const std::vector<std::uint64_t> g = {1,  2,  4,   6,   10,  16,  24,  36,  52,
                                        72, 90, 116, 142, 178, 220, 264, 332, 414};
  const std::vector<std::uint64_t> h = {1,  2,  4,   8,   13,  22,  31,  46,  58, 78,
                                        99, 124, 144, 176, 198, 234, 262, 300, 351};
  CHECK(as_u64(count_avoiding(cubefree_spec(), 17).counts) == g);
  CHECK(as_u64(count_avoiding(whitelist_spec(), 18).counts) == h);
}

TEST_CASE("worker count does not change the result") {
  auto one = count_avoiding(cubefree_spec(), 20, 1).counts;
  for (unsigned w : {2u, 3u, 8u})
    CHECK(count_avoiding(cubefree_spec(), 20, w).counts == one);
  auto two = count_avoiding(whitelist_spec(), 18, 1).counts;
  CHECK(count_avoiding(whitelist_spec(), 18, 4).counts == two);
  CHECK(count_avoiding(cubefree_spec(), 0, 4).counts == std::vector<BigInt>{1});
}

TEST_CASE("csv output") {
  CountTable t = count_avoiding(cubefree_spec(), 3, 1);
  CHECK(t.csv() == "n,count\n0,1\n1,2\n2,4\n3,6\n");
}

TEST_CASE("no 00 gives Fibonacci numbers") {
  AvoidanceSpec s = forbid({"00"});
  auto c = as_u64(count_avoiding(s, 30, 1).counts);
  CHECK(c[0] == 1);
  CHECK(c[1] == 2);
  for (std::size_t n = 2; n < c.size(); ++n)
    CHECK(c[n] == c[n - 1] + c[n - 2]);
  FactorAutomaton a(s.forbidden_factors, 2);
  CHECK(as_u64(a.path_counts(30)) == c);
}

} // TEST_SUITE

TEST_SUITE("minimal forbidden words") {

TEST_CASE("members are illegal with legal truncations") {
  for (const AvoidanceSpec* s : {&cubefree_spec(), &whitelist_spec()}) {
    MinimalForbiddenSet mf = minimal_forbidden(*s, 20);
    CHECK(std::is_sorted(mf.words.begin(), mf.words.end(), [](const Word& x, const Word& y) {
      return x.size() != y.size() ? x.size() < y.size() : x < y;
    }));
    for (const Word& w : mf.words) {
      CAPTURE(w.str());
      CHECK(w.size() <= 20);
      CHECK_FALSE(satisfies_spec(w, *s).ok());
      CHECK(satisfies_spec(w.prefix(w.size() - 1), *s).ok());
      CHECK(satisfies_spec(w.suffix(w.size() - 1), *s).ok());
    }
  }
}

TEST_CASE("sizes and extremes of the length-20 sets") {
  MinimalForbiddenSet a = minimal_forbidden(cubefree_spec(), 20);
  CHECK(a.words.size() == 90);
  CHECK(a.words.front().str() == "000");
  CHECK(a.words.back().str() == "11011001001101100100");
  MinimalForbiddenSet b = minimal_forbidden(whitelist_spec(), 20);
  CHECK(b.words.size() == 65);
  CHECK(b.words.front().str() == "0000");
  CHECK(b.words.back().str() == "1110001011100010");
}

TEST_CASE("complete against brute force for short lengths") {
  for (const AvoidanceSpec* s : {&cubefree_spec(), &whitelist_spec()}) {
    std::vector<Word> expected;
    for (std::size_t n = 1; n <= 13; ++n)
      all_words(2, n, [&](const Word& w) {
        if (!naive_legal(w, *s) && naive_legal(w.prefix(n - 1), *s) &&
            naive_legal(w.suffix(n - 1), *s))
          expected.push_back(w);
      });
    CHECK(minimal_forbidden(*s, 13).words == expected);
  }
}

} // TEST_SUITE

TEST_SUITE("automaton") {

TEST_CASE("accepts exactly the words avoiding the factors") {
  std::vector<Word> fs{Word::parse("0110"), Word::parse("11"), Word::parse("1010")};
  FactorAutomaton a(fs, 2);
  for (std::size_t n = 0; n <= 10; ++n)
    all_words(2, n, [&](const Word& w) {
      bool avoids = true;
      for (const Word& f : fs)
        avoids = avoids && !contains_factor(w, f);
      CHECK(a.accepts(w) == avoids);
    });
}

TEST_CASE("path counts match exact counts up to the factor length, then bound them") {
  for (const AvoidanceSpec* s : {&cubefree_spec(), &whitelist_spec()}) {
    FactorAutomaton a(minimal_forbidden(*s, 20).words, 2);
    auto exact = count_avoiding(*s, 26).counts;
    auto paths = a.path_counts(26);
    for (std::size_t n = 0; n <= 26; ++n) {
      CAPTURE(n);
      if (n <= 20)
        CHECK(paths[n] == exact[n]);
      else
        CHECK(paths[n] >= exact[n]);
    }
  }
}

TEST_CASE("automaton sizes") {
  FactorAutomaton a(minimal_forbidden(cubefree_spec(), 20).words, 2);
  CHECK(a.states() == 729);
  CHECK(a.live_states() == 639);
  FactorAutomaton b(minimal_forbidden(whitelist_spec(), 20).words, 2);
  CHECK(b.states() == 391);
  CHECK(b.live_states() == 326);
}

} // TEST_SUITE

TEST_SUITE("growth") {

TEST_CASE("golden ratio without 000 and 111") {
  FactorAutomaton a(forbid({"000", "111"}).forbidden_factors, 2);
  GrowthEstimate g = growth_rate(a, 1e-12);
  CHECK(std::abs(g.eigenvalue - (1 + std::sqrt(5.0)) / 2) < 1e-6);
  CHECK(std::abs(g.eigenvalue - dense_spectral_radius(a)) < 1e-8);
}

TEST_CASE("length-20 sets agree with a dense eigen-decomposition") {
  const std::pair<const AvoidanceSpec*, double> cases[] = {{&cubefree_spec(), 1.178},
                                                           {&whitelist_spec(), 1.135}};
  for (auto [s, approx] : cases) {
    FactorAutomaton a(minimal_forbidden(*s, 20).words, 2);
    GrowthEstimate g = growth_rate(a, 1e-10);
    double dense = dense_spectral_radius(a);
    CHECK(std::abs(g.eigenvalue - dense) < 1e-6);
    CHECK(std::abs(g.eigenvalue - approx) <= 0.005);
    CHECK(g.live_states == a.live_states());
  }
}

TEST_CASE("degenerate automata") {
  // Every word of length 2 contains 00, 01, 10 or 11.
  FactorAutomaton none(forbid({"00", "01", "10", "11"}).forbidden_factors, 2);
  CHECK(growth_rate(none).eigenvalue == 0.0);
  FactorAutomaton all(std::vector<Word>{}, 2);
  CHECK(growth_rate(all).eigenvalue == doctest::Approx(2.0).epsilon(1e-9));
  FactorAutomaton empty(forbid({"0", "1"}).forbidden_factors, 2);
  CHECK(empty.live_states() == 1); // only the empty word
  CHECK(growth_rate(empty).eigenvalue == 0.0);
}

} // TEST_SUITE

TEST_SUITE("exhaustion") {

TEST_CASE("binary squarefree words stop at length 3") {
  AvoidanceSpec s = parse_spec("alphabet 2\nsquares forbid-all\n");
  ExhaustResult r = exhaust_max_length(s, 100);
  CHECK(r.finite);
  CHECK(r.max_length == 3);
  CHECK(r.witness.str() == "010");
}

TEST_CASE("finite languages agree with breadth-first brute force") {
  for (const char* name : {"ejs2", "ejs3"}) {
    CAPTURE(name);
    AvoidanceSpec s = *builtin_spec(name);
    ExhaustResult r = exhaust_max_length(s, 200);
    REQUIRE(r.finite);
    auto [n, longest] = naive_longest(s);
    CHECK(r.max_length == n);
    CHECK(r.witness == *std::min_element(longest.begin(), longest.end()));
  }
  CHECK(exhaust_max_length(*builtin_spec("ejs2"), 200).max_length == 18);
  CHECK(exhaust_max_length(*builtin_spec("ejs3"), 200).max_length == 29);
}

TEST_CASE("an infinite language hits the cap") {
  AvoidanceSpec s = parse_spec("alphabet 2\nsquares forbid-roots-at-least 3\n");
  ExhaustResult r = exhaust_max_length(s, 60);
  CHECK_FALSE(r.finite);
  CHECK(r.max_length == 60);
  CHECK(naive_legal(r.witness, s));
  CHECK_FALSE(exhaust_max_length(cubefree_spec(), 80).finite);
}

} // TEST_SUITE

TEST_SUITE("families") {

TEST_CASE("four-letter family of length 600") {
  auto reg = InstanceRegistry::load(AVOID_TEST_SCENARIO_DIR);
  const Morphism& h = reg.morphism("dekking_h");
  FamilyReport r = lower_bound_family(reg.substitution("dekking_sub"), reg.morphism("dekking_g"),
                                      h.image(0), cubefree_spec(), 300);
  CHECK(r.word_length == 600);
  CHECK(r.family_size == 4);
  CHECK(r.enumerated);
  CHECK(r.checked == 4);
  CHECK(r.verified_count == 4);
  CHECK(r.exponent_check);
  CHECK(r.passed());
  // Independent check of every member.
  for (const Word& w : enumerate_images(reg.substitution("dekking_sub"), h.image(0))) {
    Word x = apply(reg.morphism("dekking_g"), w);
    CHECK(x.size() == 600);
    CHECK(satisfies_spec(x, cubefree_spec()).ok());
  }
}

TEST_CASE("five-letter family of length 3456") {
  auto reg = InstanceRegistry::load(AVOID_TEST_SCENARIO_DIR);
  FamilyReport r = lower_bound_family(reg.substitution("fs_sub"), reg.morphism("fs_g"),
                                      reg.morphism("fs_h").image(0), whitelist_spec(), 1152);
  CHECK(r.word_length == 3456);
  CHECK(r.family_size == 16);
  CHECK(r.verified_count == 16);
  CHECK(r.exponent_check);
  // 16 >= 2^3 but not 2^5.
  FamilyReport tight = lower_bound_family(reg.substitution("fs_sub"), reg.morphism("fs_g"),
                                          reg.morphism("fs_h").image(0), whitelist_spec(), 691);
  CHECK_FALSE(tight.exponent_check);
}

TEST_CASE("singleton substitution gives the direct image") {
  Morphism g = Morphism::parse("0 -> 010011\n1 -> 010110\n2 -> 011001\n3 -> 011010\n");
  Morphism h = Morphism::parse("0 -> 0310201023\n1 -> 0310230102\n2 -> 0201031023\n3 -> 0203010201\n");
  Word seed = Word::parse("0310", 4);
  FamilyReport r = lower_bound_family(Substitution::from_morphism(h), g, seed, cubefree_spec(), 1000);
  CHECK(r.family_size == 1);
  CHECK(r.word_length == apply(g, apply(h, seed)).size());
  CHECK(r.verified_count == 1);
  // One word never reaches 2^(n/d) for n > 0.
  CHECK_FALSE(r.exponent_check);
}

TEST_CASE("sampling above the cap") {
  auto reg = InstanceRegistry::load(AVOID_TEST_SCENARIO_DIR);
  const Morphism& h = reg.morphism("dekking_h");
  Word seed = apply(h, h.image(0));
  FamilyOptions opts;
  opts.enumeration_cap = 8;
  opts.samples = 5;
  FamilyReport r = lower_bound_family(reg.substitution("dekking_sub"), reg.morphism("dekking_g"),
                                      seed, cubefree_spec(), 300, opts);
  CHECK_FALSE(r.enumerated);
  CHECK(r.checked == 5);
  CHECK(r.passed());
  CHECK(to_json(r).dump() == to_json(lower_bound_family(reg.substitution("dekking_sub"),
                                                        reg.morphism("dekking_g"), seed,
                                                        cubefree_spec(), 300, opts))
                                 .dump());
}

} // TEST_SUITE
