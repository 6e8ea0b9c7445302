#pragma once

// Factor-level scanners over words: squares, cubes, forbidden factors, gap
// patterns b·α·c·α·a, and the perfect shuffle.
//
// Repetition scanning uses sampled longest-common-extension. For a period p
// the positions i with w[i] == w[i+p] are grouped into runs; a square of root p
// is a run of length >= p. Every window of p consecutive positions holds
// exactly one multiple of p, so it suffices to anchor at multiples of p and
// extend left and right (each by at most p). The scan is exhaustive; cost is
// O(n log n) plus the total extension length, which is O(n^2) only on highly
// periodic inputs such as 0^n.

#include <optional>
#include <span>
#include <vector>

#include "avoid/word.hpp"

namespace avoid {

struct SquareOccurrence {
  std::size_t position = 0;
  std::size_t root_length = 0;

  friend auto operator<=>(const SquareOccurrence&, const SquareOccurrence&) = default;
};

struct CubeOccurrence {
  std::size_t position = 0;
  std::size_t root_length = 0;

  friend auto operator<=>(const CubeOccurrence&, const CubeOccurrence&) = default;
};

/// All squares with root >= min_root, sorted by (position, root_length).
std::vector<SquareOccurrence> find_squares(const Word& w, std::size_t min_root = 1);

/// Squares of exactly one root length, sorted by position.
std::vector<SquareOccurrence> find_squares_with_root(const Word& w, std::size_t root);

/// Largest square root in w; 0 when w is squarefree.
std::size_t max_square_root(const Word& w);

/// First square (smallest root, then position) whose root lies in
/// [min_root, max_root], if any. Cheaper than find_squares when only
/// existence matters.
std::optional<SquareOccurrence> first_square_in_range(const Word& w, std::size_t min_root,
                                                      std::size_t max_root);

std::vector<CubeOccurrence> find_cubes(const Word& w);
std::optional<CubeOccurrence> first_cube_in_range(const Word& w, std::size_t min_root,
                                                  std::size_t max_root);

bool contains_factor(const Word& w, const Word& f);
std::optional<std::size_t> find_factor(const Word& w, const Word& f, std::size_t from = 0);

struct FactorOccurrence {
  Word factor;
  std::size_t position = 0;
};

/// Leftmost occurrence of any member of fs (ties: shorter member first).
std::optional<FactorOccurrence> scan_forbidden(const Word& w, std::span<const Word> fs);

/// The triple of b·α·c·α·a (α ranges over all words, including ε).
struct GapPattern {
  Symbol first = 0;  // b
  Symbol middle = 0; // c
  Symbol last = 0;   // a

  friend auto operator<=>(const GapPattern&, const GapPattern&) = default;
};

std::string to_string(const GapPattern& p);

struct GapOccurrence {
  std::size_t first_pos = 0;  // b
  std::size_t middle_pos = 0; // c
  std::size_t last_pos = 0;   // a
  std::size_t alpha_length = 0;
};

/// Smallest start position, then smallest |α|.
std::optional<GapOccurrence> contains_gap_pattern(const Word& w, const GapPattern& p);

/// a1 b1 a2 b2 ... an bn. Throws UsageError on length or alphabet mismatch.
Word perfect_shuffle(const Word& w, const Word& x);

/// Repetitions ending exactly at the last symbol of w, found with one
/// Z-array over the reversed word (O(|w|)). Used by incremental DFS.
struct SuffixRepetitions {
  std::vector<std::size_t> square_roots; // ascending
  std::vector<std::size_t> cube_roots;   // ascending
};
SuffixRepetitions suffix_repetitions(std::span<const Symbol> w, bool want_cubes);

} // namespace avoid
