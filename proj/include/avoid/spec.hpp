#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "avoid/word.hpp"

namespace avoid {

/// Every square may occur.
struct AllowAllSquares {
  friend bool operator==(const AllowAllSquares&, const AllowAllSquares&) = default;
};
/// No square may occur.
struct ForbidAllSquares {
  friend bool operator==(const ForbidAllSquares&, const ForbidAllSquares&) = default;
};
/// Squares xx with |x| >= threshold are forbidden.
struct ForbidRootsAtLeast {
  std::size_t threshold = 1;
  friend bool operator==(const ForbidRootsAtLeast&, const ForbidRootsAtLeast&) = default;
};
/// Only the listed square words may occur.
struct SquareWhitelist {
  std::vector<Word> squares;
  friend bool operator==(const SquareWhitelist&, const SquareWhitelist&) = default;
};

using SquarePolicy =
    std::variant<AllowAllSquares, ForbidAllSquares, ForbidRootsAtLeast, SquareWhitelist>;

struct AvoidanceSpec {
  unsigned alphabet_size = 2;
  std::vector<Word> forbidden_factors;
  SquarePolicy square_policy = AllowAllSquares{};
  bool cubefree = false;

  /// Throws UsageError if an invariant fails (whitelist entry not a square,
  /// threshold 0, symbol outside the alphabet).
  void validate() const;

  /// Largest root a square may have, or nullopt when unbounded.
  std::optional<std::size_t> max_allowed_square_root() const;
  std::size_t max_forbidden_length() const;
  bool squarefree() const;

  /// Text form, see parse_spec().
  std::string str() const;

  friend bool operator==(const AvoidanceSpec&, const AvoidanceSpec&) = default;
};

/// Parses the line-oriented spec format:
///
///   alphabet 4
///   squares forbid-all | allow-all | forbid-roots-at-least T | whitelist w...
///   cubefree yes|no
///   forbid w1 w2 ...          (may repeat)
///
/// '#' starts a comment. Errors are ParseError with a line number.
AvoidanceSpec parse_spec(std::string_view text);
AvoidanceSpec load_spec(const std::string& path);

enum class ViolationKind { ForbiddenFactor, Square, Cube };

std::string to_string(ViolationKind k);

struct Violation {
  ViolationKind kind = ViolationKind::ForbiddenFactor;
  std::size_t position = 0;
  /// Root length for squares and cubes, factor length otherwise.
  std::size_t length = 0;
  Word factor;
};

struct SpecCheck {
  std::optional<Violation> violation;

  bool ok() const noexcept { return !violation.has_value(); }
  explicit operator bool() const noexcept { return ok(); }
};

/// Checks forbidden factors first (leftmost occurrence), then squares
/// (smallest offending root, leftmost), then cubes. Square and cube checks
/// only look at roots <= max_root.
SpecCheck satisfies_spec(const Word& w, const AvoidanceSpec& spec,
                         std::size_t max_root = std::numeric_limits<std::size_t>::max());

/// True iff no violation ends at the last symbol of w. When every proper
/// prefix of w is legal this decides legality of w in O(|w| + |F|·max|f|).
bool suffix_legal(std::span<const Symbol> w, const AvoidanceSpec& spec);

} // namespace avoid
