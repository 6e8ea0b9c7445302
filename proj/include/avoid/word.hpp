#pragma once

#include <cstddef>
#include <cstdint>
#include <compare>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace avoid {

using Symbol = std::uint8_t;

inline constexpr unsigned kMaxAlphabet = 255;
inline constexpr unsigned kMaxTextAlphabet = 10;

/// Raised for contract violations by the caller (bad lengths, symbols out
/// of range, alphabet mismatches).
class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by the text-format readers. Carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// A finite word over Σ_k = {0, ..., k-1}.
class Word {
public:
  explicit Word(unsigned alphabet_size = 2);
  Word(std::vector<Symbol> symbols, unsigned alphabet_size);
  Word(std::initializer_list<Symbol> symbols, unsigned alphabet_size);

  /// Digit-string form, e.g. "0310201023". Requires k <= 10.
  static Word parse(std::string_view digits, unsigned alphabet_size);
  /// Like parse(), with k = max(2, largest digit + 1).
  static Word parse(std::string_view digits);

  std::string str() const;

  unsigned alphabet_size() const noexcept { return alphabet_size_; }
  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }

  Symbol operator[](std::size_t i) const noexcept { return symbols_[i]; }
  Symbol front() const { return symbols_.front(); }
  Symbol back() const { return symbols_.back(); }

  std::span<const Symbol> symbols() const noexcept { return symbols_; }
  auto begin() const noexcept { return symbols_.begin(); }
  auto end() const noexcept { return symbols_.end(); }

  void push_back(Symbol s);
  void pop_back() { symbols_.pop_back(); }
  void append(const Word& other);
  void reserve(std::size_t n) { symbols_.reserve(n); }
  void truncate(std::size_t n);

  Word slice(std::size_t pos, std::size_t len) const;
  Word prefix(std::size_t len) const { return slice(0, len); }
  Word suffix(std::size_t len) const;

  bool starts_with(const Word& w) const noexcept;
  bool ends_with(const Word& w) const noexcept;

  /// Same symbols, alphabet reinterpreted (must still cover every symbol).
  Word with_alphabet(unsigned alphabet_size) const;

  friend bool operator==(const Word& a, const Word& b) noexcept {
    return a.symbols_ == b.symbols_;
  }
  friend std::strong_ordering operator<=>(const Word& a, const Word& b) noexcept;

private:
  std::vector<Symbol> symbols_;
  unsigned alphabet_size_;
};

Word operator+(Word lhs, const Word& rhs);

/// Every word of a newline-separated list (blank lines and '#' comments
/// skipped). Errors carry line numbers.
std::vector<Word> parse_word_list(std::string_view text, unsigned alphabet_size);
std::string format_word_list(std::span<const Word> words);

std::string read_file(const std::string& path);

} // namespace avoid
