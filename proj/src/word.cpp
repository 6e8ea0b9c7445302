#include "avoid/word.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace avoid {

namespace {

void check_alphabet(unsigned k) {
  if (k < 1 || k > kMaxAlphabet)
    throw UsageError("alphabet size " + std::to_string(k) + " outside [1, 255]");
}

} // namespace

Word::Word(unsigned alphabet_size) : alphabet_size_(alphabet_size) {
  check_alphabet(alphabet_size);
}

Word::Word(std::vector<Symbol> symbols, unsigned alphabet_size)
    : symbols_(std::move(symbols)), alphabet_size_(alphabet_size) {
  check_alphabet(alphabet_size);
  for (Symbol s : symbols_)
    if (s >= alphabet_size_)
      throw UsageError("symbol " + std::to_string(s) + " outside alphabet of size " +
                       std::to_string(alphabet_size_));
}

Word::Word(std::initializer_list<Symbol> symbols, unsigned alphabet_size)
    : Word(std::vector<Symbol>(symbols), alphabet_size) {}

Word Word::parse(std::string_view digits, unsigned alphabet_size) {
  if (alphabet_size > kMaxTextAlphabet)
    throw UsageError("digit-string words need an alphabet of at most 10 symbols");
  std::vector<Symbol> out;
  out.reserve(digits.size());
  for (char ch : digits) {
    if (ch < '0' || ch > '9')
      throw UsageError(std::string("not a digit: '") + ch + "'");
    out.push_back(static_cast<Symbol>(ch - '0'));
  }
  return Word(std::move(out), alphabet_size);
}

Word Word::parse(std::string_view digits) {
  unsigned k = 2;
  for (char ch : digits)
    if (ch >= '0' && ch <= '9')
      k = std::max(k, static_cast<unsigned>(ch - '0') + 1);
  return parse(digits, k);
}

std::string Word::str() const {
  if (alphabet_size_ > kMaxTextAlphabet)
    throw UsageError("digit-string form needs an alphabet of at most 10 symbols");
  std::string s(symbols_.size(), '0');
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    s[i] = static_cast<char>('0' + symbols_[i]);
  return s;
}

void Word::push_back(Symbol s) {
  if (s >= alphabet_size_)
    throw UsageError("symbol " + std::to_string(s) + " outside alphabet of size " +
                     std::to_string(alphabet_size_));
  symbols_.push_back(s);
}

void Word::append(const Word& other) {
  if (other.alphabet_size_ > alphabet_size_)
    for (Symbol s : other.symbols_)
      if (s >= alphabet_size_)
        throw UsageError("appending a word over a larger alphabet");
  symbols_.insert(symbols_.end(), other.symbols_.begin(), other.symbols_.end());
}

void Word::truncate(std::size_t n) {
  if (n < symbols_.size())
    symbols_.resize(n);
}

Word Word::slice(std::size_t pos, std::size_t len) const {
  if (pos > symbols_.size() || len > symbols_.size() - pos)
    throw UsageError("slice out of range");
  Word w(alphabet_size_);
  w.symbols_.assign(symbols_.begin() + static_cast<std::ptrdiff_t>(pos),
                    symbols_.begin() + static_cast<std::ptrdiff_t>(pos + len));
  return w;
}

Word Word::suffix(std::size_t len) const {
  if (len > symbols_.size())
    throw UsageError("suffix longer than word");
  return slice(symbols_.size() - len, len);
}

bool Word::starts_with(const Word& w) const noexcept {
  return w.size() <= size() && std::equal(w.begin(), w.end(), begin());
}

bool Word::ends_with(const Word& w) const noexcept {
  return w.size() <= size() && std::equal(w.begin(), w.end(), end() - static_cast<std::ptrdiff_t>(w.size()));
}

Word Word::with_alphabet(unsigned alphabet_size) const {
  return Word(symbols_, alphabet_size);
}

std::strong_ordering operator<=>(const Word& a, const Word& b) noexcept {
  return std::lexicographical_compare_three_way(a.symbols_.begin(), a.symbols_.end(),
                                                b.symbols_.begin(), b.symbols_.end());
}

Word operator+(Word lhs, const Word& rhs) {
  lhs.append(rhs);
  return lhs;
}

std::vector<Word> parse_word_list(std::string_view text, unsigned alphabet_size) {
  std::vector<Word> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos)
      eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back())))
      line.remove_suffix(1);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front())))
      line.remove_prefix(1);
    if (line.empty())
      continue;
    try {
      out.push_back(Word::parse(line, alphabet_size));
    } catch (const UsageError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return out;
}

std::string format_word_list(std::span<const Word> words) {
  std::string out;
  for (const Word& w : words) {
    out += w.str();
    out += '\n';
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace avoid
