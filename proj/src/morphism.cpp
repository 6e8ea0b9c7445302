#include "avoid/morphism.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace avoid {

namespace {

struct Rule {
  std::size_t line;
  Symbol letter;
  std::vector<std::string> alternatives;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

unsigned inferred_alphabet(const std::vector<Word>& words) {
  unsigned k = 2;
  for (const Word& w : words)
    for (Symbol s : w)
      k = std::max(k, static_cast<unsigned>(s) + 1);
  return k;
}

struct ParsedRules {
  std::vector<Rule> rules; // indexed by letter
  std::optional<unsigned> target_alphabet;
  std::size_t last_line = 0;
};

ParsedRules parse_rules(std::string_view text, bool allow_alternatives) {
  ParsedRules out;
  std::map<unsigned, Rule> by_letter;
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
    line = trim(line);
    if (line.empty())
      continue;
    if (line.rfind("target-alphabet", 0) == 0) {
      std::string_view arg = trim(line.substr(15));
      unsigned k = 0;
      for (char c : arg) {
        if (c < '0' || c > '9')
          throw ParseError(line_no, "bad target alphabet '" + std::string(arg) + "'");
        k = k * 10 + static_cast<unsigned>(c - '0');
        if (k > kMaxAlphabet)
          break;
      }
      if (arg.empty() || k < 1 || k > kMaxTextAlphabet)
        throw ParseError(line_no, "target alphabet must be in [1, 10]");
      out.target_alphabet = k;
      continue;
    }
    auto arrow = line.find("->");
    if (arrow == std::string_view::npos)
      throw ParseError(line_no, "expected 'letter -> image'");
    std::string_view lhs = trim(line.substr(0, arrow));
    std::string_view rhs = trim(line.substr(arrow + 2));
    if (lhs.size() != 1 || lhs[0] < '0' || lhs[0] > '9')
      throw ParseError(line_no, "source letter must be a single digit, got '" +
                                    std::string(lhs) + "'");
    unsigned letter = static_cast<unsigned>(lhs[0] - '0');
    if (by_letter.count(letter))
      throw ParseError(line_no, "letter " + std::string(lhs) + " defined twice");
    Rule r{line_no, static_cast<Symbol>(letter), {}};
    std::size_t start = 0;
    while (true) {
      std::size_t comma = rhs.find(',', start);
      std::string_view alt =
          trim(rhs.substr(start, comma == std::string_view::npos ? rhs.npos : comma - start));
      for (char c : alt)
        if (c < '0' || c > '9')
          throw ParseError(line_no, "image must be a digit string, got '" + std::string(alt) + "'");
      r.alternatives.emplace_back(alt);
      if (comma == std::string_view::npos)
        break;
      start = comma + 1;
    }
    if (!allow_alternatives && r.alternatives.size() != 1)
      throw ParseError(line_no, "a morphism has exactly one image per letter");
    by_letter.emplace(letter, std::move(r));
  }
  out.last_line = line_no;
  unsigned expect = 0;
  for (auto& [letter, rule] : by_letter) {
    if (letter != expect)
      throw ParseError(rule.line, "letters must be 0..n-1; letter " + std::to_string(expect) +
                                      " is missing");
    out.rules.push_back(std::move(rule));
    ++expect;
  }
  if (out.rules.empty())
    throw ParseError(line_no, "no rules");
  return out;
}

Word parse_at(std::size_t line, const std::string& s, unsigned k) {
  try {
    return Word::parse(s, k);
  } catch (const UsageError& e) {
    throw ParseError(line, e.what());
  }
}

std::mutex g_fixed_point_mutex;
std::map<std::pair<std::string, Symbol>, std::shared_ptr<Word>> g_fixed_points;

} // namespace

// ---------------------------------------------------------------- Morphism

Morphism::Morphism(std::vector<Word> images, unsigned source_alphabet, unsigned target_alphabet)
    : images_(std::move(images)), source_alphabet_(source_alphabet),
      target_alphabet_(target_alphabet) {
  if (source_alphabet_ < 1 || source_alphabet_ > kMaxAlphabet)
    throw UsageError("source alphabet size outside [1, 255]");
  if (images_.size() != source_alphabet_)
    throw UsageError("expected " + std::to_string(source_alphabet_) + " images, got " +
                     std::to_string(images_.size()));
  for (Word& w : images_)
    w = w.with_alphabet(target_alphabet_);
}

Morphism::Morphism(std::vector<Word> images)
    : Morphism(images, static_cast<unsigned>(images.size()), inferred_alphabet(images)) {}

Morphism Morphism::parse(std::string_view text) {
  ParsedRules pr = parse_rules(text, false);
  std::vector<Word> images;
  unsigned k = pr.target_alphabet.value_or(0);
  if (!k) {
    k = 2;
    for (const Rule& r : pr.rules)
      for (char c : r.alternatives[0])
        k = std::max(k, static_cast<unsigned>(c - '0') + 1);
  }
  for (const Rule& r : pr.rules)
    images.push_back(parse_at(r.line, r.alternatives[0], k));
  return Morphism(std::move(images), static_cast<unsigned>(pr.rules.size()), k);
}

Morphism Morphism::load(const std::string& path) {
  return parse(read_file(path));
}

std::string Morphism::str() const {
  std::ostringstream out;
  if (target_alphabet_ != inferred_alphabet(images_))
    out << "target-alphabet " << target_alphabet_ << '\n';
  for (unsigned a = 0; a < source_alphabet_; ++a)
    out << a << " -> " << images_[a].str() << '\n';
  return out.str();
}

const Word& Morphism::image(Symbol a) const {
  if (a >= source_alphabet_)
    throw UsageError("letter " + std::to_string(a) + " outside source alphabet of size " +
                     std::to_string(source_alphabet_));
  return images_[a];
}

std::optional<std::size_t> Morphism::uniform_width() const {
  if (images_.empty())
    return std::nullopt;
  std::size_t k = images_[0].size();
  for (const Word& w : images_)
    if (w.size() != k)
      return std::nullopt;
  return k;
}

bool Morphism::injective_on_letters() const {
  std::set<Word> seen(images_.begin(), images_.end());
  return seen.size() == images_.size();
}

Word apply(const Morphism& m, const Word& w) {
  Word out(m.target_alphabet_size());
  std::size_t total = 0;
  for (Symbol s : w)
    total += m.image(s).size();
  out.reserve(total);
  for (Symbol s : w)
    out.append(m.images()[s]);
  return out;
}

Word power(const Morphism& m, std::size_t n, const Word& w) {
  if (!m.is_endomorphism())
    throw UsageError("power needs equal source and target alphabets");
  Word cur = w;
  for (std::size_t i = 0; i < n; ++i)
    cur = apply(m, cur);
  return cur;
}

bool is_prolongable(const Morphism& m, Symbol a) {
  if (!m.is_endomorphism() || a >= m.source_alphabet_size())
    return false;
  const Word& img = m.image(a);
  return img.size() >= 2 && img[0] == a;
}

// ------------------------------------------------------- FixedPointStream

FixedPointStream::FixedPointStream(Morphism m, Symbol seed)
    : morphism_(std::move(m)), seed_(seed), buffer_(morphism_.target_alphabet_size()) {
  if (!is_prolongable(morphism_, seed_))
    throw UsageError("morphism is not prolongable on letter " + std::to_string(seed_));
  buffer_.push_back(seed_);
}

void FixedPointStream::grow_to(std::size_t n) {
  while (buffer_.size() < n)
    buffer_ = apply(morphism_, buffer_);
}

Word FixedPointStream::prefix(std::size_t n) {
  grow_to(n);
  return buffer_.prefix(n);
}

Symbol FixedPointStream::at(std::size_t i) {
  grow_to(i + 1);
  return buffer_[i];
}

Word fixed_point_prefix(const Morphism& m, Symbol a, std::size_t n) {
  if (!is_prolongable(m, a))
    throw UsageError("morphism is not prolongable on letter " + std::to_string(a));
  std::shared_ptr<Word> buf;
  {
    std::lock_guard lock(g_fixed_point_mutex);
    auto key = std::make_pair(m.str(), a);
    auto& slot = g_fixed_points[key];
    if (!slot) {
      slot = std::make_shared<Word>(m.target_alphabet_size());
      slot->push_back(a);
    }
    if (slot->size() < n) {
      Word grown = *slot;
      while (grown.size() < n)
        grown = apply(m, grown);
      slot = std::make_shared<Word>(std::move(grown));
    }
    buf = slot;
  }
  return buf->prefix(n);
}

// ------------------------------------------------------------ Substitution

Substitution::Substitution(std::vector<std::vector<Word>> image_sets, unsigned target_alphabet)
    : image_sets_(std::move(image_sets)), target_alphabet_(target_alphabet) {
  if (image_sets_.empty() || image_sets_.size() > kMaxAlphabet)
    throw UsageError("substitution needs between 1 and 255 letters");
  for (std::size_t a = 0; a < image_sets_.size(); ++a) {
    auto& set = image_sets_[a];
    if (set.empty())
      throw UsageError("empty image set for letter " + std::to_string(a));
    for (Word& w : set) {
      w = w.with_alphabet(target_alphabet_);
      if (w.size() != set[0].size())
        throw UsageError("alternatives for letter " + std::to_string(a) +
                         " have different lengths");
    }
  }
}

Substitution Substitution::parse(std::string_view text) {
  ParsedRules pr = parse_rules(text, true);
  unsigned k = pr.target_alphabet.value_or(0);
  if (!k) {
    k = 2;
    for (const Rule& r : pr.rules)
      for (const std::string& alt : r.alternatives)
        for (char c : alt)
          k = std::max(k, static_cast<unsigned>(c - '0') + 1);
  }
  std::vector<std::vector<Word>> sets;
  for (const Rule& r : pr.rules) {
    std::vector<Word> set;
    for (const std::string& alt : r.alternatives) {
      Word w = parse_at(r.line, alt, k);
      if (!set.empty() && w.size() != set[0].size())
        throw ParseError(r.line, "alternatives must have equal lengths");
      set.push_back(std::move(w));
    }
    sets.push_back(std::move(set));
  }
  return Substitution(std::move(sets), k);
}

Substitution Substitution::load(const std::string& path) {
  return parse(read_file(path));
}

Substitution Substitution::from_morphism(const Morphism& m) {
  std::vector<std::vector<Word>> sets;
  for (const Word& w : m.images())
    sets.push_back({w});
  return Substitution(std::move(sets), m.target_alphabet_size());
}

std::string Substitution::str() const {
  std::ostringstream out;
  std::vector<Word> all;
  for (const auto& set : image_sets_)
    all.insert(all.end(), set.begin(), set.end());
  if (target_alphabet_ != inferred_alphabet(all))
    out << "target-alphabet " << target_alphabet_ << '\n';
  for (std::size_t a = 0; a < image_sets_.size(); ++a) {
    out << a << " ->";
    for (std::size_t i = 0; i < image_sets_[a].size(); ++i)
      out << (i ? ", " : " ") << image_sets_[a][i].str();
    out << '\n';
  }
  return out.str();
}

const std::vector<Word>& Substitution::image_set(Symbol a) const {
  if (a >= image_sets_.size())
    throw UsageError("letter " + std::to_string(a) + " outside source alphabet");
  return image_sets_[a];
}

std::optional<std::size_t> Substitution::uniform_width() const {
  std::size_t k = image_sets_[0][0].size();
  for (const auto& set : image_sets_)
    if (set[0].size() != k)
      return std::nullopt;
  return k;
}

Morphism Substitution::base_morphism() const {
  std::vector<Word> images;
  for (const auto& set : image_sets_)
    images.push_back(set[0]);
  return Morphism(std::move(images), source_alphabet_size(), target_alphabet_);
}

// ----------------------------------------------------------- ImageLanguage

ImageLanguage::ImageLanguage(const Substitution& s, Word w) : s_(s), w_(std::move(w)) {
  for (Symbol a : w_)
    s_.image_set(a);
}

BigInt ImageLanguage::count() const {
  return image_count(s_, w_);
}

ImageLanguage::Enumerator ImageLanguage::enumerate(std::uint64_t cap) const {
  BigInt c = count();
  if (c > BigInt(cap))
    throw UsageError("image language has " + c.str() + " words, above the enumeration cap of " +
                     std::to_string(cap) + "; use sampling instead");
  return Enumerator(&s_, &w_);
}

ImageLanguage::Enumerator::Enumerator(const Substitution* s, const Word* w)
    : s_(s), w_(w), choice_(w->size(), 0) {}

std::optional<Word> ImageLanguage::Enumerator::next() {
  if (done_)
    return std::nullopt;
  Word out(s_->target_alphabet_size());
  for (std::size_t i = 0; i < w_->size(); ++i)
    out.append(s_->image_set((*w_)[i])[choice_[i]]);
  // advance the odometer, last position fastest
  std::size_t i = choice_.size();
  while (true) {
    if (i == 0) {
      done_ = true;
      break;
    }
    --i;
    if (++choice_[i] < s_->image_set((*w_)[i]).size())
      break;
    choice_[i] = 0;
  }
  return out;
}

BigInt image_count(const Substitution& s, const Word& w) {
  BigInt c = 1;
  for (Symbol a : w)
    c *= s.image_set(a).size();
  return c;
}

std::vector<Word> enumerate_images(const Substitution& s, const Word& w, std::uint64_t cap) {
  ImageLanguage lang(s, w);
  auto it = lang.enumerate(cap);
  std::vector<Word> out;
  while (auto x = it.next())
    out.push_back(std::move(*x));
  return out;
}

Word sample_image(const Substitution& s, const Word& w, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  Word out(s.target_alphabet_size());
  for (Symbol a : w) {
    const auto& set = s.image_set(a);
    out.append(set[engine() % set.size()]);
  }
  return out;
}

// ------------------------------------------------------------ HatExpansion

HatExpansion expand_hats(const Substitution& s) {
  HatExpansion h;
  std::vector<Word> images;
  for (unsigned a = 0; a < s.source_alphabet_size(); ++a) {
    images.push_back(s.image_set(static_cast<Symbol>(a))[0]);
    h.letter_class.push_back(static_cast<Symbol>(a));
    h.origin.emplace_back(static_cast<Symbol>(a), 0);
  }
  for (unsigned a = 0; a < s.source_alphabet_size(); ++a) {
    const auto& set = s.image_set(static_cast<Symbol>(a));
    for (std::size_t i = 1; i < set.size(); ++i) {
      images.push_back(set[i]);
      h.letter_class.push_back(static_cast<Symbol>(a));
      h.origin.emplace_back(static_cast<Symbol>(a), i);
    }
  }
  if (images.size() > kMaxAlphabet)
    throw UsageError("hat expansion needs more than 255 letters");
  unsigned n = static_cast<unsigned>(images.size());
  h.morphism = Morphism(std::move(images), n, s.target_alphabet_size());
  return h;
}

std::string HatExpansion::letter_name(Symbol x) const {
  auto [a, i] = origin.at(x);
  std::string name(1, static_cast<char>('0' + a));
  if (i > 0)
    name += std::string(i, '^');
  return name;
}

} // namespace avoid
