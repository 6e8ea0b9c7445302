#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "avoid/word.hpp"

namespace avoid {

using BigInt = boost::multiprecision::cpp_int;

/// Letter-to-word map Σ_s* → Σ_t*, given by one image per source letter.
class Morphism {
public:
  Morphism() = default;
  Morphism(std::vector<Word> images, unsigned source_alphabet, unsigned target_alphabet);
  /// Source alphabet = images.size(); target = max(2, largest symbol + 1).
  explicit Morphism(std::vector<Word> images);

  /// Text form: one "a -> image" line per letter, optional
  /// "target-alphabet N" line. Letters must cover 0..n-1 exactly once.
  static Morphism parse(std::string_view text);
  static Morphism load(const std::string& path);
  /// Canonical text; parse(str()) == *this and str() is stable.
  std::string str() const;

  unsigned source_alphabet_size() const noexcept { return source_alphabet_; }
  unsigned target_alphabet_size() const noexcept { return target_alphabet_; }
  const Word& image(Symbol a) const;
  const std::vector<Word>& images() const noexcept { return images_; }

  /// k when every image has length k.
  std::optional<std::size_t> uniform_width() const;
  bool injective_on_letters() const;
  bool is_endomorphism() const noexcept { return source_alphabet_ == target_alphabet_; }

  friend bool operator==(const Morphism&, const Morphism&) = default;

private:
  std::vector<Word> images_;
  unsigned source_alphabet_ = 0;
  unsigned target_alphabet_ = 2;
};

Word apply(const Morphism& m, const Word& w);
/// m^n(w). Requires an endomorphism.
Word power(const Morphism& m, std::size_t n, const Word& w);
bool is_prolongable(const Morphism& m, Symbol a);

/// Growing prefix of m^ω(seed). Not thread-safe; see fixed_point_prefix()
/// for a shared memoized variant.
class FixedPointStream {
public:
  FixedPointStream(Morphism m, Symbol seed);

  const Morphism& morphism() const noexcept { return morphism_; }
  Symbol seed() const noexcept { return seed_; }

  /// Length-n prefix (grows the buffer by whole applications of m).
  Word prefix(std::size_t n);
  Symbol at(std::size_t i);

private:
  void grow_to(std::size_t n);

  Morphism morphism_;
  Symbol seed_;
  Word buffer_;
};

/// Memoized per (morphism, seed); safe to call from several threads.
Word fixed_point_prefix(const Morphism& m, Symbol a, std::size_t n);

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 20;

/// Letter-to-finite-set-of-words map. Alternatives for one letter share a
/// length.
class Substitution {
public:
  Substitution() = default;
  Substitution(std::vector<std::vector<Word>> image_sets, unsigned target_alphabet);

  /// Same format as Morphism, alternatives separated by commas:
  /// "1 -> 0310230102, 0310230201".
  static Substitution parse(std::string_view text);
  static Substitution load(const std::string& path);
  static Substitution from_morphism(const Morphism& m);
  std::string str() const;

  unsigned source_alphabet_size() const noexcept {
    return static_cast<unsigned>(image_sets_.size());
  }
  unsigned target_alphabet_size() const noexcept { return target_alphabet_; }
  const std::vector<Word>& image_set(Symbol a) const;
  std::optional<std::size_t> uniform_width() const;

  /// First alternative for each letter.
  Morphism base_morphism() const;

  friend bool operator==(const Substitution&, const Substitution&) = default;

private:
  std::vector<std::vector<Word>> image_sets_;
  unsigned target_alphabet_ = 2;
};

/// The choice-product s(w), enumerated lazily in lexicographic choice order
/// (last position varies fastest).
class ImageLanguage {
public:
  ImageLanguage(const Substitution& s, Word w);

  BigInt count() const;

  class Enumerator {
  public:
    std::optional<Word> next();

  private:
    friend class ImageLanguage;
    Enumerator(const Substitution* s, const Word* w);
    const Substitution* s_;
    const Word* w_;
    std::vector<std::size_t> choice_;
    bool done_ = false;
  };

  /// Throws UsageError when count() exceeds cap; sample_image is the
  /// intended route for larger languages. The enumerator refers to this
  /// object, which must outlive it.
  Enumerator enumerate(std::uint64_t cap = kDefaultEnumerationCap) const;

private:
  Substitution s_;
  Word w_;
};

BigInt image_count(const Substitution& s, const Word& w);
std::vector<Word> enumerate_images(const Substitution& s, const Word& w,
                                   std::uint64_t cap = kDefaultEnumerationCap);

/// One pseudo-random member of s(w): per position, std::mt19937_64 seeded
/// with `seed` picks alternative engine() % |set|.
Word sample_image(const Substitution& s, const Word& w, std::uint64_t seed);

/// A substitution rewritten as a morphism in which every extra alternative
/// gets a fresh source letter. letter_class maps each letter back to the
/// letter it was split from.
struct HatExpansion {
  Morphism morphism;
  std::vector<Symbol> letter_class;
  /// (original letter, alternative index) of each expanded letter.
  std::vector<std::pair<Symbol, std::size_t>> origin;

  bool equivalent(Symbol x, Symbol y) const { return letter_class.at(x) == letter_class.at(y); }
  std::string letter_name(Symbol x) const;
};

HatExpansion expand_hats(const Substitution& s);

} // namespace avoid
