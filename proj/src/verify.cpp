#include "avoid/verify.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace avoid {

namespace {

std::size_t require_width(const Morphism& m) {
  auto k = m.uniform_width();
  if (!k || *k == 0)
    throw UsageError("morphism is not uniform");
  return *k;
}

bool any_image_starts_with(const Morphism& m, const Word& w) {
  return std::any_of(m.images().begin(), m.images().end(),
                     [&](const Word& img) { return img.starts_with(w); });
}

bool any_image_ends_with(const Morphism& m, const Word& w) {
  return std::any_of(m.images().begin(), m.images().end(),
                     [&](const Word& img) { return img.ends_with(w); });
}

std::vector<Symbol> letters_whose_image(const Morphism& m, const Word& w, Side side) {
  std::vector<Symbol> out;
  for (unsigned x = 0; x < m.source_alphabet_size(); ++x) {
    const Word& img = m.images()[x];
    if (side == Side::Prefix ? img.starts_with(w) : img.ends_with(w))
      out.push_back(static_cast<Symbol>(x));
  }
  return out;
}

// Depth-first enumeration of all legal words (under spec, over letters
// 0..letters-1 mapped through cls) up to length max_len.
void for_each_legal_word(unsigned letters, const std::function<Symbol(Symbol)>& cls,
                         const AvoidanceSpec& spec, std::size_t max_len,
                         const std::function<void(const std::vector<Symbol>&)>& visit) {
  std::vector<Symbol> word;
  std::vector<Symbol> projected;
  std::vector<unsigned> next{0};
  while (!next.empty()) {
    if (next.back() >= letters || word.size() >= max_len) {
      next.pop_back();
      if (!word.empty()) {
        word.pop_back();
        projected.pop_back();
      }
      continue;
    }
    Symbol x = static_cast<Symbol>(next.back()++);
    word.push_back(x);
    projected.push_back(cls(x));
    if (suffix_legal(projected, spec)) {
      visit(word);
      next.push_back(0);
    } else {
      word.pop_back();
      projected.pop_back();
    }
  }
}

} // namespace

// ------------------------------------------------------------- SourceModel

SourceModel::SourceModel(AvoidanceSpec spec) : spec_(std::move(spec)) {
  for (unsigned a = 0; a < spec_.alphabet_size; ++a) {
    class_.push_back(static_cast<Symbol>(a));
    names_.push_back(std::string(1, static_cast<char>('0' + a)));
  }
}

SourceModel::SourceModel(AvoidanceSpec spec, const HatExpansion& hats)
    : spec_(std::move(spec)), class_(hats.letter_class) {
  for (Symbol c : class_)
    if (c >= spec_.alphabet_size)
      throw UsageError("hat expansion has letters outside the source spec alphabet");
  for (std::size_t x = 0; x < class_.size(); ++x)
    names_.push_back(hats.letter_name(static_cast<Symbol>(x)));
}

std::string SourceModel::name(const std::vector<Symbol>& xs) const {
  std::string s;
  for (Symbol x : xs)
    s += name(x);
  return s;
}

Word SourceModel::project(const Word& w) const {
  Word out(spec_.alphabet_size);
  out.reserve(w.size());
  for (Symbol x : w)
    out.push_back(letter_class(x));
  return out;
}

Word SourceModel::project(std::initializer_list<Symbol> w) const {
  Word out(spec_.alphabet_size);
  for (Symbol x : w)
    out.push_back(letter_class(x));
  return out;
}

bool SourceModel::legal(const Word& w) const {
  return satisfies_spec(project(w), spec_).ok();
}

bool SourceModel::legal(std::initializer_list<Symbol> w) const {
  return satisfies_spec(project(w), spec_).ok();
}

// ---------------------------------------------------------------- finders

std::vector<InclusionWitness> find_inclusions(const Morphism& m, const SourceModel* source) {
  const std::size_t k = require_width(m);
  const unsigned n = m.source_alphabet_size();
  if (source && source->letters() != n)
    throw UsageError("source model and morphism disagree on the alphabet");
  std::vector<InclusionWitness> out;
  for (unsigned a = 0; a < n; ++a)
    for (unsigned b = 0; b < n; ++b) {
      auto A = static_cast<Symbol>(a), B = static_cast<Symbol>(b);
      if (source && !source->legal({A, B}))
        continue;
      Word ab = m.images()[a] + m.images()[b];
      for (std::size_t o = 1; o < k; ++o)
        for (unsigned c = 0; c < n; ++c) {
          const Word& img = m.images()[c];
          if (std::equal(img.begin(), img.end(), ab.begin() + static_cast<std::ptrdiff_t>(o)))
            out.push_back({A, B, static_cast<Symbol>(c), o, ab.prefix(o), ab.suffix(k - o)});
        }
    }
  std::sort(out.begin(), out.end(), [](const InclusionWitness& x, const InclusionWitness& y) {
    return std::tie(x.a, x.b, x.c, x.offset) < std::tie(y.a, y.b, y.c, y.offset);
  });
  return out;
}

std::vector<InterchangeWitness> find_interchanges(const Morphism& m) {
  const std::size_t k = require_width(m);
  const unsigned n = m.source_alphabet_size();
  std::vector<InterchangeWitness> out;
  for (unsigned a = 0; a < n; ++a)
    for (unsigned b = 0; b < n; ++b)
      for (unsigned c = 0; c < n; ++c) {
        if (a == c || b == c)
          continue;
        const Word& ma = m.images()[a];
        const Word& mb = m.images()[b];
        const Word& mc = m.images()[c];
        for (std::size_t i = 1; i < k; ++i) {
          if (std::equal(ma.begin(), ma.begin() + static_cast<std::ptrdiff_t>(i), mc.begin()) &&
              std::equal(mb.begin() + static_cast<std::ptrdiff_t>(i), mb.end(),
                         mc.begin() + static_cast<std::ptrdiff_t>(i)))
            out.push_back({static_cast<Symbol>(a), static_cast<Symbol>(b), static_cast<Symbol>(c),
                           ma.prefix(i), ma.suffix(k - i), mb.prefix(i), mb.suffix(k - i)});
        }
      }
  return out;
}

// ------------------------------------------------------------- refutation

std::string to_string(EvidenceKind k) {
  return k == EvidenceKind::Proven ? "proven" : "empirical";
}

bool is_refuted(const RefutationReason& r) {
  return !std::holds_alternative<Unrefuted>(r);
}

namespace {

ExtensionCase examine_embedding(const Morphism& m, const InclusionWitness& w,
                                const SourceModel& src, Symbol e, Symbol e2, Word v, Word wt,
                                std::size_t depth) {
  ExtensionCase ec{e, e2, std::move(v), std::move(wt), Unrefuted{}, ""};
  const Symbol a = w.a, b = w.b, c = w.c;
  auto set = [&](LocalReason r, const char* label) {
    ec.reason = std::move(r);
    ec.label = label;
  };
  if (ec.v.empty() || ec.w.empty()) {
    set(Trivial{ec.v.empty() ? "v is empty" : "w is empty"}, "a.iv.A");
    return ec;
  }
  if ((src.same_class(e, c) || src.same_class(e2, c)) && !src.legal({c, c})) {
    bool right = !src.same_class(e, c);
    set(LetterCoincidence{right, c, {c, c}}, "a.iv.D");
    return ec;
  }
  if (!src.legal({e, c, e2})) {
    set(SourceForbidsFactor{{e, c, e2}, src.name({e, c, e2})}, "a.iv.E");
    return ec;
  }
  if (!any_image_starts_with(m, ec.w)) {
    set(SuffixOrPrefixMismatch{Side::Prefix, ec.w}, "a.iv.B");
    return ec;
  }
  if (!any_image_ends_with(m, ec.v)) {
    set(SuffixOrPrefixMismatch{Side::Suffix, ec.v}, "a.iv.C");
    return ec;
  }
  if (depth < 2)
    return ec;
  auto left = letters_whose_image(m, ec.v, Side::Suffix);
  auto right = letters_whose_image(m, ec.w, Side::Prefix);
  auto all_of = [](const std::vector<Symbol>& xs, auto pred) {
    return !xs.empty() && std::all_of(xs.begin(), xs.end(), pred);
  };
  if (all_of(left, [&](Symbol x) { return src.same_class(x, a); }) && !src.legal({a, a})) {
    set(ForcedExtension{Side::Suffix, true, left,
                        std::vector<std::vector<Symbol>>(left.size(), {a, a})},
        "a.iv.F");
    return ec;
  }
  if (all_of(right, [&](Symbol x) { return src.same_class(x, b); }) && !src.legal({b, b})) {
    set(ForcedExtension{Side::Prefix, true, right,
                        std::vector<std::vector<Symbol>>(right.size(), {b, b})},
        "a.iv.G");
    return ec;
  }
  if (all_of(left, [&](Symbol x) { return !src.legal({x, a, b}); })) {
    ForcedExtension fe{Side::Suffix, false, left, {}};
    for (Symbol x : left)
      fe.forbidden.push_back({x, a, b});
    set(std::move(fe), "a.iv.F'");
    return ec;
  }
  if (all_of(right, [&](Symbol x) { return !src.legal({a, b, x}); })) {
    ForcedExtension fe{Side::Prefix, false, right, {}};
    for (Symbol x : right)
      fe.forbidden.push_back({a, b, x});
    set(std::move(fe), "a.iv.G'");
    return ec;
  }
  return ec;
}

} // namespace

InclusionRefutation refute_inclusion(const Morphism& m, const InclusionWitness& w,
                                     const SourceModel& source, std::size_t depth) {
  const std::size_t k = require_width(m);
  if (w.t.empty() || w.u.empty())
    return {Trivial{w.t.empty() ? "t is empty" : "u is empty"}, "a.i", {}};
  if (!source.legal({w.a, w.b}))
    return {SourceForbidsFactor{{w.a, w.b}, source.name({w.a, w.b})}, "a.src", {}};
  if (!any_image_starts_with(m, w.u))
    return {SuffixOrPrefixMismatch{Side::Prefix, w.u}, "a.ii", {}};
  if (!any_image_ends_with(m, w.t))
    return {SuffixOrPrefixMismatch{Side::Suffix, w.t}, "a.iii", {}};
  if (depth == 0)
    return {Unrefuted{"context extension disabled at depth 0"}, "", {}};

  std::vector<ExtensionCase> cases;
  for (unsigned e = 0; e < m.source_alphabet_size(); ++e) {
    const Word& me = m.images()[e];
    if (!me.ends_with(w.t))
      continue;
    Word v = me.prefix(k - w.t.size());
    for (unsigned e2 = 0; e2 < m.source_alphabet_size(); ++e2) {
      const Word& me2 = m.images()[e2];
      if (!me2.starts_with(w.u))
        continue;
      Word wt = me2.suffix(k - w.u.size());
      cases.push_back(examine_embedding(m, w, source, static_cast<Symbol>(e),
                                        static_cast<Symbol>(e2), v, std::move(wt), depth));
    }
  }
  bool all = std::all_of(cases.begin(), cases.end(),
                         [](const ExtensionCase& c) { return c.refuted(); });
  if (all)
    return {ContextExtension{cases, cases.empty()}, "a.iv", cases};
  return {Unrefuted{"some context extension is not refuted"}, "", cases};
}

RefutationReason refute_interchange(const InterchangeWitness& w, const SourceModel& source,
                                    const std::vector<GapEvidence>& gap_evidence) {
  if (source.same_class(w.a, w.c))
    return Trivial{"a and c are the same letter"};
  if (source.same_class(w.b, w.c))
    return Trivial{"b and c are the same letter"};
  GapPattern p{source.letter_class(w.b), source.letter_class(w.c), source.letter_class(w.a)};
  for (const GapEvidence& ev : gap_evidence)
    if (ev.pattern == p)
      return GapPatternAbsent{ev};
  return Unrefuted{"no evidence that " + to_string(p) + " is absent from the source"};
}

// ----------------------------------------------------------- bounded case

std::size_t bounded_source_length(const Morphism& m, const AvoidanceSpec& target,
                                  std::size_t root_cap) {
  const std::size_t k = require_width(m);
  if (root_cap == 0)
    root_cap = 2 * k;
  std::size_t len = 2 * root_cap / k + 2;
  if (target.cubefree) {
    std::size_t rc = std::min(target.max_allowed_square_root().value_or(root_cap), root_cap);
    len = std::max(len, (3 * rc + 2 * k - 2) / k);
  }
  std::size_t f = target.max_forbidden_length();
  if (f > 0)
    len = std::max(len, (f - 1 + k - 1) / k + 1);
  return len;
}

BoundedCaseReport bounded_case_check(const Morphism& m, const SourceModel& source,
                                     const AvoidanceSpec& target, std::size_t root_cap) {
  const std::size_t k = require_width(m);
  if (source.letters() != m.source_alphabet_size())
    throw UsageError("source model and morphism disagree on the alphabet");
  BoundedCaseReport rep;
  rep.root_cap = root_cap ? root_cap : 2 * k;
  rep.max_source_length = bounded_source_length(m, target, rep.root_cap);
  rep.words_per_length.assign(rep.max_source_length + 1, 0);
  for_each_legal_word(
      m.source_alphabet_size(), [&](Symbol x) { return source.letter_class(x); },
      source.spec(), rep.max_source_length, [&](const std::vector<Symbol>& w) {
        ++rep.words_per_length[w.size()];
        ++rep.words_checked;
        Word src(w, m.source_alphabet_size());
        Word img = apply(m, src);
        SpecCheck chk = satisfies_spec(img, target, rep.root_cap);
        if (!chk.ok()) {
          ++rep.violation_count;
          if (rep.violations.size() < 16)
            rep.violations.push_back({src, *chk.violation});
        }
      });
  return rep;
}

// ----------------------------------------------------------- certificate

TransferCertificate verify_square_transfer(const Morphism& m, const SourceModel& source,
                                           const AvoidanceSpec& target,
                                           const VerifyOptions& opts) {
  const std::size_t k = require_width(m);
  if (!m.injective_on_letters())
    throw UsageError("morphism is not injective on letters");
  if (!source.spec().squarefree())
    throw UsageError("the transfer argument needs a squarefree source language");
  if (source.letters() != m.source_alphabet_size())
    throw UsageError("source model and morphism disagree on the alphabet");
  std::size_t root_cap = opts.root_cap ? opts.root_cap : 2 * k;
  auto allowed = target.max_allowed_square_root();
  if (!allowed || *allowed > root_cap)
    throw UsageError("the target must forbid every square root above " +
                     std::to_string(root_cap));

  TransferCertificate cert;
  cert.morphism_id = opts.morphism_id;
  cert.morphism_text = m.str();
  cert.source = source.spec();
  cert.target = target;
  cert.depth = opts.depth;
  for (unsigned x = 0; x < source.letters(); ++x)
    cert.letter_names.push_back(source.name(static_cast<Symbol>(x)));

  cert.bounded = bounded_case_check(m, source, target, root_cap);

  bool all_refuted = true;
  for (const InclusionWitness& w : find_inclusions(m)) {
    if (!source.legal({w.a, w.b})) {
      cert.source_excluded_inclusions.push_back(w);
      continue;
    }
    InclusionEntry entry{w, refute_inclusion(m, w, source, opts.depth)};
    if (!is_refuted(entry.refutation.reason)) {
      all_refuted = false;
      cert.obligations.push_back(
          {"inclusion " + source.name(w.a) + source.name(w.b) + "/" + source.name(w.c) +
               " at offset " + std::to_string(w.offset) + " is not refuted",
           false, std::nullopt});
    }
    cert.inclusions.push_back(std::move(entry));
  }

  std::vector<GapPattern> used;
  for (const InterchangeWitness& w : find_interchanges(m)) {
    InterchangeEntry entry{w, refute_interchange(w, source, opts.gap_evidence)};
    if (auto* g = std::get_if<GapPatternAbsent>(&entry.reason)) {
      if (std::find(used.begin(), used.end(), g->evidence.pattern) == used.end()) {
        used.push_back(g->evidence.pattern);
        cert.obligations.push_back({"absence of " + to_string(g->evidence.pattern) +
                                        " from the source language",
                                    true, g->evidence});
      }
    } else if (!is_refuted(entry.reason)) {
      all_refuted = false;
      cert.obligations.push_back({"interchange (" + source.name(w.a) + "," + source.name(w.b) +
                                      "," + source.name(w.c) + ") with |s|=" +
                                      std::to_string(w.s.size()) + " is not refuted",
                                  false, std::nullopt});
    }
    cert.interchanges.push_back(std::move(entry));
  }
  cert.complete = cert.bounded.passed() && all_refuted;
  return cert;
}

// ----------------------------------------------------------- gap patterns

FixedPointFactors::FixedPointFactors(Morphism m, Symbol seed)
    : m_(std::move(m)), seed_(seed), k_(require_width(m_)) {
  if (!is_prolongable(m_, seed_))
    throw UsageError("morphism is not prolongable on the seed letter");
}

const std::set<Word>& FixedPointFactors::factors(std::size_t n) {
  if (auto it = memo_.find(n); it != memo_.end())
    return it->second;
  const unsigned ka = m_.target_alphabet_size();
  std::set<Word> out;
  if (n == 0) {
    out.insert(Word(ka));
  } else if (n <= 2) {
    // least fixed point: letters and 2-factors of m(seed), closed under
    // taking images of letters and of 2-factors
    std::set<Symbol> letters;
    std::set<Word> pairs;
    auto absorb = [&](const Word& w) {
      bool grew = false;
      for (std::size_t i = 0; i < w.size(); ++i) {
        grew |= letters.insert(w[i]).second;
        if (i + 1 < w.size())
          grew |= pairs.insert(w.slice(i, 2)).second;
      }
      return grew;
    };
    absorb(m_.image(seed_));
    bool grew = true;
    while (grew) {
      grew = false;
      std::vector<Symbol> ls(letters.begin(), letters.end());
      for (Symbol x : ls)
        grew |= absorb(m_.image(x));
      std::vector<Word> ps(pairs.begin(), pairs.end());
      for (const Word& p : ps)
        grew |= absorb(m_.image(p[0]) + m_.image(p[1]));
    }
    if (n == 1) {
      for (Symbol x : letters)
        out.insert(Word({x}, ka));
    } else {
      out = std::move(pairs);
    }
  } else {
    std::size_t mlen = (n - 1 + k_ - 1) / k_ + 1;
    std::set<Word> shorter = factors(mlen);
    for (const Word& u : shorter) {
      Word img = apply(m_, u);
      for (std::size_t i = 0; i + n <= img.size(); ++i)
        out.insert(img.slice(i, n));
    }
  }
  return memo_.emplace(n, std::move(out)).first->second;
}

bool FixedPointFactors::contains(const Word& w) {
  return factors(w.size()).count(w) > 0;
}

std::string to_string(GapStrategy s) {
  switch (s) {
  case GapStrategy::SquareShortcut:
    return "square-shortcut";
  case GapStrategy::FollowerSet:
    return "follower-set";
  case GapStrategy::Window:
    return "window";
  case GapStrategy::Descent:
    return "descent";
  }
  return "?";
}

GapEvidence GapProof::evidence() const {
  return GapEvidence{pattern, EvidenceKind::Proven, to_string(strategy) + ": " + detail};
}

namespace {

Word make_word(unsigned k, std::initializer_list<Symbol> head, const Word& mid = Word(),
               std::initializer_list<Symbol> tail = {}) {
  Word w(k);
  for (Symbol s : head)
    w.push_back(s);
  w.append(mid);
  for (Symbol s : tail)
    w.push_back(s);
  return w;
}

Word pattern_instance(unsigned k, const GapPattern& p, const Word& alpha) {
  Word w(k);
  w.reserve(2 * alpha.size() + 3);
  w.push_back(p.first);
  w.append(alpha);
  w.push_back(p.middle);
  w.append(alpha);
  w.push_back(p.last);
  return w;
}

std::vector<Word> legal_words_of_length(const AvoidanceSpec& spec, std::size_t n) {
  std::vector<Word> out;
  if (n == 0) {
    out.emplace_back(spec.alphabet_size);
    return out;
  }
  for_each_legal_word(
      spec.alphabet_size, [](Symbol x) { return x; }, spec, n,
      [&](const std::vector<Symbol>& w) {
        if (w.size() == n)
          out.emplace_back(w, spec.alphabet_size);
      });
  return out;
}

std::optional<GapProof> try_follower_set(const GapPattern& p, const AvoidanceSpec& spec) {
  const unsigned k = spec.alphabet_size;
  auto legal = [&](const Word& w) { return satisfies_spec(w, spec).ok(); };
  if (legal(make_word(k, {p.first, p.middle, p.last})))
    return std::nullopt;
  // α nonempty starts with some d where c·d and b·d must both be legal
  bool followers = true;
  std::vector<Symbol> fs;
  for (unsigned d = 0; d < k; ++d) {
    auto D = static_cast<Symbol>(d);
    if (!legal(make_word(k, {p.middle, D})))
      continue;
    fs.push_back(D);
    if (legal(make_word(k, {p.first, D})))
      followers = false;
  }
  if (followers) {
    std::ostringstream os;
    os << "every letter following " << int(p.middle) << " is one of {";
    for (std::size_t i = 0; i < fs.size(); ++i)
      os << (i ? "," : "") << int(fs[i]);
    os << "}, and " << int(p.first) << "d is illegal for each; " << int(p.first)
       << int(p.middle) << int(p.last) << " is illegal";
    return GapProof{p, GapStrategy::FollowerSet, os.str(), {}, 0, 0};
  }
  // symmetric: α ends with some d where d·c and d·a must both be legal
  bool preds = true;
  std::vector<Symbol> ps;
  for (unsigned d = 0; d < k; ++d) {
    auto D = static_cast<Symbol>(d);
    if (!legal(make_word(k, {D, p.middle})))
      continue;
    ps.push_back(D);
    if (legal(make_word(k, {D, p.last})))
      preds = false;
  }
  if (preds) {
    std::ostringstream os;
    os << "every letter preceding " << int(p.middle) << " is one of {";
    for (std::size_t i = 0; i < ps.size(); ++i)
      os << (i ? "," : "") << int(ps[i]);
    os << "}, and d" << int(p.last) << " is illegal for each; " << int(p.first) << int(p.middle)
       << int(p.last) << " is illegal";
    return GapProof{p, GapStrategy::FollowerSet, os.str(), {}, 0, 0};
  }
  return std::nullopt;
}

// For |α| >= r, with P the length-r prefix and S the length-r suffix of α,
// the words bP, cP, Sc, Sa and ScP are all factors of bαcαa. If no (P, S)
// makes all five legal and every instance with |α| < r is illegal, the
// pattern cannot occur.
std::optional<GapProof> try_window(const GapPattern& p, const AvoidanceSpec& spec,
                                   std::size_t max_window) {
  const unsigned k = spec.alphabet_size;
  auto legal = [&](const Word& w) { return satisfies_spec(w, spec).ok(); };
  for (std::size_t r = 1; r <= max_window; ++r) {
    // instances with |α| = r - 1
    for (const Word& alpha : legal_words_of_length(spec, r - 1))
      if (legal(pattern_instance(k, p, alpha)))
        return std::nullopt;
    std::vector<Word> words = legal_words_of_length(spec, r);
    std::vector<Word> ps, ss;
    for (const Word& w : words) {
      if (legal(make_word(k, {p.first}, w)) && legal(make_word(k, {p.middle}, w)))
        ps.push_back(w);
      if (legal(make_word(k, {}, w, {p.middle})) && legal(make_word(k, {}, w, {p.last})))
        ss.push_back(w);
    }
    bool survivor = false;
    for (const Word& s : ss) {
      for (const Word& pre : ps) {
        Word scp = s;
        scp.push_back(p.middle);
        scp.append(pre);
        if (legal(scp)) {
          survivor = true;
          break;
        }
      }
      if (survivor)
        break;
    }
    if (!survivor) {
      std::ostringstream os;
      os << "no instance with |α| < " << r << " is legal and no length-" << r
         << " prefix/suffix pair of α survives";
      return GapProof{p, GapStrategy::Window, os.str(), {}, r, r - 1};
    }
  }
  return std::nullopt;
}

std::optional<GapProof> try_descent(const GapPattern& p, const AvoidanceSpec& spec,
                                    FixedPointFactors& fp, std::size_t base_bound) {
  const Morphism& m = fp.morphism();
  const std::size_t k = require_width(m);
  if (!find_inclusions(m).empty())
    throw UsageError("descent needs a morphism without inclusions");
  const unsigned ka = m.target_alphabet_size();
  const std::size_t base_alpha =
      std::max<std::size_t>(2 * k - 2, base_bound >= 3 ? (base_bound - 3) / 2 : 0);
  const bool squarefree = spec.squarefree();

  std::vector<GapPattern> family{p};
  std::set<GapPattern> seen{p};
  for (std::size_t i = 0; i < family.size(); ++i) {
    GapPattern q = family[i];
    if (squarefree && (q.first == q.middle || q.middle == q.last))
      continue;
    // base: short instances are not factors
    for (std::size_t len = 0; len <= base_alpha; ++len)
      for (const Word& alpha : fp.factors(len))
        if (fp.contains(pattern_instance(ka, q, alpha)))
          return std::nullopt;
    // step: a long instance desubstitutes to an instance of (x, e, y)
    for (unsigned e = 0; e < m.source_alphabet_size(); ++e) {
      const Word& me = m.images()[e];
      for (std::size_t o = 0; o < k; ++o) {
        if (me[o] != q.middle)
          continue;
        Word bs = make_word(ka, {q.first}, me.suffix(k - o - 1));
        Word pa = make_word(ka, {}, me.prefix(o), {q.last});
        if (!fp.contains(bs) || !fp.contains(pa))
          continue;
        for (unsigned x = 0; x < m.source_alphabet_size(); ++x) {
          if (!m.images()[x].ends_with(bs))
            continue;
          for (unsigned y = 0; y < m.source_alphabet_size(); ++y) {
            if (!m.images()[y].starts_with(pa))
              continue;
            GapPattern next{static_cast<Symbol>(x), static_cast<Symbol>(e),
                            static_cast<Symbol>(y)};
            if (seen.insert(next).second)
              family.push_back(next);
          }
        }
      }
    }
  }
  std::ostringstream os;
  os << "family {";
  for (std::size_t i = 0; i < family.size(); ++i)
    os << (i ? ", " : "") << to_string(family[i]);
  os << "} closed under desubstitution; no instance with |α| <= " << base_alpha
     << " is a factor";
  return GapProof{p, GapStrategy::Descent, os.str(), family, 0, base_alpha};
}

} // namespace

std::optional<GapProof> prove_gap_pattern_absence(const GapPattern& p,
                                                  const AvoidanceSpec& source,
                                                  FixedPointFactors* fp,
                                                  const GapProofOptions& opts) {
  if (p.first >= source.alphabet_size || p.middle >= source.alphabet_size ||
      p.last >= source.alphabet_size)
    throw UsageError("gap pattern leaves the source alphabet");
  if (source.squarefree() && (p.first == p.middle || p.middle == p.last)) {
    std::string why = p.first == p.middle ? "b = c makes (bα)² a factor"
                                           : "c = a makes (αc)² a factor";
    return GapProof{p, GapStrategy::SquareShortcut, why + " of a squarefree word", {}, 0, 0};
  }
  if (auto pr = try_follower_set(p, source))
    return pr;
  if (auto pr = try_window(p, source, opts.max_window))
    return pr;
  if (fp)
    return try_descent(p, source, *fp, opts.base_bound);
  return std::nullopt;
}

std::optional<GapEvidence> empirical_gap_evidence(const GapPattern& p, const Morphism& m,
                                                  Symbol seed, std::size_t n) {
  Word prefix = fixed_point_prefix(m, seed, n);
  if (contains_gap_pattern(prefix, p))
    return std::nullopt;
  return GapEvidence{p, EvidenceKind::Empirical,
                     "absent from the first " + std::to_string(n) + " symbols of the fixed point"};
}

std::vector<GapEvidence> GapEvidenceSet::evidence() const {
  std::vector<GapEvidence> out;
  for (const GapProof& p : proofs)
    out.push_back(p.evidence());
  return out;
}

GapEvidenceSet prove_interchange_patterns(const Morphism& m, const SourceModel& source,
                                          FixedPointFactors* fp, const GapProofOptions& opts) {
  std::set<GapPattern> needed;
  for (const InterchangeWitness& w : find_interchanges(m))
    if (!source.same_class(w.a, w.c) && !source.same_class(w.b, w.c))
      needed.insert({source.letter_class(w.b), source.letter_class(w.c), source.letter_class(w.a)});
  GapEvidenceSet out;
  for (const GapPattern& p : needed) {
    if (auto proof = prove_gap_pattern_absence(p, source.spec(), fp, opts))
      out.proofs.push_back(std::move(*proof));
    else
      out.unknown.push_back(p);
  }
  return out;
}

} // namespace avoid
