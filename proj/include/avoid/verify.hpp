#pragma once

// Transfer of avoidance properties through uniform morphisms.
//
// For a uniform, injective morphism m, a squarefree source language and a
// target square bound, a square in m(w) is either short (checked by
// enumerating all short source words) or long, in which case it must come
// from an inclusion m(c) ⊂ m(ab) or an interchange m(a)=st, m(b)=uv,
// m(c)=sv. Every such witness has to be refuted from properties of the
// source language.

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "avoid/morphism.hpp"
#include "avoid/scan.hpp"
#include "avoid/spec.hpp"

namespace avoid {

/// The source language seen by the verifier: an AvoidanceSpec over the
/// original letters, plus an optional map from morphism letters to those
/// letters (used for hat-expanded substitutions).
class SourceModel {
public:
  SourceModel() = default;
  explicit SourceModel(AvoidanceSpec spec);
  SourceModel(AvoidanceSpec spec, const HatExpansion& hats);

  const AvoidanceSpec& spec() const noexcept { return spec_; }
  /// Number of letters of the morphism's source alphabet.
  unsigned letters() const noexcept { return static_cast<unsigned>(class_.size()); }
  Symbol letter_class(Symbol x) const { return class_.at(x); }
  bool same_class(Symbol x, Symbol y) const { return class_.at(x) == class_.at(y); }
  const std::string& name(Symbol x) const { return names_.at(x); }
  std::string name(const std::vector<Symbol>& xs) const;

  Word project(const Word& w) const;
  Word project(std::initializer_list<Symbol> w) const;
  /// True iff the projection of w satisfies the spec.
  bool legal(const Word& w) const;
  bool legal(std::initializer_list<Symbol> w) const;

private:
  AvoidanceSpec spec_;
  std::vector<Symbol> class_;
  std::vector<std::string> names_;
};

struct InclusionWitness {
  Symbol a = 0, b = 0, c = 0;
  /// |t|: m(ab) = t · m(c) · u.
  std::size_t offset = 0;
  Word t, u;

  friend bool operator==(const InclusionWitness&, const InclusionWitness&) = default;
};

struct InterchangeWitness {
  Symbol a = 0, b = 0, c = 0;
  Word s, t, u, v; // m(a) = st, m(b) = uv, m(c) = sv

  friend bool operator==(const InterchangeWitness&, const InterchangeWitness&) = default;
};

/// Every (a, b, c, offset) with m(ab) = t·m(c)·u and t, u nonempty, sorted
/// by (a, b, c, offset). With a source model, witnesses whose ab is illegal
/// in the source are dropped. Throws UsageError for non-uniform m.
std::vector<InclusionWitness> find_inclusions(const Morphism& m,
                                              const SourceModel* source = nullptr);

/// Every (a, b, c, split) with a != c, b != c, 0 < |s| < width, sorted.
std::vector<InterchangeWitness> find_interchanges(const Morphism& m);

// ---------------------------------------------------------------- reasons

enum class Side { Prefix, Suffix };

struct Unrefuted {
  std::string note;
};
/// t or u (v or w̃) empty, or a ≡ c / b ≡ c for interchanges.
struct Trivial {
  std::string detail;
};
/// `word` is not a prefix (resp. suffix) of any letter image.
struct SuffixOrPrefixMismatch {
  Side side = Side::Prefix;
  Word word;
};
/// The factor is illegal in the source language.
struct SourceForbidsFactor {
  std::vector<Symbol> factor;
  std::string factor_name;
};
/// e ≡ c (or e′ ≡ c) and the square cc is illegal.
struct LetterCoincidence {
  bool right = false; // false: e, true: e′
  Symbol letter = 0;
  std::vector<Symbol> forbidden;
};
/// Every letter k that can extend the context on `side` (Suffix: to the
/// left of ab, Prefix: to the right) produces an illegal source word.
/// strict: the only candidates are k ≡ a (left) / k ≡ b (right) and the
/// forbidden word is aa / bb.
struct ForcedExtension {
  Side side = Side::Suffix;
  bool strict = true;
  std::vector<Symbol> candidates;
  std::vector<std::vector<Symbol>> forbidden; // one per candidate
};

enum class EvidenceKind { Proven, Empirical };
std::string to_string(EvidenceKind k);

struct GapEvidence {
  GapPattern pattern; // over source letters (classes)
  EvidenceKind kind = EvidenceKind::Proven;
  std::string handle;
};

struct GapPatternAbsent {
  GapEvidence evidence;
};

struct BoundedCaseExhausted {
  std::size_t max_source_length = 0;
  std::uint64_t words_checked = 0;
};

using LocalReason = std::variant<Unrefuted, Trivial, SuffixOrPrefixMismatch, SourceForbidsFactor,
                                 LetterCoincidence, ForcedExtension>;

/// One embedding v · m(ab) · w̃ = m(e c e′) examined by context extension.
struct ExtensionCase {
  Symbol e = 0, e2 = 0;
  Word v, w;
  LocalReason reason;
  std::string label; // "a.iv.A" .. "a.iv.G", "a.iv.F'" / "a.iv.G'" for general forms
  bool refuted() const { return !std::holds_alternative<Unrefuted>(reason); }
};

/// All embeddings refuted. vacuous: there was no embedding at all.
struct ContextExtension {
  std::vector<ExtensionCase> cases;
  bool vacuous = false;
};

using RefutationReason =
    std::variant<Unrefuted, Trivial, SuffixOrPrefixMismatch, SourceForbidsFactor,
                 LetterCoincidence, ForcedExtension, GapPatternAbsent, BoundedCaseExhausted,
                 ContextExtension>;

bool is_refuted(const RefutationReason& r);

struct InclusionRefutation {
  RefutationReason reason;
  std::string label; // "a.i", "a.src", "a.ii", "a.iii", "a.iv" or "" when unrefuted
  /// Extension cases examined, also when unrefuted (for reports).
  std::vector<ExtensionCase> cases;
};

/// Case order: trivial; ab illegal; u not a prefix of any image (a.ii); t
/// not a suffix of any image (a.iii); then (depth >= 1) every embedding
/// v·m(ab)·w̃ = m(e c e′) is examined with A (v or w̃ empty), D (e ≡ c or
/// e′ ≡ c with cc illegal), E (e c e′ illegal), B (w̃ not a prefix), C (v
/// not a suffix), and (depth >= 2) F, G strict then F′, G′ general.
/// Depths above 2 behave like 2.
InclusionRefutation refute_inclusion(const Morphism& m, const InclusionWitness& w,
                                     const SourceModel& source, std::size_t depth = 2);

/// Trivial when a ≡ c or b ≡ c; GapPatternAbsent when evidence covers the
/// class pattern b·α·c·α·a; Unrefuted otherwise.
RefutationReason refute_interchange(const InterchangeWitness& w, const SourceModel& source,
                                    const std::vector<GapEvidence>& gap_evidence);

// ---------------------------------------------------------- bounded case

struct BoundedViolation {
  Word source_word;
  Violation violation;
};

struct BoundedCaseReport {
  std::size_t root_cap = 0;
  std::size_t max_source_length = 0;
  /// words_per_length[n] = legal source words of length n (index 0 unused).
  std::vector<std::uint64_t> words_per_length;
  std::uint64_t words_checked = 0;
  std::vector<BoundedViolation> violations; // first few only
  std::uint64_t violation_count = 0;

  bool passed() const { return violation_count == 0; }
};

/// Source length bound: max(floor(2·root_cap/k) + 2, cube bound, factor
/// bound), where the cube bound covers cubes whose root is an allowed
/// square root and the factor bound covers the longest forbidden target
/// factor. root_cap = 0 means 2·k.
std::size_t bounded_source_length(const Morphism& m, const AvoidanceSpec& target,
                                  std::size_t root_cap);

BoundedCaseReport bounded_case_check(const Morphism& m, const SourceModel& source,
                                     const AvoidanceSpec& target, std::size_t root_cap = 0);

// --------------------------------------------------------- certificates

struct InclusionEntry {
  InclusionWitness witness;
  InclusionRefutation refutation;
};

struct InterchangeEntry {
  InterchangeWitness witness;
  RefutationReason reason;
};

struct Obligation {
  std::string description;
  bool discharged = false;
  std::optional<GapEvidence> evidence;
};

struct TransferCertificate {
  std::string morphism_id;
  std::string morphism_text;
  AvoidanceSpec source;
  AvoidanceSpec target;
  std::vector<std::string> letter_names;
  std::size_t depth = 2;
  BoundedCaseReport bounded;
  std::vector<InclusionEntry> inclusions;
  /// Inclusions whose ab is illegal in the source.
  std::vector<InclusionWitness> source_excluded_inclusions;
  std::vector<InterchangeEntry> interchanges;
  std::vector<Obligation> obligations;
  bool complete = false;
};

struct VerifyOptions {
  std::size_t depth = 2;
  std::size_t root_cap = 0; // 0: 2·width
  std::vector<GapEvidence> gap_evidence;
  std::string morphism_id = "morphism";
};

/// Requires m uniform and injective on letters, a squarefree source, and a
/// target whose allowed square roots are at most root_cap; UsageError
/// otherwise. complete iff the bounded case passes and every witness is
/// refuted.
TransferCertificate verify_square_transfer(const Morphism& m, const SourceModel& source,
                                           const AvoidanceSpec& target,
                                           const VerifyOptions& opts = {});

// ------------------------------------------------------ gap patterns

/// Exact factor sets of m^ω(seed) for a uniform prolongable m.
class FixedPointFactors {
public:
  FixedPointFactors(Morphism m, Symbol seed);

  const Morphism& morphism() const noexcept { return m_; }
  Symbol seed() const noexcept { return seed_; }
  const std::set<Word>& factors(std::size_t n);
  bool contains(const Word& w);

private:
  Morphism m_;
  Symbol seed_;
  std::size_t k_;
  std::map<std::size_t, std::set<Word>> memo_;
};

enum class GapStrategy { SquareShortcut, FollowerSet, Window, Descent };
std::string to_string(GapStrategy s);

struct GapProof {
  GapPattern pattern;
  GapStrategy strategy = GapStrategy::FollowerSet;
  std::string detail;
  /// Descent: the closed family of patterns; Window: the window length.
  std::vector<GapPattern> family;
  std::size_t window = 0;
  std::size_t base_alpha = 0;

  GapEvidence evidence() const;
};

struct GapProofOptions {
  std::size_t base_bound = 12;
  std::size_t max_window = 6;
};

/// Tries, in order: the square shortcut (b = c or c = a in a squarefree
/// source), follower sets, a window argument over the source spec, and
/// descent over the exact factor sets of fp (if given). Descent needs a
/// morphism without inclusions; UsageError is thrown only if descent is
/// reached and that fails. nullopt means Unknown.
std::optional<GapProof> prove_gap_pattern_absence(const GapPattern& p,
                                                  const AvoidanceSpec& source,
                                                  FixedPointFactors* fp = nullptr,
                                                  const GapProofOptions& opts = {});

/// Desk-scale evidence: scans the first n symbols of m^ω(seed).
std::optional<GapEvidence> empirical_gap_evidence(const GapPattern& p, const Morphism& m,
                                                  Symbol seed, std::size_t n);

/// Gap patterns b·α·c·α·a needed by the nontrivial interchanges of m, each
/// with a proof from prove_gap_pattern_absence where one is found. Patterns
/// without a proof are listed in `unknown`.
struct GapEvidenceSet {
  std::vector<GapProof> proofs;
  std::vector<GapPattern> unknown;

  std::vector<GapEvidence> evidence() const;
};

GapEvidenceSet prove_interchange_patterns(const Morphism& m, const SourceModel& source,
                                          FixedPointFactors* fp = nullptr,
                                          const GapProofOptions& opts = {});

} // namespace avoid
