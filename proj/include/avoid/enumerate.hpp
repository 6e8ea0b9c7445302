#pragma once

// Exact counting of spec-legal words, minimal forbidden factors, the factor
// automaton of a forbidden set and its growth rate.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "avoid/morphism.hpp"
#include "avoid/spec.hpp"

namespace avoid {

struct CountTable {
  AvoidanceSpec spec;
  std::vector<BigInt> counts; // counts[n] = legal words of length n

  /// "n,count" lines with a header row.
  std::string csv() const;
};

/// Worker count from AVOID_WORKERS, else 1.
unsigned default_workers();

/// Pruned depth-first count of legal words of each length 0..n_max.
/// workers = 0 uses default_workers().
CountTable count_avoiding(const AvoidanceSpec& spec, std::size_t n_max, unsigned workers = 0);

struct MinimalForbiddenSet {
  AvoidanceSpec spec;
  std::size_t max_length = 0;
  std::vector<Word> words; // sorted by length, then lexicographically

  /// One word per line.
  std::string str() const;
};

/// Every illegal word of length <= L whose two one-letter truncations are
/// legal.
MinimalForbiddenSet minimal_forbidden(const AvoidanceSpec& spec, std::size_t max_length);

/// Aho–Corasick automaton recognising words that avoid a factor set.
/// Complete over the alphabet; dead states are absorbing.
class FactorAutomaton {
public:
  FactorAutomaton(const std::vector<Word>& forbidden, unsigned alphabet_size);

  unsigned alphabet_size() const noexcept { return k_; }
  std::size_t states() const noexcept { return dead_.size(); }
  std::size_t live_states() const noexcept { return live_; }
  std::size_t start() const noexcept { return 0; }
  std::size_t next(std::size_t state, Symbol x) const { return delta_[state * k_ + x]; }
  bool dead(std::size_t state) const { return dead_[state] != 0; }

  /// True iff w contains no forbidden factor.
  bool accepts(const Word& w) const;
  /// Number of accepted words of each length 0..n_max.
  std::vector<BigInt> path_counts(std::size_t n_max) const;

private:
  unsigned k_;
  std::vector<std::size_t> delta_;
  std::vector<char> dead_;
  std::size_t live_ = 0;
};

struct GrowthEstimate {
  double eigenvalue = 0;
  std::size_t iterations = 0;
  double residual = 0;
  std::size_t states = 0;
  std::size_t live_states = 0;
};

/// Perron root of the live-state transition matrix M by power iteration on
/// M + I (the shift removes periodicity). Stops once successive estimates
/// differ by less than tol. An automaton without live states gives 0.
GrowthEstimate growth_rate(const FactorAutomaton& a, double tol = 1e-9,
                           std::size_t max_iterations = 10'000'000);

nlohmann::ordered_json to_json(const GrowthEstimate& g);

struct ExhaustResult {
  /// False when a legal word of length hard_cap exists.
  bool finite = false;
  std::size_t max_length = 0;
  Word witness; // lexicographically first legal word of maximal length
  std::uint64_t nodes = 0;
};

ExhaustResult exhaust_max_length(const AvoidanceSpec& spec, std::size_t hard_cap);

struct FamilyOptions {
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
  std::uint64_t samples = 64; // used when the family exceeds the cap
  std::uint64_t seed = 0;
};

struct FamilyReport {
  std::size_t word_length = 0;
  BigInt family_size;
  bool enumerated = false;
  std::uint64_t checked = 0;
  std::uint64_t verified_count = 0;
  std::size_t divisor = 0;
  /// family_size >= 2^(word_length / divisor), decided exactly.
  bool exponent_check = false;
  std::vector<std::string> failures; // first few offending words, summarised

  bool passed() const { return exponent_check && verified_count == checked; }
};

/// The family outer(sub(seed_word)): enumerated when at most
/// enumeration_cap words, sampled otherwise. Every produced word is checked
/// against target, and the family size against 2^(n/divisor).
FamilyReport lower_bound_family(const Substitution& sub, const Morphism& outer,
                                const Word& seed_word, const AvoidanceSpec& target,
                                std::size_t divisor, const FamilyOptions& opts = {});

nlohmann::ordered_json to_json(const FamilyReport& r);

} // namespace avoid
