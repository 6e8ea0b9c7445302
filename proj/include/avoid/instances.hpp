#pragma once

// Named instance data (morphisms, substitutions, specs, word sets, the
// inclusion case table) loaded from a directory, and the scenario runners
// that check the claims made about them.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "avoid/certificate.hpp"
#include "avoid/enumerate.hpp"
#include "avoid/morphism.hpp"
#include "avoid/spec.hpp"

namespace avoid {

/// One line of an inclusion case table: which extension case refutes the
/// inclusion m(ab) = t m(c) u at the given offset (context "-" for cases
/// decided without extension).
struct CaseRow {
  std::string morphism;
  std::string ab;
  std::string c;
  std::size_t offset = 0;
  std::string context; // e·c·e′ or "-"
  std::string label;

  friend auto operator<=>(const CaseRow&, const CaseRow&) = default;
};

std::vector<CaseRow> parse_case_table(std::string_view text);

/// Files by extension: .morphism, .substitution, .spec, .words, .table.
/// Entries are keyed by file stem.
class InstanceRegistry {
public:
  /// $AVOID_SCENARIO_DIR if set, else the directory configured at build time.
  static std::string default_directory();
  static InstanceRegistry load(const std::string& dir);

  const std::string& directory() const noexcept { return dir_; }

  const Morphism& morphism(const std::string& name) const;
  const Substitution& substitution(const std::string& name) const;
  const AvoidanceSpec& spec(const std::string& name) const;
  const std::vector<Word>& words(const std::string& name) const;
  const std::vector<CaseRow>& table(const std::string& name) const;

  std::vector<std::string> morphism_names() const;
  void replace_morphism(const std::string& name, Morphism m);

private:
  std::string dir_;
  std::map<std::string, Morphism> morphisms_;
  std::map<std::string, Substitution> substitutions_;
  std::map<std::string, AvoidanceSpec> specs_;
  std::map<std::string, std::vector<Word>> words_;
  std::map<std::string, std::vector<CaseRow>> tables_;
};

/// Built-in specs: "dekking" (binary, cubefree, square roots >= 4
/// forbidden), "fraenkel-simpson" (binary, squares 00 11 0101 only),
/// "ejs2" (binary, square roots >= 2 forbidden), "ejs3" (binary, cubefree,
/// square roots >= 3 forbidden).
std::optional<AvoidanceSpec> builtin_spec(const std::string& name);

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
  std::string claim; // the statement a failure contradicts
};

struct ScenarioReport {
  std::string name;
  Json inputs = Json::object();
  std::vector<Check> checks;
  Json artifacts = Json::object();

  bool passed() const;
  Json to_json() const;
  /// One line per check plus a summary line.
  std::string digest() const;
};

std::vector<std::string> scenario_names();

/// A single-symbol change to one image of a registry morphism.
struct Mutation {
  std::string morphism;
  Symbol letter = 0;
  std::size_t position = 0;
  Symbol from = 0, to = 0;

  std::string str() const;
};

/// Uniform over morphisms, letters, positions and replacement symbols,
/// driven by std::mt19937_64(seed).
Mutation random_mutation(const InstanceRegistry& registry, std::uint64_t seed);
InstanceRegistry apply_mutation(const InstanceRegistry& registry, const Mutation& m);

/// Runs one named scenario. Errors raised while running are recorded as a
/// failed check rather than thrown. UsageError for an unknown name.
ScenarioReport run_scenario(const std::string& name, const InstanceRegistry& registry);

} // namespace avoid
