#include "avoid/instances.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "avoid/scan.hpp"
#include "avoid/verify.hpp"

#ifndef AVOID_SCENARIO_DIR
#define AVOID_SCENARIO_DIR "scenarios"
#endif

namespace avoid {

namespace fs = std::filesystem;

// ------------------------------------------------------------- case table

std::vector<CaseRow> parse_case_table(std::string_view text) {
  std::vector<CaseRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);
    std::istringstream fields(line);
    std::vector<std::string> f;
    for (std::string tok; fields >> tok;)
      f.push_back(tok);
    if (f.empty())
      continue;
    if (f.size() != 6)
      throw ParseError(line_no, "expected: morphism ab c offset context case");
    CaseRow r{f[0], f[1], f[2], 0, f[4], f[5]};
    try {
      std::size_t used = 0;
      r.offset = std::stoul(f[3], &used);
      if (used != f[3].size())
        throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError(line_no, "bad offset '" + f[3] + "'");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

// --------------------------------------------------------------- registry

std::string InstanceRegistry::default_directory() {
  if (const char* env = std::getenv("AVOID_SCENARIO_DIR"); env && *env)
    return env;
  return AVOID_SCENARIO_DIR;
}

InstanceRegistry InstanceRegistry::load(const std::string& dir) {
  if (!fs::is_directory(dir))
    throw UsageError("instance directory not found: " + dir);
  InstanceRegistry reg;
  reg.dir_ = dir;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file())
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const fs::path& p : files) {
    const std::string stem = p.stem().string();
    const std::string ext = p.extension().string();
    auto wrap = [&](auto&& fn) {
      try {
        fn();
      } catch (const ParseError& e) {
        throw ParseError(e.line(), p.filename().string() + ": " + e.what());
      }
    };
    if (ext == ".morphism")
      wrap([&] { reg.morphisms_.emplace(stem, Morphism::load(p.string())); });
    else if (ext == ".substitution")
      wrap([&] { reg.substitutions_.emplace(stem, Substitution::load(p.string())); });
    else if (ext == ".spec")
      wrap([&] { reg.specs_.emplace(stem, load_spec(p.string())); });
    else if (ext == ".words")
      wrap([&] { reg.words_.emplace(stem, parse_word_list(read_file(p.string()), 10)); });
    else if (ext == ".table")
      wrap([&] { reg.tables_.emplace(stem, parse_case_table(read_file(p.string()))); });
  }
  return reg;
}

namespace {

template <class Map>
const auto& lookup(const Map& map, const std::string& name, const char* kind) {
  auto it = map.find(name);
  if (it == map.end())
    throw UsageError(std::string("no ") + kind + " named '" + name + "' in the registry");
  return it->second;
}

} // namespace

const Morphism& InstanceRegistry::morphism(const std::string& name) const {
  return lookup(morphisms_, name, "morphism");
}
const Substitution& InstanceRegistry::substitution(const std::string& name) const {
  return lookup(substitutions_, name, "substitution");
}
const AvoidanceSpec& InstanceRegistry::spec(const std::string& name) const {
  return lookup(specs_, name, "spec");
}
const std::vector<Word>& InstanceRegistry::words(const std::string& name) const {
  return lookup(words_, name, "word list");
}
const std::vector<CaseRow>& InstanceRegistry::table(const std::string& name) const {
  return lookup(tables_, name, "case table");
}

std::vector<std::string> InstanceRegistry::morphism_names() const {
  std::vector<std::string> out;
  for (const auto& [name, m] : morphisms_)
    out.push_back(name);
  return out;
}

void InstanceRegistry::replace_morphism(const std::string& name, Morphism m) {
  lookup(morphisms_, name, "morphism");
  morphisms_[name] = std::move(m);
}

std::optional<AvoidanceSpec> builtin_spec(const std::string& name) {
  AvoidanceSpec s;
  s.alphabet_size = 2;
  if (name == "dekking") {
    s.square_policy = ForbidRootsAtLeast{4};
    s.cubefree = true;
  } else if (name == "fraenkel-simpson") {
    s.square_policy = SquareWhitelist{{Word::parse("00"), Word::parse("11"), Word::parse("0101")}};
  } else if (name == "ejs2") {
    s.square_policy = ForbidRootsAtLeast{2};
  } else if (name == "ejs3") {
    s.square_policy = ForbidRootsAtLeast{3};
    s.cubefree = true;
  } else {
    return std::nullopt;
  }
  return s;
}

// ---------------------------------------------------------------- reports

bool ScenarioReport::passed() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

Json ScenarioReport::to_json() const {
  Json cs = Json::array();
  for (const Check& c : checks)
    cs.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}, {"claim", c.claim}});
  return Json{{"scenario", name}, {"passed", passed()}, {"inputs", inputs}, {"checks", cs},
              {"artifacts", artifacts}};
}

std::string ScenarioReport::digest() const {
  std::ostringstream out;
  std::size_t ok = 0;
  for (const Check& c : checks) {
    ok += c.passed;
    out << (c.passed ? "  pass  " : "  FAIL  ") << c.name;
    if (!c.detail.empty())
      out << ": " << c.detail;
    if (!c.passed && !c.claim.empty())
      out << "\n        contradicts: " << c.claim;
    out << '\n';
  }
  return name + ": " + (passed() ? "pass" : "FAIL") + " (" + std::to_string(ok) + "/" +
         std::to_string(checks.size()) + " checks)\n" + out.str();
}

// -------------------------------------------------------------- scenarios

namespace {

constexpr std::size_t kScanLength = 100'000;

const char* const kSquarefreeHPrefix = "03102010230203010201031023010203102010230201031023";
const char* const kBinaryGHPrefix =
    "010011011010010110010011011001010011010110010011011001011010";
const char* const kShuffleFPrefix = "001001110001001110110110001";
const char* const kShuffleXPrefix = "010100011101010011";
const char* const kShuffleYPrefix = "001101010110001010";

const std::vector<unsigned> kCubefreeRoots3Counts = {1,  2,   4,   6,   10,  16,  24,  36,  52,
                                              72, 90,  116, 142, 178, 220, 264, 332, 414};
const std::vector<unsigned> kWhitelistCounts = {1,  2,   4,   8,   13,  22,  31,  46,  58, 78,
                                                99, 124, 144, 176, 198, 234, 262, 300, 351};

class Recorder {
public:
  explicit Recorder(ScenarioReport& r) : r_(r) {}

  bool operator()(std::string name, bool ok, std::string detail, std::string claim) {
    r_.checks.push_back({std::move(name), ok, std::move(detail), std::move(claim)});
    return ok;
  }

private:
  ScenarioReport& r_;
};

std::string mismatch(const std::string& got, const std::string& want) {
  return got == want ? got : "got " + got + ", expected " + want;
}

std::string join(const std::vector<std::string>& xs, const char* sep = ", ") {
  std::string s;
  for (const std::string& x : xs)
    s += (s.empty() ? "" : sep) + x;
  return s;
}

std::string summary(const TransferCertificate& c) {
  return std::to_string(c.inclusions.size()) + " inclusions, " +
         std::to_string(c.interchanges.size()) + " interchanges, bounded case " +
         std::to_string(c.bounded.words_checked) + " words up to length " +
         std::to_string(c.bounded.max_source_length) +
         (c.bounded.passed() ? "" : ", " + std::to_string(c.bounded.violation_count) +
                                        " violations");
}

std::string check_text(const SpecCheck& c) {
  if (c.ok())
    return "no violation";
  const Violation& v = *c.violation;
  return to_string(v.kind) + " " + v.factor.str() + " at " + std::to_string(v.position);
}

void verify_instance(Recorder& check, ScenarioReport& rep, const std::string& id,
                     const Morphism& m, const SourceModel& source, const AvoidanceSpec& target,
                     const std::vector<GapEvidence>& evidence, const std::string& claim,
                     TransferCertificate& out) {
  VerifyOptions opts;
  opts.morphism_id = id;
  opts.gap_evidence = evidence;
  out = verify_square_transfer(m, source, target, opts);
  rep.artifacts["certificates"][id] = to_json(out);
  check(id + " certificate complete", out.complete, summary(out), claim);
}

bool has_inclusion(const TransferCertificate& c, Symbol a, Symbol b, Symbol x,
                   const std::string& t, const std::string& u) {
  return std::any_of(c.inclusions.begin(), c.inclusions.end(), [&](const InclusionEntry& e) {
    const InclusionWitness& w = e.witness;
    return w.a == a && w.b == b && w.c == x && w.t.str() == t && w.u.str() == u &&
           is_refuted(e.refutation.reason);
  });
}

void scenario_dekking_verify(const InstanceRegistry& reg, ScenarioReport& rep, Recorder& check) {
  const Morphism& h = reg.morphism("dekking_h");
  const Morphism& g = reg.morphism("dekking_g");
  const AvoidanceSpec& source = reg.spec("dekking_source");
  const AvoidanceSpec& target = reg.spec("dekking_target");
  rep.inputs = Json{{"h", h.str()}, {"g", g.str()}, {"source", source.str()}, {"target", target.str()}};

  Word hw = fixed_point_prefix(h, 0, kScanLength);
  check("h fixed point prefix", hw.prefix(50).str() == kSquarefreeHPrefix,
        mismatch(hw.prefix(50).str(), kSquarefreeHPrefix),
        "the fixed point of h starts with the displayed 50 symbols");
  check("h fixed point prefix satisfies the source spec", satisfies_spec(hw, source).ok(),
        check_text(satisfies_spec(hw, source)) + " in " + std::to_string(hw.size()) + " symbols",
        "the fixed point of h avoids squares and the forbidden factors");

  TransferCertificate ch;
  verify_instance(check, rep, "h", h, SourceModel(source), reg.spec("dekking_h_target"), {},
                  "h maps squarefree words avoiding the forbidden factors to squarefree words",
                  ch);
  check("h witness inventory",
        ch.inclusions.size() == 1 && ch.interchanges.empty() &&
            has_inclusion(ch, 3, 1, 2, "020301", "0102") &&
            ch.inclusions[0].refutation.label == "a.ii",
        std::to_string(ch.inclusions.size()) + " inclusion(s), " +
            std::to_string(ch.interchanges.size()) + " interchange(s)",
        "h(31) = 020301 h(2) 0102 is the only inclusion, refuted since 0102 starts no image; "
        "h has no interchanges");

  // The bounded case at source length 5 under the short and the full
  // forbidden lists; both counts are recorded.
  TransferCertificate ch4;
  verify_instance(check, rep, "h-short-source", h, SourceModel(reg.spec("dekking_h_source")),
                  reg.spec("dekking_h_target"), {},
                  "h also transfers squarefreeness from the source without 231 and 10302", ch4);
  auto at5 = [](const TransferCertificate& c) {
    return c.bounded.words_per_length.size() > 5 ? c.bounded.words_per_length[5] : 0;
  };
  rep.artifacts["length5_source_words"] =
      Json{{"without_231_10302", at5(ch4)}, {"full_source", at5(ch)}};

  std::size_t illegal = 0, total = 0;
  {
    // 1·α·3·α·2 for all α with |α| <= 8.
    std::vector<Symbol> alpha;
    std::function<void()> rec = [&] {
      Word w(4);
      w.push_back(1);
      for (Symbol x : alpha)
        w.push_back(x);
      w.push_back(3);
      for (Symbol x : alpha)
        w.push_back(x);
      w.push_back(2);
      ++total;
      illegal += !satisfies_spec(w, source).ok();
      if (alpha.size() == 8)
        return;
      for (Symbol x = 0; x < 4; ++x) {
        alpha.push_back(x);
        rec();
        alpha.pop_back();
      }
    };
    rec();
  }
  check("1α3α2 instances with |α| <= 8 are illegal", illegal == total,
        std::to_string(illegal) + "/" + std::to_string(total),
        "every word 1α3α2 contains a square or a forbidden factor");

  GapEvidenceSet gaps = prove_interchange_patterns(g, SourceModel(source));
  Json proofs = Json::array();
  for (const GapProof& p : gaps.proofs)
    proofs.push_back(to_json(p));
  rep.artifacts["gap_proofs"] = proofs;
  check("gap patterns for g proven", gaps.unknown.empty() && gaps.proofs.size() == 1 &&
                                         gaps.proofs[0].pattern == GapPattern{1, 3, 2},
        std::to_string(gaps.proofs.size()) + " proven, " + std::to_string(gaps.unknown.size()) +
            " unknown",
        "the source language has no factor 1α3α2");

  TransferCertificate cg;
  verify_instance(check, rep, "g", g, SourceModel(source), target, gaps.evidence(),
                  "g maps the source language to cubefree words without squares of period 4 "
                  "or more",
                  cg);
  check("g witness inventory",
        cg.inclusions.size() == 3 && has_inclusion(cg, 0, 1, 3, "010", "110") &&
            has_inclusion(cg, 1, 0, 2, "01", "0011") && has_inclusion(cg, 2, 3, 1, "0110", "10") &&
            cg.interchanges.size() == 1 && cg.interchanges[0].witness.a == 2 &&
            cg.interchanges[0].witness.b == 1 && cg.interchanges[0].witness.c == 3 &&
            cg.interchanges[0].witness.s.str() == "0110" &&
            cg.interchanges[0].witness.t.str() == "01" &&
            cg.interchanges[0].witness.u.str() == "0101" &&
            cg.interchanges[0].witness.v.str() == "10",
        std::to_string(cg.inclusions.size()) + " inclusion(s), " +
            std::to_string(cg.interchanges.size()) + " interchange(s)",
        "g has exactly the inclusions g(01)=010g(3)110, g(10)=01g(2)0011, g(23)=0110g(1)10 "
        "and the interchange (2,1,3) with s=0110, t=01, u=0101, v=10");

  Word gw = apply(g, hw.prefix(kScanLength / 6 + 1)).prefix(kScanLength);
  check("g(h fixed point) prefix", gw.prefix(60).str() == kBinaryGHPrefix,
        mismatch(gw.prefix(60).str(), kBinaryGHPrefix),
        "g applied to the fixed point of h starts with the displayed 60 symbols");
  SpecCheck scan = satisfies_spec(gw, target);
  check("g(h fixed point) prefix satisfies the target", scan.ok(),
        check_text(scan) + " in " + std::to_string(gw.size()) + " symbols",
        "g(h^ω(0)) is cubefree and avoids squares of period 4 or more");

  HatExpansion hx = expand_hats(reg.substitution("dekking_sub"));
  TransferCertificate chx;
  verify_instance(check, rep, "h-hat", hx.morphism, SourceModel(source, hx),
                  reg.spec("dekking_h_target"), {},
                  "the substitution with two images for 1 still maps the source language to "
                  "squarefree words",
                  chx);
}

void scenario_dekking_motivation(const InstanceRegistry& reg, ScenarioReport& rep,
                                 Recorder& check) {
  const Morphism& g = reg.morphism("dekking_g");
  const AvoidanceSpec& source = reg.spec("dekking_source");
  const AvoidanceSpec& target = reg.spec("dekking_target");
  rep.inputs = Json{{"g", g.str()}, {"source", source.str()}, {"target", target.str()}};
  const std::vector<std::pair<std::string, std::vector<std::string>>> cases = {
      {"12", {"01100110", "11001100", "10011001"}},
      {"13", {"01100110"}},
      {"21", {"010101"}},
      {"32", {"10011001"}},
      {"231", {"1001011010010110"}},
      {"10302", {"100100110110100100110110"}},
  };
  for (const auto& [src, reps] : cases) {
    Word w = Word::parse(src, 4);
    Word img = apply(g, w);
    bool forbidden = std::find(source.forbidden_factors.begin(), source.forbidden_factors.end(),
                               w) != source.forbidden_factors.end();
    check(src + " is forbidden in the source", forbidden, "",
          src + " is on the forbidden list");
    for (const std::string& r : reps) {
      Word f = Word::parse(r, 2);
      bool inside = contains_factor(img, f);
      bool bad = !satisfies_spec(f, target).ok();
      check("g(" + src + ") contains " + r, inside && bad,
            "g(" + src + ") = " + img.str() + (bad ? "" : "; " + r + " is allowed by the target"),
            "g(" + src + ") contains the repetition " + r);
    }
  }
}

void scenario_fs_verify(const InstanceRegistry& reg, ScenarioReport& rep, Recorder& check) {
  const Morphism& h = reg.morphism("fs_h");
  const Morphism& g = reg.morphism("fs_g");
  const AvoidanceSpec& hsrc = reg.spec("fs_h_source");
  const AvoidanceSpec& gsrc = reg.spec("fs_g_source");
  const AvoidanceSpec& target = reg.spec("fs_target");
  rep.inputs = Json{{"h", h.str()},         {"g", g.str()},          {"h_source", hsrc.str()},
                    {"g_source", gsrc.str()}, {"target", target.str()}};

  TransferCertificate ch;
  verify_instance(check, rep, "h", h, SourceModel(hsrc), reg.spec("fs_h_target"), {},
                  "h maps squarefree words avoiding 02 03 04 14 20 30 41 to squarefree words", ch);
  check("h witness inventory",
        ch.inclusions.size() == 1 && ch.interchanges.empty() &&
            has_inclusion(ch, 3, 2, 0, "0123212343234", "01232101234"),
        std::to_string(ch.inclusions.size()) + " inclusion(s), " +
            std::to_string(ch.interchanges.size()) + " interchange(s)",
        "h(32) = 0123212343234 h(0) 01232101234 is the only inclusion and there are no "
        "interchanges");

  TransferCertificate cg;
  verify_instance(check, rep, "g", g, SourceModel(gsrc), target, {},
                  "g maps the source language to binary words whose only squares are 00, 11 "
                  "and 0101",
                  cg);
  std::vector<std::string> special;
  for (const InclusionEntry& e : cg.inclusions) {
    std::string ab = std::to_string(e.witness.a) + std::to_string(e.witness.b);
    if ((ab == "43" || ab == "34" || ab == "01" || ab == "10") &&
        std::holds_alternative<ContextExtension>(e.refutation.reason))
      special.push_back(ab);
  }
  check("inclusions inside g(434010) refuted by context extension", special.size() == 4,
        join(special), "the four inclusions met inside g(434010) need a context argument");

  Word w434010 = apply(g, Word::parse("434010", 5));
  std::string want = "1100" + std::string("01110010110001") + "01110010110001" + "1100";
  check("g(434010) identity", w434010.str() == want, mismatch(w434010.str(), want),
        "g(434010) = 1100 (01110010110001)^2 1100");
  check("434010 is forbidden in the source of g", !satisfies_spec(Word::parse("434010", 5), gsrc).ok(),
        "", "434010 has to be excluded from the source language");

  Word hw = fixed_point_prefix(h, 0, kScanLength / 6 + 1);
  SpecCheck hs = satisfies_spec(hw, gsrc);
  check("h fixed point prefix satisfies the source of g", hs.ok(),
        check_text(hs) + " in " + std::to_string(hw.size()) + " symbols",
        "the fixed point of h is squarefree and avoids the forbidden factors");
  Word gw = apply(g, hw).prefix(kScanLength);
  SpecCheck gs = satisfies_spec(gw, target);
  check("g(h fixed point) prefix satisfies the whitelist", gs.ok(),
        check_text(gs) + " in " + std::to_string(gw.size()) + " symbols",
        "the only squares in g(h^ω(0)) are 00, 11 and 0101");

  HatExpansion hx = expand_hats(reg.substitution("fs_sub"));
  SourceModel hsm(gsrc, hx);
  GapEvidenceSet gaps = prove_interchange_patterns(hx.morphism, hsm);
  Json proofs = Json::array();
  std::vector<std::string> names;
  for (const GapProof& p : gaps.proofs) {
    proofs.push_back(to_json(p));
    names.push_back(to_string(p.pattern));
  }
  rep.artifacts["gap_proofs"] = proofs;
  std::sort(names.begin(), names.end());
  check("gap patterns for the substitution proven",
        gaps.unknown.empty() && names == std::vector<std::string>{"1α0α2", "3α2α0", "4α0α2"},
        join(names), "the source language has no factor 1α0α2, 4α0α2 or 3α2α0");
  TransferCertificate chx;
  verify_instance(check, rep, "h-hat", hx.morphism, hsm, reg.spec("fs_h_target"),
                  gaps.evidence(),
                  "the substitution with two images for 0 maps the source language to "
                  "squarefree words",
                  chx);
}

void scenario_pu_shuffle(const InstanceRegistry& reg, ScenarioReport& rep, Recorder& check) {
  const Morphism& f = reg.morphism("pu_f");
  const Morphism& h = reg.morphism("pu_h");
  const Morphism& g1 = reg.morphism("pu_g1");
  const Morphism& g2 = reg.morphism("pu_g2");
  rep.inputs = Json{{"f", f.str()}, {"h", h.str()}, {"g1", g1.str()}, {"g2", g2.str()}};

  const std::pair<const char*, Symbol> pairs[] = {{"00", 0}, {"10", 1}, {"01", 2}, {"11", 3}};
  for (const auto& [pair, letter] : pairs) {
    std::size_t bad = 0;
    std::string first_bad;
    for (std::size_t n = 0; n <= 6; ++n) {
      Word lhs = power(f, n + 1, Word::parse(pair, 2));
      Word hn = power(h, n, Word({letter}, 4));
      Word rhs = perfect_shuffle(apply(g2, hn), apply(g1, hn));
      if (lhs != rhs) {
        ++bad;
        if (first_bad.empty())
          first_bad = "fails at n=" + std::to_string(n);
      }
    }
    check(std::string("shuffle identity for f(") + pair + ")", bad == 0,
          bad ? first_bad : "n = 0..6",
          std::string("f^{n+1}(") + pair + ") = g2(h^n(" + std::to_string(letter) +
              ")) shuffled with g1(h^n(" + std::to_string(letter) + "))");
  }

  Word fw = fixed_point_prefix(f, 0, 2 * 6561);
  check("f fixed point prefix", fw.prefix(27).str() == kShuffleFPrefix,
        mismatch(fw.prefix(27).str(), kShuffleFPrefix),
        "the fixed point of f starts with the displayed 27 symbols");
  std::size_t largest = 0;
  for (std::size_t n = 0; n <= 8; ++n) {
    Word fn = power(f, n, Word({0}, 2));
    if (fw.prefix(fn.size()) != fn || fw.slice(fn.size(), fn.size()) != fn)
      break;
    largest = n;
  }
  check("f fixed point begins with f^n(0) f^n(0)", largest == 8,
        "holds for n <= " + std::to_string(largest),
        "the fixed point of f has arbitrarily large squares");

  Word hw = fixed_point_prefix(h, 0, kScanLength / 3 + 1);
  Word x = apply(g2, hw).prefix(kScanLength);
  Word y = apply(g1, hw).prefix(kScanLength);
  check("x prefix", x.prefix(18).str() == kShuffleXPrefix,
        mismatch(x.prefix(18).str(), kShuffleXPrefix), "x = g2(h^ω(0)) starts 010100011101010011");
  check("y prefix", y.prefix(18).str() == kShuffleYPrefix,
        mismatch(y.prefix(18).str(), kShuffleYPrefix), "y = g1(h^ω(0)) starts 001101010110001010");
  check("shuffle of x and y is f's fixed point",
        perfect_shuffle(x.prefix(fw.size() / 2), y.prefix(fw.size() / 2)) == fw, "",
        "f^ω(0) = x shuffled with y");
  std::size_t rx = max_square_root(x), ry = max_square_root(y);
  check("x has no square of period 4 or more", rx <= 3, "largest period " + std::to_string(rx),
        "x avoids squares ww with |w| >= 4");
  check("y has no square of period 4 or more", ry <= 3, "largest period " + std::to_string(ry),
        "y avoids squares ww with |w| >= 4");
}

std::string letters(const std::vector<Symbol>& xs) {
  std::string s;
  for (Symbol x : xs)
    s += static_cast<char>('0' + x);
  return s;
}

std::vector<CaseRow> generated_rows(const std::string& id, const TransferCertificate& c) {
  std::vector<CaseRow> rows;
  for (const InclusionEntry& e : c.inclusions) {
    const InclusionWitness& w = e.witness;
    std::string ab = letters({w.a, w.b});
    std::string cc = letters({w.c});
    if (const auto* ext = std::get_if<ContextExtension>(&e.refutation.reason)) {
      for (const ExtensionCase& ec : ext->cases)
        rows.push_back({id, ab, cc, w.offset, letters({ec.e, w.c, ec.e2}), ec.label});
    } else {
      rows.push_back({id, ab, cc, w.offset, "-", e.refutation.label.empty() ? "unrefuted"
                                                                           : e.refutation.label});
    }
  }
  return rows;
}

std::string row_text(const CaseRow& r) {
  return r.morphism + "(" + r.ab + ")/" + r.c + "@" + std::to_string(r.offset) + " " + r.context +
         " " + r.label;
}

void scenario_pu_patterns(const InstanceRegistry& reg, ScenarioReport& rep, Recorder& check) {
  const Morphism& h = reg.morphism("pu_h");
  const AvoidanceSpec& source = reg.spec("pu_source");
  const AvoidanceSpec& target = reg.spec("pu_target");
  const std::vector<Word>& set_a = reg.words("set_A");
  rep.inputs = Json{{"h", h.str()}, {"source", source.str()}, {"target", target.str()}};

  auto incl = find_inclusions(h);
  auto inter = find_interchanges(h);
  check("h has no inclusions or interchanges", incl.empty() && inter.empty(),
        std::to_string(incl.size()) + " inclusion(s), " + std::to_string(inter.size()) +
            " interchange(s)",
        "h has no inclusions or interchanges");

  Word hw = fixed_point_prefix(h, 0, kScanLength);
  std::string hits;
  for (const Word& a : set_a)
    if (contains_factor(hw, a))
      hits += (hits.empty() ? "" : " ") + a.str();
  check("h fixed point prefix avoids the 16 forbidden triples", set_a.size() == 16 && hits.empty(),
        hits.empty() ? std::to_string(set_a.size()) + " triples absent" : "found " + hits,
        "the fixed point of h avoids every word of the set of 16 triples");
  SpecCheck sq = satisfies_spec(hw, source);
  check("h fixed point prefix satisfies the source spec", sq.ok(), check_text(sq),
        "the fixed point of h is squarefree");

  FixedPointFactors fp(h, 0);
  std::vector<GapEvidence> evidence;
  Json proofs = Json::array();
  for (GapPattern p : {GapPattern{0, 1, 3}, {1, 0, 2}, {2, 3, 1}, {3, 2, 0}}) {
    auto emp = empirical_gap_evidence(p, h, 0, kScanLength);
    check(to_string(p) + " absent from the fixed point prefix", emp.has_value(), "",
          "the fixed point of h avoids " + to_string(p));
    auto proof = prove_gap_pattern_absence(p, source, &fp);
    check(to_string(p) + " absence proven", proof.has_value(),
          proof ? to_string(proof->strategy) + ": " + proof->detail : "no proof found",
          "the fixed point of h avoids " + to_string(p));
    if (proof) {
      proofs.push_back(to_json(*proof));
      evidence.push_back(proof->evidence());
    }
  }
  rep.artifacts["gap_proofs"] = proofs;

  std::vector<CaseRow> rows;
  for (const std::string id : {"g1", "g2"}) {
    TransferCertificate c;
    verify_instance(check, rep, id, reg.morphism("pu_" + id), SourceModel(source), target,
                    evidence, id + " maps the source language to words without squares ww, |w| >= 4",
                    c);
    std::vector<std::string> triples;
    for (const InterchangeEntry& e : c.interchanges)
      triples.push_back(letters({e.witness.a, e.witness.b, e.witness.c}));
    triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
    if (id == std::string("g1"))
      check("g1 interchange triples", triples == std::vector<std::string>{"032", "123", "210", "301"},
            join(triples), "g1's interchanges are (0,3,2), (1,2,3), (2,1,0), (3,0,1)");
    else
      rep.artifacts["g2_interchange_triples"] = triples;
    auto more = generated_rows(id, c);
    rows.insert(rows.end(), more.begin(), more.end());
  }

  std::set<CaseRow> got(rows.begin(), rows.end());
  const std::vector<CaseRow>& table = reg.table("inclusion_cases");
  std::set<CaseRow> want(table.begin(), table.end());
  std::vector<std::string> missing, extra;
  for (const CaseRow& r : want)
    if (!got.count(r))
      missing.push_back(row_text(r));
  for (const CaseRow& r : got)
    if (!want.count(r))
      extra.push_back(row_text(r));
  rep.artifacts["case_rows"] = Json{{"expected", want.size()}, {"generated", got.size()}};
  check("inclusion case table reproduced", missing.empty() && extra.empty(),
        std::to_string(want.size()) + " rows" +
            (missing.empty() ? "" : "; missing " + join(missing, "; ")) +
            (extra.empty() ? "" : "; unexpected " + join(extra, "; ")),
        "each inclusion of g1 and g2 is refuted by the tabulated case");
}

std::string counts_text(const std::vector<BigInt>& xs, std::size_t upto) {
  std::string s;
  for (std::size_t i = 0; i <= upto && i < xs.size(); ++i)
    s += (i ? "," : "") + xs[i].str();
  return s;
}

bool prefix_matches(const std::vector<BigInt>& got, const std::vector<unsigned>& want) {
  if (got.size() < want.size())
    return false;
  for (std::size_t i = 0; i < want.size(); ++i)
    if (got[i] != want[i])
      return false;
  return true;
}

void scenario_counting(const InstanceRegistry& reg, ScenarioReport& rep, Recorder& check) {
  const AvoidanceSpec& dk = reg.spec("dekking_target");
  const AvoidanceSpec& ws = reg.spec("fs_target");
  rep.inputs = Json{{"cubefree_spec", dk.str()}, {"whitelist_spec", ws.str()}};

  struct Family {
    const char* name;
    const AvoidanceSpec* spec;
    const std::vector<unsigned>* counts;
    std::size_t set_size;
    const char* first;
    const char* last;
    double growth;
    const char* sub;
    const char* h;
    const char* g;
    std::size_t words;
    std::size_t length;
    std::size_t divisor;
  };
  const Family families[] = {
      {"cubefree", &dk, &kCubefreeRoots3Counts, 90, "000", "11011001001101100100", 1.178,
       "dekking_sub", "dekking_h", "dekking_g", 4, 600, 300},
      {"whitelist", &ws, &kWhitelistCounts, 65, "0000", "1110001011100010", 1.135, "fs_sub",
       "fs_h", "fs_g", 16, 3456, 1152},
  };
  for (const Family& fam : families) {
    const std::string n = fam.name;
    CountTable t = count_avoiding(*fam.spec, 20);
    rep.artifacts[n]["counts"] = counts_text(t.counts, 20);
    check(n + " counts", prefix_matches(t.counts, *fam.counts),
          counts_text(t.counts, fam.counts->size() - 1),
          "the number of legal binary words of each length matches the table");

    MinimalForbiddenSet mf = minimal_forbidden(*fam.spec, 20);
    bool first = !mf.words.empty() && mf.words.front().str() == fam.first;
    bool last = !mf.words.empty() && mf.words.back().str() == fam.last;
    rep.artifacts[n]["minimal_forbidden_size"] = mf.words.size();
    check(n + " minimal forbidden words up to length 20",
          mf.words.size() == fam.set_size && first && last,
          std::to_string(mf.words.size()) + " words from " +
              (mf.words.empty() ? "-" : mf.words.front().str()) + " to " +
              (mf.words.empty() ? "-" : mf.words.back().str()),
          "there are " + std::to_string(fam.set_size) + " minimal forbidden words from " +
              fam.first + " to " + fam.last);

    FactorAutomaton a(mf.words, 2);
    std::vector<BigInt> paths = a.path_counts(20);
    check(n + " automaton agrees with the exact counts", paths == t.counts,
          counts_text(paths, 20), "words of length <= 20 avoid the set iff they are legal");
    GrowthEstimate ge = growth_rate(a, 1e-9);
    rep.artifacts[n]["growth"] = to_json(ge);
    check(n + " growth rate", std::abs(ge.eigenvalue - fam.growth) <= 0.005,
          std::to_string(ge.eigenvalue),
          "the dominant root is about " + std::to_string(fam.growth).substr(0, 5));

    const Morphism& h = reg.morphism(fam.h);
    FamilyReport fr = lower_bound_family(reg.substitution(fam.sub), reg.morphism(fam.g),
                                         h.image(0), *fam.spec, fam.divisor);
    rep.artifacts[n]["family"] = to_json(fr);
    check(n + " family", fr.passed() && fr.family_size == fam.words && fr.word_length == fam.length,
          fr.family_size.str() + " words of length " + std::to_string(fr.word_length) + ", " +
              std::to_string(fr.verified_count) + " verified",
          std::to_string(fam.words) + " words of length " + std::to_string(fam.length) +
              " all satisfy the spec, and " + std::to_string(fam.words) + " >= 2^(" +
              std::to_string(fam.length) + "/" + std::to_string(fam.divisor) + ")");
  }

  AvoidanceSpec runs;
  runs.alphabet_size = 2;
  runs.forbidden_factors = {Word::parse("000"), Word::parse("111")};
  CountTable rt = count_avoiding(runs, 12);
  bool fib = true;
  for (std::size_t i = 3; i < rt.counts.size(); ++i)
    fib = fib && rt.counts[i] == rt.counts[i - 1] + rt.counts[i - 2];
  check("words avoiding 000 and 111 follow the Fibonacci recurrence", fib,
        counts_text(rt.counts, 12), "G'_n = G'_{n-1} + G'_{n-2}");
  GrowthEstimate golden = growth_rate(FactorAutomaton(runs.forbidden_factors, 2), 1e-12);
  check("growth rate without 000 and 111", std::abs(golden.eigenvalue - 1.6180339887) < 1e-5,
        std::to_string(golden.eigenvalue), "the growth rate is the largest zero of x^2 - x - 1");
}

using ScenarioFn = void (*)(const InstanceRegistry&, ScenarioReport&, Recorder&);

const std::vector<std::pair<std::string, ScenarioFn>>& scenarios() {
  static const std::vector<std::pair<std::string, ScenarioFn>> table = {
      {"dekking-verify", scenario_dekking_verify},
      {"dekking-forbidden-motivation", scenario_dekking_motivation},
      {"fs-verify", scenario_fs_verify},
      {"pu-shuffle", scenario_pu_shuffle},
      {"pu-lemmas", scenario_pu_patterns},
      {"counting", scenario_counting},
  };
  return table;
}

} // namespace

std::vector<std::string> scenario_names() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : scenarios())
    out.push_back(name);
  return out;
}

ScenarioReport run_scenario(const std::string& name, const InstanceRegistry& registry) {
  for (const auto& [n, fn] : scenarios()) {
    if (n != name)
      continue;
    ScenarioReport rep;
    rep.name = name;
    Recorder check(rep);
    try {
      fn(registry, rep, check);
    } catch (const std::exception& e) {
      check("scenario ran to completion", false, e.what(),
            "the registry data is well formed for this scenario");
    }
    return rep;
  }
  throw UsageError("unknown scenario '" + name + "'");
}

std::string Mutation::str() const {
  return morphism + ": image of " + std::to_string(letter) + ", position " +
         std::to_string(position) + ", " + std::to_string(from) + " -> " + std::to_string(to);
}

Mutation random_mutation(const InstanceRegistry& registry, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  std::vector<std::string> names = registry.morphism_names();
  if (names.empty())
    throw UsageError("the registry has no morphisms");
  Mutation mu;
  mu.morphism = names[pick(names.size())];
  const Morphism& m = registry.morphism(mu.morphism);
  mu.letter = static_cast<Symbol>(pick(m.source_alphabet_size()));
  const Word& img = m.image(mu.letter);
  mu.position = pick(img.size());
  mu.from = img[mu.position];
  mu.to = static_cast<Symbol>((mu.from + 1 + pick(m.target_alphabet_size() - 1)) %
                              m.target_alphabet_size());
  return mu;
}

InstanceRegistry apply_mutation(const InstanceRegistry& registry, const Mutation& mu) {
  const Morphism& m = registry.morphism(mu.morphism);
  std::vector<Word> images = m.images();
  Word& img = images.at(mu.letter);
  std::vector<Symbol> syms(img.begin(), img.end());
  syms.at(mu.position) = mu.to;
  img = Word(syms, img.alphabet_size());
  InstanceRegistry out = registry;
  out.replace_morphism(mu.morphism, Morphism(std::move(images), m.source_alphabet_size(),
                                             m.target_alphabet_size()));
  return out;
}

} // namespace avoid
