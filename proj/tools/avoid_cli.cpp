// Command-line front end: generate, scan, verify, count, forbidden, growth,
// family, shuffle, scenario.
//
// Exit status: 0 success, 1 a check failed, 2 usage or input error.

#include <algorithm>
#include <cctype>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "avoid/certificate.hpp"
#include "avoid/enumerate.hpp"
#include "avoid/instances.hpp"
#include "avoid/scan.hpp"
#include "avoid/verify.hpp"

using namespace avoid;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

// Spec argument: a built-in alias or a spec file.
AvoidanceSpec resolve_spec(const std::string& arg) {
  if (auto s = builtin_spec(arg))
    return *s;
  return load_spec(arg);
}

Word read_word(const std::string& path) {
  std::string text = read_file(path);
  std::string digits;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch)))
      digits += ch;
  return Word::parse(digits);
}

GapPattern parse_gap_pattern(const std::string& s) {
  std::vector<Symbol> xs;
  std::stringstream in(s);
  for (std::string tok; std::getline(in, tok, ',');) {
    if (tok.size() != 1 || !std::isdigit(static_cast<unsigned char>(tok[0])))
      throw UsageError("gap pattern must look like b,c,a with single digits");
    xs.push_back(static_cast<Symbol>(tok[0] - '0'));
  }
  if (xs.size() != 3)
    throw UsageError("gap pattern must have three letters");
  return {xs[0], xs[1], xs[2]};
}

void check_format(const std::string& f, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (f == a)
      return;
  throw UsageError("unsupported --format '" + f + "' for this command");
}

struct Options {
  std::uint64_t seed = 0;
  std::string format;

  std::string morphism, substitution, source_morphism, source, target, id = "m";
  int seed_letter = 0;
  std::size_t length = 0, depth = 2, root_cap = 0;

  std::string word_file, factors_file, gap;
  std::size_t min_root = 1;
  bool cubes = false;

  std::string spec;
  std::size_t n_max = 0, max_len = 0;
  unsigned workers = 0;

  std::string forbidden_file;
  double tol = 1e-9;
  unsigned alphabet = 0;

  std::string sub, outer, seed_word;
  std::size_t divisor = 0;
  std::uint64_t samples = 64, cap = kDefaultEnumerationCap;

  std::string left, right;

  std::string scenario, scenario_dir;
  bool all = false;
};

int cmd_generate(const Options& o) {
  check_format(o.format, {"text", "json"});
  Morphism m = Morphism::load(o.morphism);
  Word w = fixed_point_prefix(m, static_cast<Symbol>(o.seed_letter), o.length);
  if (o.format == "json")
    std::cout << Json{{"seed_letter", o.seed_letter}, {"length", w.size()}, {"prefix", w.str()}}
                     .dump(2)
              << '\n';
  else
    std::cout << w.str() << '\n';
  return kOk;
}

int cmd_scan(const Options& o) {
  check_format(o.format, {"json", "text"});
  Word w = read_word(o.word_file);
  constexpr std::size_t kShown = 20;
  Json out{{"length", w.size()}};
  bool clean = true;

  auto squares = find_squares(w, o.min_root);
  Json sq = Json::array();
  for (std::size_t i = 0; i < squares.size() && i < kShown; ++i)
    sq.push_back(Json{{"position", squares[i].position}, {"root", squares[i].root_length}});
  out["squares"] = Json{{"min_root", o.min_root}, {"count", squares.size()}, {"first", sq}};
  out["max_square_root"] = max_square_root(w);
  clean = clean && squares.empty();

  if (o.cubes) {
    auto cubes = find_cubes(w);
    Json cu = Json::array();
    for (std::size_t i = 0; i < cubes.size() && i < kShown; ++i)
      cu.push_back(Json{{"position", cubes[i].position}, {"root", cubes[i].root_length}});
    out["cubes"] = Json{{"count", cubes.size()}, {"first", cu}};
    clean = clean && cubes.empty();
  }
  if (!o.factors_file.empty()) {
    Json fs = Json::array();
    for (const Word& f : parse_word_list(read_file(o.factors_file), kMaxTextAlphabet)) {
      std::size_t count = 0;
      std::optional<std::size_t> first;
      for (auto pos = find_factor(w, f); pos; pos = find_factor(w, f, *pos + 1)) {
        if (!first)
          first = pos;
        ++count;
      }
      fs.push_back(Json{{"factor", f.str()}, {"count", count}});
      fs.back()["first"] = first ? Json(*first) : Json(nullptr);
      clean = clean && count == 0;
    }
    out["factors"] = fs;
  }
  if (!o.gap.empty()) {
    GapPattern p = parse_gap_pattern(o.gap);
    Json g{{"pattern", to_string(p)}};
    if (auto occ = contains_gap_pattern(w, p)) {
      g["found"] = true;
      g["position"] = occ->first_pos;
      g["alpha_length"] = occ->alpha_length;
      clean = false;
    } else {
      g["found"] = false;
    }
    out["gap_pattern"] = g;
  }
  out["clean"] = clean;
  if (o.format == "json") {
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << "length " << w.size() << "\nsquares with root >= " << o.min_root << ": "
              << squares.size() << "\nlargest square root: " << out["max_square_root"] << '\n';
    if (out.contains("cubes"))
      std::cout << "cubes: " << out["cubes"]["count"] << '\n';
    if (out.contains("factors"))
      for (const auto& f : out["factors"])
        std::cout << "factor " << f["factor"].get<std::string>() << ": " << f["count"] << '\n';
    if (out.contains("gap_pattern"))
      std::cout << "gap pattern " << out["gap_pattern"]["pattern"].get<std::string>() << ": "
                << (out["gap_pattern"]["found"].get<bool>() ? "found" : "absent") << '\n';
  }
  return clean ? kOk : kCheckFailed;
}

int cmd_verify(const Options& o) {
  check_format(o.format, {"text", "json"});
  if (o.morphism.empty() == o.substitution.empty())
    throw UsageError("give exactly one of --morphism and --substitution");
  AvoidanceSpec source = resolve_spec(o.source);
  AvoidanceSpec target = resolve_spec(o.target);
  Morphism m;
  SourceModel model;
  if (!o.morphism.empty()) {
    m = Morphism::load(o.morphism);
    model = SourceModel(source);
  } else {
    HatExpansion hx = expand_hats(Substitution::load(o.substitution));
    m = hx.morphism;
    model = SourceModel(source, hx);
  }
  std::optional<FixedPointFactors> fp;
  if (!o.source_morphism.empty())
    fp.emplace(Morphism::load(o.source_morphism), static_cast<Symbol>(o.seed_letter));
  GapEvidenceSet gaps = prove_interchange_patterns(m, model, fp ? &*fp : nullptr);

  VerifyOptions opts;
  opts.depth = o.depth;
  opts.root_cap = o.root_cap;
  opts.morphism_id = o.id;
  opts.gap_evidence = gaps.evidence();
  TransferCertificate cert = verify_square_transfer(m, model, target, opts);
  if (o.format == "json") {
    Json j = to_json(cert);
    Json proofs = Json::array();
    for (const GapProof& p : gaps.proofs)
      proofs.push_back(to_json(p));
    j["gap_proofs"] = proofs;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << render_text(cert);
    for (const GapProof& p : gaps.proofs)
      std::cout << "gap proof " << to_string(p.pattern) << ": " << to_string(p.strategy) << ", "
                << p.detail << '\n';
    for (const GapPattern& p : gaps.unknown)
      std::cout << "gap pattern " << to_string(p) << ": no proof found\n";
  }
  return cert.complete ? kOk : kCheckFailed;
}

int cmd_count(const Options& o) {
  check_format(o.format, {"csv", "json"});
  CountTable t = count_avoiding(resolve_spec(o.spec), o.n_max, o.workers);
  if (o.format == "json") {
    Json counts = Json::array();
    for (const BigInt& c : t.counts)
      counts.push_back(c.str());
    std::cout << Json{{"spec", t.spec.str()}, {"counts", counts}}.dump(2) << '\n';
  } else {
    std::cout << t.csv();
  }
  return kOk;
}

int cmd_forbidden(const Options& o) {
  check_format(o.format, {"text", "json"});
  MinimalForbiddenSet mf = minimal_forbidden(resolve_spec(o.spec), o.max_len);
  if (o.format == "json") {
    Json words = Json::array();
    for (const Word& w : mf.words)
      words.push_back(w.str());
    std::cout << Json{{"spec", mf.spec.str()}, {"max_length", mf.max_length},
                      {"size", mf.words.size()}, {"words", words}}
                     .dump(2)
              << '\n';
  } else {
    std::cout << mf.str();
  }
  return kOk;
}

int cmd_growth(const Options& o) {
  check_format(o.format, {"json"});
  std::vector<Word> words = parse_word_list(read_file(o.forbidden_file), kMaxTextAlphabet);
  unsigned k = o.alphabet;
  if (k == 0) {
    k = 2;
    for (const Word& w : words)
      for (Symbol x : w)
        k = std::max(k, static_cast<unsigned>(x) + 1);
  }
  FactorAutomaton a(words, k);
  std::cout << to_json(growth_rate(a, o.tol)).dump(2) << '\n';
  return kOk;
}

int cmd_family(const Options& o) {
  check_format(o.format, {"json", "text"});
  Substitution sub = Substitution::load(o.sub);
  Morphism outer = Morphism::load(o.outer);
  Word seed = Word::parse(o.seed_word, sub.source_alphabet_size());
  FamilyOptions fo;
  fo.enumeration_cap = o.cap;
  fo.samples = o.samples;
  fo.seed = o.seed;
  FamilyReport r = lower_bound_family(sub, outer, seed, resolve_spec(o.target), o.divisor, fo);
  if (o.format == "json") {
    std::cout << to_json(r).dump(2) << '\n';
  } else {
    std::cout << r.family_size << " words of length " << r.word_length << ", "
              << r.verified_count << "/" << r.checked << " verified"
              << (r.enumerated ? "" : " (sampled)") << ", size >= 2^(n/" << r.divisor
              << "): " << (r.exponent_check ? "yes" : "no") << '\n';
    for (const std::string& f : r.failures)
      std::cout << "  " << f << '\n';
  }
  return r.passed() ? kOk : kCheckFailed;
}

int cmd_shuffle(const Options& o) {
  check_format(o.format, {"text"});
  std::cout << perfect_shuffle(read_word(o.left), read_word(o.right)).str() << '\n';
  return kOk;
}

int cmd_scenario(const Options& o) {
  check_format(o.format, {"text", "json"});
  if (o.all == !o.scenario.empty())
    throw UsageError("give a scenario name or --all");
  InstanceRegistry reg = InstanceRegistry::load(
      o.scenario_dir.empty() ? InstanceRegistry::default_directory() : o.scenario_dir);
  std::vector<std::string> names = o.all ? scenario_names() : std::vector{o.scenario};
  bool ok = true;
  Json all = Json::array();
  for (const std::string& n : names) {
    ScenarioReport r = run_scenario(n, reg);
    ok = ok && r.passed();
    if (o.format == "json")
      all.push_back(r.to_json());
    else
      std::cout << r.digest();
  }
  if (o.format == "json")
    std::cout << (o.all ? all : all[0]).dump(2) << '\n';
  return ok ? kOk : kCheckFailed;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Square avoidance toolkit: morphism fixed points, transfer certificates, "
               "counting and growth of avoiding languages"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--seed", o.seed, "PRNG seed for sampling")->capture_default_str();

  std::map<CLI::App*, std::string> formats;
  auto fmt = [&](CLI::App* sub, const std::string& def) {
    formats[sub] = def;
    sub->add_option("--format", formats[sub], "output format")->capture_default_str();
  };
  std::map<CLI::App*, std::pair<std::function<int(const Options&)>, std::string>> handlers;

  auto* gen = app.add_subcommand("generate", "prefix of a morphism's fixed point");
  gen->add_option("--morphism", o.morphism, "morphism file")->required();
  gen->add_option("--seed-letter", o.seed_letter, "letter to iterate from")->capture_default_str();
  gen->add_option("--length", o.length, "prefix length")->required();
  handlers[gen] = {cmd_generate, "text"};

  auto* scan = app.add_subcommand("scan", "squares, cubes, factors and gap patterns in a word");
  scan->add_option("--word", o.word_file, "file holding a digit word")->required();
  scan->add_option("--min-root", o.min_root, "smallest square root to report")
      ->capture_default_str();
  scan->add_flag("--cubes", o.cubes, "also report cubes");
  scan->add_option("--factors", o.factors_file, "file with one factor per line");
  scan->add_option("--gap-pattern", o.gap, "b,c,a: look for b α c α a");
  handlers[scan] = {cmd_scan, "json"};

  auto* ver = app.add_subcommand("verify", "square transfer certificate for a uniform morphism");
  ver->add_option("--morphism", o.morphism, "morphism file");
  ver->add_option("--substitution", o.substitution,
                  "substitution file; extra images become equivalent letters");
  ver->add_option("--source", o.source, "source spec file or alias")->required();
  ver->add_option("--target", o.target, "target spec file or alias")->required();
  ver->add_option("--depth", o.depth, "context extension depth")->capture_default_str();
  ver->add_option("--root-cap", o.root_cap, "bounded case square root cap (0: 2 * width)")
      ->capture_default_str();
  ver->add_option("--source-morphism", o.source_morphism,
                  "morphism whose fixed point generates the source (enables descent proofs)");
  ver->add_option("--seed-letter", o.seed_letter, "seed letter of that fixed point")
      ->capture_default_str();
  ver->add_option("--id", o.id, "morphism name used in the report")->capture_default_str();
  handlers[ver] = {cmd_verify, "text"};

  auto* cnt = app.add_subcommand("count", "number of legal words of each length");
  cnt->add_option("--spec", o.spec, "spec file or alias")->required();
  cnt->add_option("--n-max", o.n_max, "largest length")->required();
  cnt->add_option("--workers", o.workers, "threads (0: $AVOID_WORKERS or 1)")
      ->capture_default_str();
  handlers[cnt] = {cmd_count, "csv"};

  auto* forb = app.add_subcommand("forbidden", "minimal forbidden words up to a length");
  forb->add_option("--spec", o.spec, "spec file or alias")->required();
  forb->add_option("--max-len", o.max_len, "largest word length")->required();
  handlers[forb] = {cmd_forbidden, "text"};

  auto* gr = app.add_subcommand("growth", "growth rate of the words avoiding a factor list");
  gr->add_option("--forbidden", o.forbidden_file, "file with one word per line")->required();
  gr->add_option("--tol", o.tol, "power iteration tolerance")->capture_default_str();
  gr->add_option("--alphabet", o.alphabet, "alphabet size (0: from the words, at least 2)")
      ->capture_default_str();
  handlers[gr] = {cmd_growth, "json"};

  auto* fam = app.add_subcommand("family", "check the family outer(sub(seed word))");
  fam->add_option("--sub", o.sub, "substitution file")->required();
  fam->add_option("--outer", o.outer, "outer morphism file")->required();
  fam->add_option("--seed-word", o.seed_word, "seed word (digits)")->required();
  fam->add_option("--target", o.target, "target spec file or alias")->required();
  fam->add_option("--divisor", o.divisor, "check family size >= 2^(n / divisor)")->required();
  fam->add_option("--samples", o.samples, "sample count when the family exceeds the cap")
      ->capture_default_str();
  fam->add_option("--cap", o.cap, "largest family enumerated in full")->capture_default_str();
  handlers[fam] = {cmd_family, "json"};

  auto* sh = app.add_subcommand("shuffle", "perfect shuffle of two equal-length words");
  sh->add_option("--left", o.left, "file with the first word")->required();
  sh->add_option("--right", o.right, "file with the second word")->required();
  handlers[sh] = {cmd_shuffle, "text"};

  auto* sc = app.add_subcommand("scenario", "run reproduction scenarios");
  sc->add_option("name", o.scenario, "scenario name");
  sc->add_flag("--all", o.all, "run every scenario");
  sc->add_option("--dir", o.scenario_dir, "instance directory (default: $AVOID_SCENARIO_DIR or "
                                          "the built-in path)");
  handlers[sc] = {cmd_scenario, "text"};

  for (auto& [sub, h] : handlers)
    fmt(sub, h.second);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  for (auto& [sub, h] : handlers) {
    if (!sub->parsed())
      continue;
    o.format = formats[sub];
    // Config echo: the effective value of every flag, defaults included.
    std::cerr << "# avoid " << sub->get_name() << " --seed=" << o.seed;
    for (const CLI::Option* opt : sub->get_options()) {
      if (opt->get_name() == "--help" || opt->get_name() == "-h")
        continue;
      std::string v;
      for (const std::string& r : opt->results())
        v += (v.empty() ? "" : ",") + r;
      if (opt->count() == 0)
        v = opt->get_expected_max() == 0 ? "false" : opt->get_default_str();
      std::string name = opt->get_name();
      if (name.rfind("--", 0) == 0)
        std::cerr << ' ' << name << '=' << v;
      else if (!v.empty())
        std::cerr << ' ' << v;
    }
    std::cerr << '\n';
    try {
      return h.first(o);
    } catch (const UsageError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kUsage;
    } catch (const ParseError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kUsage;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kUsage;
    }
  }
  return kUsage;
}
