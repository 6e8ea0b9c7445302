#include "avoid/spec.hpp"

#include <algorithm>
#include <sstream>

#include "avoid/scan.hpp"

namespace avoid {

namespace {

bool is_square_word(const Word& w) {
  if (w.empty() || w.size() % 2 != 0)
    return false;
  std::size_t h = w.size() / 2;
  return std::equal(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(h),
                    w.begin() + static_cast<std::ptrdiff_t>(h));
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
      ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r')
      ++j;
    if (j > i)
      out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool suffix_equals(std::span<const Symbol> w, const Word& f) {
  if (f.size() > w.size())
    return false;
  return std::equal(f.begin(), f.end(), w.end() - static_cast<std::ptrdiff_t>(f.size()));
}

} // namespace

void AvoidanceSpec::validate() const {
  if (alphabet_size < 1 || alphabet_size > kMaxAlphabet)
    throw UsageError("alphabet size outside [1, 255]");
  for (const Word& f : forbidden_factors) {
    if (f.empty())
      throw UsageError("empty forbidden factor");
    for (Symbol s : f)
      if (s >= alphabet_size)
        throw UsageError("forbidden factor " + f.str() + " leaves the alphabet");
  }
  if (auto* t = std::get_if<ForbidRootsAtLeast>(&square_policy); t && t->threshold < 1)
    throw UsageError("square root threshold must be at least 1");
  if (auto* wl = std::get_if<SquareWhitelist>(&square_policy)) {
    for (const Word& sq : wl->squares) {
      if (!is_square_word(sq))
        throw UsageError("whitelist entry " + sq.str() + " is not a square");
      for (Symbol s : sq)
        if (s >= alphabet_size)
          throw UsageError("whitelist entry " + sq.str() + " leaves the alphabet");
    }
  }
}

std::optional<std::size_t> AvoidanceSpec::max_allowed_square_root() const {
  return std::visit(
      overloaded{
          [](const AllowAllSquares&) -> std::optional<std::size_t> { return std::nullopt; },
          [](const ForbidAllSquares&) -> std::optional<std::size_t> { return 0; },
          [](const ForbidRootsAtLeast& p) -> std::optional<std::size_t> {
            return p.threshold - 1;
          },
          [](const SquareWhitelist& p) -> std::optional<std::size_t> {
            std::size_t r = 0;
            for (const Word& sq : p.squares)
              r = std::max(r, sq.size() / 2);
            return r;
          },
      },
      square_policy);
}

std::size_t AvoidanceSpec::max_forbidden_length() const {
  std::size_t m = 0;
  for (const Word& f : forbidden_factors)
    m = std::max(m, f.size());
  return m;
}

bool AvoidanceSpec::squarefree() const {
  auto r = max_allowed_square_root();
  return r && *r == 0;
}

std::string AvoidanceSpec::str() const {
  std::ostringstream out;
  out << "alphabet " << alphabet_size << '\n';
  std::visit(overloaded{
                 [&](const AllowAllSquares&) { out << "squares allow-all\n"; },
                 [&](const ForbidAllSquares&) { out << "squares forbid-all\n"; },
                 [&](const ForbidRootsAtLeast& p) {
                   out << "squares forbid-roots-at-least " << p.threshold << '\n';
                 },
                 [&](const SquareWhitelist& p) {
                   out << "squares whitelist";
                   for (const Word& sq : p.squares)
                     out << ' ' << sq.str();
                   out << '\n';
                 },
             },
             square_policy);
  out << "cubefree " << (cubefree ? "yes" : "no") << '\n';
  if (!forbidden_factors.empty()) {
    out << "forbid";
    for (const Word& f : forbidden_factors)
      out << ' ' << f.str();
    out << '\n';
  }
  return out.str();
}

AvoidanceSpec parse_spec(std::string_view text) {
  AvoidanceSpec spec;
  bool have_alphabet = false;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> deferred; // words need k
  std::optional<std::pair<std::size_t, std::vector<std::string>>> whitelist;

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
    auto toks = split_ws(line);
    if (toks.empty())
      continue;
    std::string_view key = toks[0];
    auto need_args = [&](std::size_t n) {
      if (toks.size() != n + 1)
        throw ParseError(line_no, "'" + std::string(key) + "' expects " + std::to_string(n) +
                                      " argument(s)");
    };
    if (key == "alphabet") {
      need_args(1);
      unsigned long k = 0;
      try {
        std::size_t used = 0;
        k = std::stoul(std::string(toks[1]), &used);
        if (used != toks[1].size())
          throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ParseError(line_no, "bad alphabet size '" + std::string(toks[1]) + "'");
      }
      if (k < 1 || k > kMaxTextAlphabet)
        throw ParseError(line_no, "alphabet size must be in [1, 10] for text specs");
      spec.alphabet_size = static_cast<unsigned>(k);
      have_alphabet = true;
    } else if (key == "squares") {
      if (toks.size() < 2)
        throw ParseError(line_no, "'squares' expects a policy");
      std::string_view kind = toks[1];
      if (kind == "allow-all") {
        need_args(1);
        spec.square_policy = AllowAllSquares{};
      } else if (kind == "forbid-all") {
        need_args(1);
        spec.square_policy = ForbidAllSquares{};
      } else if (kind == "forbid-roots-at-least") {
        need_args(2);
        std::size_t t = 0;
        try {
          std::size_t used = 0;
          t = std::stoul(std::string(toks[2]), &used);
          if (used != toks[2].size())
            throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
          throw ParseError(line_no, "bad threshold '" + std::string(toks[2]) + "'");
        }
        if (t < 1)
          throw ParseError(line_no, "threshold must be at least 1");
        spec.square_policy = ForbidRootsAtLeast{t};
      } else if (kind == "whitelist") {
        std::vector<std::string> ws(toks.begin() + 2, toks.end());
        whitelist.emplace(line_no, std::move(ws));
        spec.square_policy = SquareWhitelist{};
      } else {
        throw ParseError(line_no, "unknown square policy '" + std::string(kind) + "'");
      }
    } else if (key == "cubefree") {
      need_args(1);
      if (toks[1] == "yes" || toks[1] == "true")
        spec.cubefree = true;
      else if (toks[1] == "no" || toks[1] == "false")
        spec.cubefree = false;
      else
        throw ParseError(line_no, "cubefree expects yes or no");
    } else if (key == "forbid") {
      deferred.emplace_back(line_no, std::vector<std::string>(toks.begin() + 1, toks.end()));
    } else {
      throw ParseError(line_no, "unknown directive '" + std::string(key) + "'");
    }
  }
  if (!have_alphabet)
    throw ParseError(line_no, "missing 'alphabet' directive");

  auto parse_in_line = [&](std::size_t ln, const std::string& s) {
    try {
      return Word::parse(s, spec.alphabet_size);
    } catch (const UsageError& e) {
      throw ParseError(ln, e.what());
    }
  };
  for (const auto& [ln, words] : deferred)
    for (const std::string& s : words) {
      Word f = parse_in_line(ln, s);
      if (f.empty())
        throw ParseError(ln, "empty forbidden factor");
      spec.forbidden_factors.push_back(std::move(f));
    }
  if (whitelist && std::holds_alternative<SquareWhitelist>(spec.square_policy)) {
    SquareWhitelist wl;
    for (const std::string& s : whitelist->second) {
      Word sq = parse_in_line(whitelist->first, s);
      if (!is_square_word(sq))
        throw ParseError(whitelist->first, "whitelist entry " + s + " is not a square");
      wl.squares.push_back(std::move(sq));
    }
    spec.square_policy = std::move(wl);
  }
  return spec;
}

AvoidanceSpec load_spec(const std::string& path) {
  return parse_spec(read_file(path));
}

std::string to_string(ViolationKind k) {
  switch (k) {
  case ViolationKind::ForbiddenFactor:
    return "forbidden-factor";
  case ViolationKind::Square:
    return "square";
  case ViolationKind::Cube:
    return "cube";
  }
  return "?";
}

SpecCheck satisfies_spec(const Word& w, const AvoidanceSpec& spec, std::size_t max_root) {
  if (auto hit = scan_forbidden(w, spec.forbidden_factors))
    return {Violation{ViolationKind::ForbiddenFactor, hit->position, hit->factor.size(),
                      hit->factor}};

  auto square_violation = [&](std::size_t pos, std::size_t root) {
    return SpecCheck{Violation{ViolationKind::Square, pos, root, w.slice(pos, 2 * root)}};
  };

  if (auto* wl = std::get_if<SquareWhitelist>(&spec.square_policy)) {
    std::size_t wl_root = spec.max_allowed_square_root().value_or(0);
    std::size_t upto = std::min(wl_root, max_root);
    for (std::size_t p = 1; p <= upto; ++p)
      for (const SquareOccurrence& occ : find_squares_with_root(w, p)) {
        Word sq = w.slice(occ.position, 2 * p);
        if (std::find(wl->squares.begin(), wl->squares.end(), sq) == wl->squares.end())
          return square_violation(occ.position, p);
      }
    if (max_root > wl_root)
      if (auto occ = first_square_in_range(w, wl_root + 1, max_root))
        return square_violation(occ->position, occ->root_length);
  } else if (auto allowed = spec.max_allowed_square_root()) {
    if (max_root > *allowed)
      if (auto occ = first_square_in_range(w, *allowed + 1, max_root))
        return square_violation(occ->position, occ->root_length);
  }

  if (spec.cubefree)
    if (auto occ = first_cube_in_range(w, 1, max_root))
      return {Violation{ViolationKind::Cube, occ->position, occ->root_length,
                        w.slice(occ->position, 3 * occ->root_length)}};
  return {};
}

bool suffix_legal(std::span<const Symbol> w, const AvoidanceSpec& spec) {
  for (const Word& f : spec.forbidden_factors)
    if (suffix_equals(w, f))
      return false;
  auto allowed = spec.max_allowed_square_root();
  bool need_squares = allowed.has_value();
  if (!need_squares && !spec.cubefree)
    return true;
  SuffixRepetitions reps = suffix_repetitions(w, spec.cubefree);
  if (!reps.cube_roots.empty())
    return false;
  if (!need_squares)
    return true;
  if (auto* wl = std::get_if<SquareWhitelist>(&spec.square_policy)) {
    for (std::size_t p : reps.square_roots) {
      auto tail = w.subspan(w.size() - 2 * p);
      bool listed = std::any_of(wl->squares.begin(), wl->squares.end(), [&](const Word& sq) {
        return sq.size() == tail.size() && std::equal(sq.begin(), sq.end(), tail.begin());
      });
      if (!listed)
        return false;
    }
    return true;
  }
  return reps.square_roots.empty() || reps.square_roots.back() <= *allowed;
}

} // namespace avoid
