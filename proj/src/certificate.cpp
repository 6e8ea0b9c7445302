#include "avoid/certificate.hpp"

#include <sstream>

namespace avoid {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string side_name(Side s) { return s == Side::Prefix ? "prefix" : "suffix"; }

class Names {
public:
  explicit Names(const TransferCertificate& c) : names_(c.letter_names) {}

  std::string operator()(Symbol x) const {
    return x < names_.size() ? names_[x] : std::to_string(x);
  }
  std::string operator()(std::initializer_list<Symbol> xs) const {
    std::string s;
    for (Symbol x : xs)
      s += (*this)(x);
    return s;
  }
  std::string operator()(const std::vector<Symbol>& xs) const {
    std::string s;
    for (Symbol x : xs)
      s += (*this)(x);
    return s;
  }

private:
  std::vector<std::string> names_;
};

Json symbols_json(const std::vector<Symbol>& xs) {
  Json a = Json::array();
  for (Symbol x : xs)
    a.push_back(x);
  return a;
}

Json local_json(const LocalReason& r) {
  return std::visit(
      overloaded{
          [](const Unrefuted& u) { return Json{{"type", "unrefuted"}, {"note", u.note}}; },
          [](const Trivial& t) { return Json{{"type", "trivial"}, {"detail", t.detail}}; },
          [](const SuffixOrPrefixMismatch& s) {
            return Json{{"type", "mismatch"}, {"side", side_name(s.side)}, {"word", s.word.str()}};
          },
          [](const SourceForbidsFactor& f) {
            return Json{{"type", "source-forbids"},
                        {"factor", symbols_json(f.factor)},
                        {"name", f.factor_name}};
          },
          [](const LetterCoincidence& l) {
            return Json{{"type", "letter-coincidence"},
                        {"position", l.right ? "right" : "left"},
                        {"letter", l.letter},
                        {"forbidden", symbols_json(l.forbidden)}};
          },
          [](const ForcedExtension& f) {
            Json forb = Json::array();
            for (const auto& w : f.forbidden)
              forb.push_back(symbols_json(w));
            return Json{{"type", "forced-extension"},
                        {"side", side_name(f.side)},
                        {"strict", f.strict},
                        {"candidates", symbols_json(f.candidates)},
                        {"forbidden", forb}};
          },
      },
      r);
}

Json case_json(const ExtensionCase& c) {
  return Json{{"e", c.e},     {"e2", c.e2},         {"v", c.v.str()},
              {"w", c.w.str()}, {"label", c.label}, {"reason", local_json(c.reason)}};
}

Json reason_json(const RefutationReason& r) {
  return std::visit(
      overloaded{
          [](const GapPatternAbsent& g) {
            return Json{{"type", "gap-pattern-absent"}, {"evidence", to_json(g.evidence)}};
          },
          [](const BoundedCaseExhausted& b) {
            return Json{{"type", "bounded-case"},
                        {"max_source_length", b.max_source_length},
                        {"words_checked", b.words_checked}};
          },
          [](const ContextExtension& ce) {
            Json cases = Json::array();
            for (const ExtensionCase& c : ce.cases)
              cases.push_back(case_json(c));
            return Json{{"type", "context-extension"}, {"vacuous", ce.vacuous}, {"cases", cases}};
          },
          [](const auto& local) { return local_json(LocalReason{local}); },
      },
      r);
}

Json inclusion_json(const InclusionWitness& w) {
  return Json{{"a", w.a},           {"b", w.b},         {"c", w.c},
              {"offset", w.offset}, {"t", w.t.str()}, {"u", w.u.str()}};
}

std::string note_for(const LocalReason& r, const Names& nm) {
  return std::visit(
      overloaded{
          [](const Unrefuted& u) { return "unrefuted: " + u.note; },
          [](const Trivial& t) { return t.detail; },
          [](const SuffixOrPrefixMismatch& s) {
            return s.word.str() + " is not a " + side_name(s.side) + " of any image";
          },
          [](const SourceForbidsFactor& f) { return f.factor_name + " is illegal"; },
          [&](const LetterCoincidence& l) { return nm(l.forbidden) + " is illegal"; },
          [&](const ForcedExtension& f) {
            std::string s;
            for (const auto& w : f.forbidden) {
              if (!s.empty())
                s += ", ";
              s += nm(w);
            }
            return s + " illegal";
          },
      },
      r);
}

std::string note_for(const RefutationReason& r, const Names& nm) {
  return std::visit(overloaded{
                        [](const GapPatternAbsent& g) {
                          return "no " + to_string(g.evidence.pattern) + " (" +
                                 to_string(g.evidence.kind) + ": " + g.evidence.handle + ")";
                        },
                        [](const BoundedCaseExhausted&) { return std::string("bounded case"); },
                        [](const ContextExtension&) { return std::string("context extension"); },
                        [&](const auto& local) { return note_for(LocalReason{local}, nm); },
                    },
                    r);
}

} // namespace

Json to_json(const Word& w) { return w.str(); }

Json to_json(const GapEvidence& e) {
  return Json{{"pattern", to_string(e.pattern)}, {"kind", to_string(e.kind)}, {"handle", e.handle}};
}

Json to_json(const GapProof& p) {
  Json fam = Json::array();
  for (const GapPattern& q : p.family)
    fam.push_back(to_string(q));
  return Json{{"pattern", to_string(p.pattern)}, {"strategy", to_string(p.strategy)},
              {"detail", p.detail},              {"family", fam},
              {"window", p.window},              {"base_alpha", p.base_alpha}};
}

Json to_json(const BoundedCaseReport& r) {
  Json per = Json::array();
  for (std::size_t n = 1; n < r.words_per_length.size(); ++n)
    per.push_back(r.words_per_length[n]);
  Json viol = Json::array();
  for (const BoundedViolation& v : r.violations)
    viol.push_back(Json{{"source_word", v.source_word.str()},
                        {"kind", to_string(v.violation.kind)},
                        {"position", v.violation.position},
                        {"length", v.violation.length},
                        {"factor", v.violation.factor.str()}});
  return Json{{"root_cap", r.root_cap},
              {"max_source_length", r.max_source_length},
              {"words_per_length", per},
              {"words_checked", r.words_checked},
              {"passed", r.passed()},
              {"violation_count", r.violation_count},
              {"violations", viol}};
}

Json to_json(const TransferCertificate& c) {
  Json incl = Json::array();
  for (const InclusionEntry& e : c.inclusions) {
    Json j = inclusion_json(e.witness);
    j["label"] = e.refutation.label;
    j["refuted"] = is_refuted(e.refutation.reason);
    j["reason"] = reason_json(e.refutation.reason);
    incl.push_back(std::move(j));
  }
  Json excl = Json::array();
  for (const InclusionWitness& w : c.source_excluded_inclusions)
    excl.push_back(inclusion_json(w));
  Json inter = Json::array();
  for (const InterchangeEntry& e : c.interchanges)
    inter.push_back(Json{{"a", e.witness.a},
                         {"b", e.witness.b},
                         {"c", e.witness.c},
                         {"s", e.witness.s.str()},
                         {"t", e.witness.t.str()},
                         {"u", e.witness.u.str()},
                         {"v", e.witness.v.str()},
                         {"refuted", is_refuted(e.reason)},
                         {"reason", reason_json(e.reason)}});
  Json obl = Json::array();
  for (const Obligation& o : c.obligations) {
    Json j{{"description", o.description}, {"discharged", o.discharged}};
    j["evidence"] = o.evidence ? to_json(*o.evidence) : Json(nullptr);
    obl.push_back(std::move(j));
  }
  return Json{{"morphism_id", c.morphism_id},
              {"morphism", c.morphism_text},
              {"source", c.source.str()},
              {"target", c.target.str()},
              {"letters", c.letter_names},
              {"depth", c.depth},
              {"complete", c.complete},
              {"bounded_case", to_json(c.bounded)},
              {"inclusions", incl},
              {"source_excluded_inclusions", excl},
              {"interchanges", inter},
              {"obligations", obl}};
}

std::vector<InclusionRow> inclusion_rows(const TransferCertificate& c) {
  const Names nm(c);
  const Morphism m = Morphism::parse(c.morphism_text);
  const std::string id = c.morphism_id;
  auto img = [&](const std::string& letters) { return id + "(" + letters + ")"; };

  std::vector<InclusionRow> rows;
  for (const InclusionEntry& e : c.inclusions) {
    const InclusionWitness& w = e.witness;
    std::string ab = nm({w.a, w.b});
    std::string witness = img(ab) + " = " + w.t.str() + " " + img(nm(w.c)) + " " + w.u.str();
    const auto* ext = std::get_if<ContextExtension>(&e.refutation.reason);
    if (!ext) {
      rows.push_back({e.refutation.label.empty() ? "-" : e.refutation.label, witness, "", {},
                      note_for(e.refutation.reason, nm)});
      if (e.refutation.label.empty())
        for (const ExtensionCase& ec : e.refutation.cases)
          rows.push_back({ec.refuted() ? ec.label : "-", witness,
                          ec.v.str() + " " + img(ab) + " " + ec.w.str() + " = " +
                              img(nm({ec.e, w.c, ec.e2})),
                          {}, note_for(ec.reason, nm)});
      continue;
    }
    for (const ExtensionCase& ec : ext->cases) {
      InclusionRow row{ec.label, witness,
                       ec.v.str() + " " + img(ab) + " " + ec.w.str() + " = " +
                           img(nm({ec.e, w.c, ec.e2})),
                       {}, note_for(ec.reason, nm)};
      if (const auto* fe = std::get_if<ForcedExtension>(&ec.reason)) {
        for (Symbol k : fe->candidates) {
          const Word& mk = m.image(k);
          if (fe->side == Side::Suffix) {
            // m(k a b) w = y m(e c e′), y the part of m(k) before v.
            Word y = mk.prefix(mk.size() - ec.v.size());
            row.forced.push_back(img(nm({k, w.a, w.b})) + " " + ec.w.str() + " = " + y.str() +
                                 " " + img(nm({ec.e, w.c, ec.e2})));
          } else {
            Word y = mk.suffix(mk.size() - ec.w.size());
            row.forced.push_back(ec.v.str() + " " + img(nm({w.a, w.b, k})) + " = " +
                                 img(nm({ec.e, w.c, ec.e2})) + " " + y.str());
          }
        }
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string render_text(const TransferCertificate& c) {
  const Names nm(c);
  std::ostringstream out;
  out << "certificate " << c.morphism_id << ": " << (c.complete ? "complete" : "INCOMPLETE")
      << "\n";
  const BoundedCaseReport& b = c.bounded;
  out << "bounded case: source words of length <= " << b.max_source_length
      << ", square roots <= " << b.root_cap << ", " << b.words_checked << " words, "
      << (b.passed() ? "no violations" : std::to_string(b.violation_count) + " violations")
      << "\n  per length:";
  for (std::size_t n = 1; n < b.words_per_length.size(); ++n)
    out << ' ' << b.words_per_length[n];
  out << "\n";
  for (const BoundedViolation& v : b.violations)
    out << "  " << c.morphism_id << "(" << v.source_word.str() << ") has "
        << to_string(v.violation.kind) << " " << v.violation.factor.str() << " at "
        << v.violation.position << "\n";

  out << "inclusions: " << c.inclusions.size() << " (" << c.source_excluded_inclusions.size()
      << " more excluded by the source)\n";
  std::vector<InclusionRow> rows = inclusion_rows(c);
  std::size_t wl = 0, wx = 0;
  for (const InclusionRow& r : rows) {
    wl = std::max(wl, r.label.size());
    wx = std::max(wx, r.witness.size());
  }
  std::size_t we = 0;
  for (const InclusionRow& r : rows)
    we = std::max(we, r.extension.size());
  for (const InclusionRow& r : rows) {
    out << "  " << r.label << std::string(wl - r.label.size() + 2, ' ') << r.witness
        << std::string(wx - r.witness.size() + 2, ' ') << r.extension;
    std::string forced;
    for (const std::string& f : r.forced)
      forced += (forced.empty() ? "" : "; ") + f;
    if (!forced.empty())
      out << std::string(we - r.extension.size() + 2, ' ') << forced;
    out << "   [" << r.note << "]\n";
  }
  for (const InclusionWitness& w : c.source_excluded_inclusions)
    out << "  a.src" << std::string(wl > 5 ? wl - 5 + 2 : 2, ' ') << c.morphism_id << "("
        << nm({w.a, w.b}) << ") = " << w.t.str() << " " << c.morphism_id << "(" << nm(w.c)
        << ") " << w.u.str() << "   [" << nm({w.a, w.b}) << " is illegal]\n";

  out << "interchanges: " << c.interchanges.size() << "\n";
  for (const InterchangeEntry& e : c.interchanges) {
    const InterchangeWitness& w = e.witness;
    out << "  (" << nm(w.a) << "," << nm(w.b) << "," << nm(w.c) << ") s=" << w.s.str()
        << " t=" << w.t.str() << " u=" << w.u.str() << " v=" << w.v.str() << "   ["
        << (is_refuted(e.reason) ? "" : "UNREFUTED: ") << note_for(e.reason, nm) << "]\n";
  }
  out << "obligations: " << c.obligations.size() << "\n";
  for (const Obligation& o : c.obligations) {
    out << "  " << (o.discharged ? "[ok] " : "[open] ") << o.description;
    if (o.evidence)
      out << " (" << to_string(o.evidence->kind) << ": " << o.evidence->handle << ")";
    out << "\n";
  }
  return out.str();
}

} // namespace avoid
