#pragma once

// Serialization of verifier output. JSON field order is fixed so that
// certificates diff cleanly between runs.

#include <string>
#include <vector>

#include <json.hpp>

#include "avoid/verify.hpp"

namespace avoid {

using Json = nlohmann::ordered_json;

Json to_json(const Word& w);
Json to_json(const GapEvidence& e);
Json to_json(const GapProof& p);
Json to_json(const BoundedCaseReport& r);
Json to_json(const TransferCertificate& c);

/// One row of the inclusion table: case label, the witness identity, the
/// extension identity and, for forced extensions, one identity per
/// candidate letter.
struct InclusionRow {
  std::string label;
  std::string witness;   // m(ab) = t m(c) u
  std::string extension; // v m(ab) w = m(e c e′), empty for a.i .. a.iii
  std::vector<std::string> forced;
  std::string note;
};

/// Rows in certificate order; unrefuted inclusions appear with label "-".
std::vector<InclusionRow> inclusion_rows(const TransferCertificate& c);

/// Human-readable report: header, bounded case, inclusion table,
/// interchanges, obligations.
std::string render_text(const TransferCertificate& c);

} // namespace avoid
