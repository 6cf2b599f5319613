#pragma once

// JSON and CSV serialization. Complex entries are written as [re, im]; plain
// numbers are accepted on input as real entries.

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "qmd/linalg.hpp"
#include "qmd/measurements.hpp"
#include "qmd/oracle.hpp"
#include "qmd/testers.hpp"
#include "qmd/trine.hpp"

namespace qmd {

using Json = nlohmann::ordered_json;

/// Raised for unreadable files and malformed documents.
class FormatError : public Error {
 public:
  using Error::Error;
};

Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);
Json ket_to_json(const Ket& v);

/// {"dim": d, "outcomes": n, "effects": [matrix, ...]}
Json povm_to_json(const Povm& m);
/// Effects as written, without validation.
std::vector<ComplexMatrix> raw_effects_from_json(const Json& j);
/// Reads and validates; throws FormatError or PovmError.
Povm read_povm_file(const std::string& path);
std::vector<ComplexMatrix> read_raw_effects_file(const std::string& path);

Json tester_to_json(const Tester& t);
Json report_to_json(const DiscriminationReport& r);
Json config_to_json(const SearchConfig& cfg);
Json params_to_json(const ParamList& p);

/// Header theta,q_star,pf_optimal,pf_maxent,gap; 12 significant digits.
void write_trine_csv(std::ostream& os, const std::vector<TrineSweepRow>& rows);
/// Reads the five CSV columns back; other row fields stay default.
std::vector<TrineSweepRow> read_trine_csv(std::istream& is);

}  // namespace qmd
