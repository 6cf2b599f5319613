#include "qmd/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace qmd {

namespace {

Complex entry_from_json(const Json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return {e[0].get<double>(), e[1].get<double>()};
  throw FormatError("matrix entry must be a number or [re, im]");
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

std::string g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw FormatError("matrix must be a nonempty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) throw FormatError("matrix rows must be nonempty arrays");
  const std::size_t cols = j[0].size();
  ComplexMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw FormatError("matrix rows differ in length");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = entry_from_json(j[r][c]);
  }
  return m;
}

Json ket_to_json(const Ket& v) {
  Json out = Json::array();
  for (const auto& z : v) out.push_back({z.real(), z.imag()});
  return out;
}

Json povm_to_json(const Povm& m) {
  Json effects = Json::array();
  for (const auto& e : m.effects()) effects.push_back(matrix_to_json(e.matrix()));
  return Json{{"dim", m.dim()}, {"outcomes", m.outcomes()}, {"effects", effects}};
}

std::vector<ComplexMatrix> raw_effects_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("effects") || !j["effects"].is_array())
    throw FormatError("measurement document needs an \"effects\" array");
  std::vector<ComplexMatrix> out;
  for (const auto& e : j["effects"]) out.push_back(matrix_from_json(e));
  if (j.contains("outcomes") && j["outcomes"].get<std::size_t>() != out.size())
    throw FormatError("\"outcomes\" does not match the number of effects");
  if (j.contains("dim"))
    for (const auto& e : out)
      if (e.rows() != j["dim"].get<std::size_t>()) throw FormatError("\"dim\" does not match the effects");
  return out;
}

std::vector<ComplexMatrix> read_raw_effects_file(const std::string& path) {
  return raw_effects_from_json(read_json_file(path));
}

Povm read_povm_file(const std::string& path) { return validate_povm(read_raw_effects_file(path)); }

Json tester_to_json(const Tester& t) {
  Json blocks = Json::array();
  for (std::size_t j = 0; j < t.outcomes(); ++j) {
    Json row = Json::object();
    for (std::size_t c = 0; c < t.conclusions().size(); ++c)
      row[t.conclusions()[c]] = matrix_to_json(t.block(j, c).matrix());
    blocks.push_back(std::move(row));
  }
  return Json{{"conclusions", t.conclusions()}, {"rho", matrix_to_json(t.normalization().matrix())},
              {"blocks", blocks}};
}

Json report_to_json(const DiscriminationReport& r) {
  Json table = Json::object();
  for (std::size_t i = 0; i < r.hypotheses.size(); ++i) {
    Json row = Json::object();
    for (std::size_t c = 0; c < r.conclusions.size(); ++c) row[r.conclusions[c]] = r.table[i][c];
    table[r.hypotheses[i]] = std::move(row);
  }
  return Json{{"p_s", r.p_s}, {"p_e", r.p_e}, {"p_f", r.p_f}, {"conditional", table}};
}

Json config_to_json(const SearchConfig& cfg) {
  return Json{{"grid_step_deg", cfg.grid_step_deg}, {"refine_rounds", cfg.refine_rounds}, {"shrink", cfg.shrink},
              {"tolerance", cfg.tolerance},         {"restarts", cfg.restarts},           {"seed", cfg.seed}};
}

Json params_to_json(const ParamList& p) {
  Json out = Json::object();
  for (const auto& [k, v] : p) out[k] = v;
  return out;
}

void write_trine_csv(std::ostream& os, const std::vector<TrineSweepRow>& rows) {
  os << "theta,q_star,pf_optimal,pf_maxent,gap\n";
  for (const auto& r : rows)
    os << g12(r.theta) << ',' << g12(r.q_star) << ',' << g12(r.pf_optimal) << ',' << g12(r.pf_maxent) << ','
       << g12(r.gap) << '\n';
}

std::vector<TrineSweepRow> read_trine_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "theta,q_star,pf_optimal,pf_maxent,gap")
    throw FormatError("trine CSV: unexpected header");
  std::vector<TrineSweepRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ls, cell, ',')) {
      try {
        v.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw FormatError("trine CSV: bad number '" + cell + "'");
      }
    }
    if (v.size() != 5) throw FormatError("trine CSV: expected five columns");
    TrineSweepRow r;
    r.theta = v[0];
    r.q_star = v[1];
    r.pf_optimal = v[2];
    r.pf_maxent = v[3];
    r.gap = v[4];
    rows.push_back(r);
  }
  return rows;
}

}  // namespace qmd
