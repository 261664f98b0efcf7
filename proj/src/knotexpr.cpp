#include "slicekit/knotexpr.hpp"

#include <stdexcept>

namespace slicekit {

using nlohmann::json;

void SatelliteKnot::validate() const {
  for (const Companion& c : companions) {
    if (c.index < 0 || c.index >= pattern.size())
      throw std::domain_error("companion index out of range for pattern");
  }
}

SeifertMatrix KnotTerm::effective_pattern() const {
  SeifertMatrix v = knot.pattern;
  if (reversed) v = v.reversed();
  if (mirrored) v = v.mirrored();
  return v;
}

SeifertMatrix KnotTerm::effective_companion(const Companion& c) const {
  SeifertMatrix v = c.matrix;
  if (reversed) v = v.reversed();
  if (mirrored) v = v.mirrored();
  return v;
}

KnotExpr expr_reverse(KnotExpr e) {
  for (KnotTerm& t : e.terms) t.reversed = !t.reversed;
  return e;
}

KnotExpr expr_mirror(KnotExpr e) {
  for (KnotTerm& t : e.terms) t.mirrored = !t.mirrored;
  return e;
}

KnotExpr expr_negate(KnotExpr e) {
  for (KnotTerm& t : e.terms) {
    t.reversed = !t.reversed;
    t.mirrored = !t.mirrored;
  }
  return e;
}

KnotExpr expr_sum(KnotExpr a, const KnotExpr& b) {
  a.terms.insert(a.terms.end(), b.terms.begin(), b.terms.end());
  return a;
}

SeifertMatrix realize(const KnotExpr& e) {
  SeifertMatrix acc;
  for (const KnotTerm& t : e.terms) acc = block_sum(acc, t.effective_pattern());
  return acc;
}

MatZ matrix_from_json(const json& j) {
  if (!j.is_array()) throw std::domain_error("matrix must be an array of rows");
  int rows = static_cast<int>(j.size());
  int cols = rows == 0 ? 0 : static_cast<int>(j[0].size());
  MatZ m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols)
      throw std::domain_error("matrix rows must have equal length");
    for (int k = 0; k < cols; ++k) {
      if (!j[i][k].is_number_integer()) throw std::domain_error("matrix entries must be integers");
      m.at(i, k) = Z(j[i][k].get<long>());
    }
  }
  return m;
}

json matrix_to_json(const MatZ& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j).get_si());
    rows.push_back(row);
  }
  return rows;
}

SatelliteKnot satellite_from_json(const json& j) {
  if (!j.is_object() || !j.contains("pattern"))
    throw std::domain_error("knot record needs a \"pattern\" matrix");
  SatelliteKnot k;
  k.pattern = SeifertMatrix(matrix_from_json(j.at("pattern")));
  if (j.contains("label")) k.label = j.at("label").get<std::string>();
  if (j.contains("companions")) {
    for (const json& cj : j.at("companions")) {
      Companion c;
      c.index = cj.at("index").get<int>();
      c.matrix = SeifertMatrix(matrix_from_json(cj.at("matrix")));
      if (cj.contains("label")) c.label = cj.at("label").get<std::string>();
      k.companions.push_back(std::move(c));
    }
  }
  k.validate();
  return k;
}

json satellite_to_json(const SatelliteKnot& k) {
  json j;
  j["label"] = k.label;
  j["pattern"] = matrix_to_json(k.pattern.entries());
  json cs = json::array();
  for (const Companion& c : k.companions) {
    json cj;
    cj["index"] = c.index;
    cj["matrix"] = matrix_to_json(c.matrix.entries());
    cj["label"] = c.label;
    cs.push_back(cj);
  }
  j["companions"] = cs;
  return j;
}

namespace {

KnotTerm term_from_json(const json& j) {
  KnotTerm t;
  if (j.contains("knot")) {
    t.knot = satellite_from_json(j.at("knot"));
  } else {
    t.knot = satellite_from_json(j);
  }
  if (j.contains("reversed")) t.reversed = j.at("reversed").get<bool>();
  if (j.contains("mirrored")) t.mirrored = j.at("mirrored").get<bool>();
  return t;
}

}  // namespace

KnotExpr expr_from_json(const json& j) {
  KnotExpr e;
  if (j.is_array()) {
    for (const json& tj : j) {
      KnotTerm t = term_from_json(tj);
      int copies = 1;
      if (tj.is_object() && tj.contains("copies")) copies = tj.at("copies").get<int>();
      if (copies < 1) throw std::domain_error("copies must be >= 1");
      for (int c = 0; c < copies; ++c) e.terms.push_back(t);
    }
    return e;
  }
  if (j.is_object() && j.contains("terms")) return expr_from_json(j.at("terms"));
  if (j.is_object()) {
    e.terms.push_back(term_from_json(j));
    return e;
  }
  throw std::domain_error("knot expression must be an object or array");
}

json expr_to_json(const KnotExpr& e) {
  json terms = json::array();
  for (const KnotTerm& t : e.terms) {
    json tj;
    tj["knot"] = satellite_to_json(t.knot);
    tj["reversed"] = t.reversed;
    tj["mirrored"] = t.mirrored;
    terms.push_back(tj);
  }
  return terms;
}

}  // namespace slicekit
