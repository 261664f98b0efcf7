#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "slicekit/seifert.hpp"

namespace slicekit {

// Companion knot tied 0-framed into the band dual to one pattern generator.
struct Companion {
  int index = 0;
  SeifertMatrix matrix;
  std::string label;
};

struct SatelliteKnot {
  SeifertMatrix pattern;
  std::vector<Companion> companions;
  std::string label;

  void validate() const;
};

struct KnotTerm {
  SatelliteKnot knot;
  bool reversed = false;
  bool mirrored = false;

  // Pattern / companion matrices with the orientation flags applied.
  SeifertMatrix effective_pattern() const;
  SeifertMatrix effective_companion(const Companion& c) const;
};

struct KnotExpr {
  std::vector<KnotTerm> terms;
};

KnotExpr expr_reverse(KnotExpr e);
KnotExpr expr_mirror(KnotExpr e);
KnotExpr expr_negate(KnotExpr e);
KnotExpr expr_sum(KnotExpr a, const KnotExpr& b);

// Block sum of the effective pattern matrices. Companions are 0-framed and do
// not enter the Seifert form.
SeifertMatrix realize(const KnotExpr& e);

SatelliteKnot satellite_from_json(const nlohmann::json& j);
nlohmann::json satellite_to_json(const SatelliteKnot& k);
// Accepts a single knot object, {"terms": [...]}, or a bare array of terms.
KnotExpr expr_from_json(const nlohmann::json& j);
nlohmann::json expr_to_json(const KnotExpr& e);

MatZ matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const MatZ& m);

}  // namespace slicekit
