#pragma once

#include <string>

#include "json.hpp"
#include "slicekit/mat.hpp"

namespace slicekit {

// Integers that fit in 64 bits serialize as JSON numbers, larger ones as
// decimal strings. Rationals always serialize as "a/b" strings.
inline nlohmann::ordered_json z_to_json(const Z& z) {
  if (z.fits_slong_p()) return nlohmann::ordered_json(z.get_si());
  return nlohmann::ordered_json(z.get_str());
}

inline nlohmann::ordered_json q_to_json(const Q& q) {
  return nlohmann::ordered_json(q.get_num().get_str() + "/" + q.get_den().get_str());
}

inline Q q_from_string(const std::string& s) {
  Q v(s);
  v.canonicalize();
  return v;
}

}  // namespace slicekit
