#pragma once

// JSON encoding of exact objects: rationals are ["num", "den"] pairs of
// decimal strings, polynomials {"coeffs": [...]} in ascending degree.

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "cdbt/ratfn.hpp"
#include "cdbt/sturm.hpp"

namespace cdbt {

using json = nlohmann::ordered_json;

inline json to_json(const Rational& r) { return json::array({r.get_num().get_str(), r.get_den().get_str()}); }

inline Rational rational_from_json(const json& j) {
  if (j.is_array() && j.size() == 2 && j[0].is_string() && j[1].is_string())
    return make_rational(BigInt(j[0].get<std::string>(), 10), BigInt(j[1].get<std::string>(), 10));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw std::invalid_argument("expected an exact rational [\"num\",\"den\"], got " + j.dump());
}

inline json to_json(const Poly& p) {
  json coeffs = json::array();
  for (const auto& c : p.coeffs()) coeffs.push_back(to_json(c));
  return json{{"coeffs", coeffs}};
}

inline Poly poly_from_json(const json& j) {
  if (!j.is_object() || !j.contains("coeffs") || !j["coeffs"].is_array())
    throw std::invalid_argument("polynomial JSON must be {\"coeffs\": [...]}");
  std::vector<Rational> c;
  for (const auto& e : j["coeffs"]) c.push_back(rational_from_json(e));
  return Poly(std::move(c));
}

inline json to_json(const RationalFn& f) { return json{{"num", to_json(f.num())}, {"den", to_json(f.den())}}; }

inline RationalFn ratfn_from_json(const json& j) {
  return RationalFn(poly_from_json(j.at("num")), poly_from_json(j.at("den")));
}

inline json to_json(const RootIsolation& iso) {
  json ivs = json::array();
  for (const auto& iv : iso.intervals) ivs.push_back(json{{"lo", to_json(iv.lo)}, {"hi", to_json(iv.hi)}});
  return json{{"count", iso.count()}, {"multiplicity_free", iso.multiplicity_free}, {"intervals", ivs}};
}

}  // namespace cdbt
