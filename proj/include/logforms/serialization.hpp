#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "logforms/constructions.hpp"
#include "logforms/log_space.hpp"
#include "logforms/search.hpp"
#include "logforms/witt.hpp"
#include "logforms/witt_lift.hpp"

namespace logforms {

using json = nlohmann::ordered_json;

namespace detail {

inline void require(bool cond, const std::string& what) {
  if (!cond) throw PreconditionError("malformed record: " + what);
}

inline int get_int(const json& j, const char* key) {
  require(j.is_object() && j.contains(key) && j[key].is_number_integer(),
          std::string("missing integer field '") + key + "'");
  return j[key].get<int>();
}

}  // namespace detail

inline json to_json(const FieldElement& a) {
  const FieldSpec* F = a.field();
  return json{{"p", F->p}, {"k", F->k}, {"coeffs", a.coeffs()}};
}

inline FieldElement field_element_from_json(const json& j) {
  const int p = detail::get_int(j, "p"), k = detail::get_int(j, "k");
  const FieldSpec* F = FieldSpec::get(p, k);
  detail::require(j.contains("coeffs") && j["coeffs"].is_array() &&
                      j["coeffs"].size() == static_cast<size_t>(k),
                  "coeffs must list k digits");
  std::vector<u32> digits;
  for (const auto& c : j["coeffs"]) {
    detail::require(c.is_number_integer() && c.get<long long>() >= 0 &&
                        c.get<long long>() < p,
                    "field digit out of range");
    digits.push_back(c.get<u32>());
  }
  return FieldElement(F, F->pack(digits.data()));
}

inline json to_json(const Polynomial& f) {
  json out = json::array();
  for (int i = 0; i <= f.degree(); ++i) out.push_back(to_json(FieldElement(f.field(), f.coeff(i))));
  return out;
}

inline Polynomial polynomial_from_json(const json& j, const FieldSpec* F) {
  detail::require(j.is_array(), "polynomial must be an array of coefficients");
  std::vector<u32> cs;
  for (const auto& rec : j) {
    FieldElement a = field_element_from_json(rec);
    detail::require(a.field()->same(*F), "coefficient from the wrong field");
    cs.push_back(a.packed());
  }
  return Polynomial(F, std::move(cs));
}

inline json to_json(const DifferentialForm& w) {
  return json{{"numerator", to_json(w.numerator())}, {"denominator", to_json(w.denominator())}};
}

inline DifferentialForm form_from_json(const json& j, const FieldSpec* F) {
  detail::require(j.is_object() && j.contains("numerator") && j.contains("denominator"),
                  "form needs numerator and denominator");
  return DifferentialForm(polynomial_from_json(j["numerator"], F),
                          polynomial_from_json(j["denominator"], F));
}

inline json to_json(const LogFormSpace& S) {
  json basis = json::array();
  for (const auto& w : S.basis) basis.push_back(to_json(w));
  return json{{"p", S.F->p}, {"k", S.F->k}, {"m", S.m}, {"n", S.n}, {"basis", std::move(basis)}};
}

inline LogFormSpace space_from_json(const json& j) {
  const FieldSpec* F = FieldSpec::get(detail::get_int(j, "p"), detail::get_int(j, "k"));
  LogFormSpace S;
  S.F = F;
  S.m = detail::get_int(j, "m");
  S.n = detail::get_int(j, "n");
  detail::require(j.contains("basis") && j["basis"].is_array(), "basis must be an array");
  for (const auto& rec : j["basis"]) S.basis.push_back(form_from_json(rec, F));
  return S;
}

inline json to_json(const HurwitzDatum& d) {
  return json{{"p", d.p}, {"classes", d.classes}};
}

inline HurwitzDatum hurwitz_from_json(const json& j) {
  HurwitzDatum d;
  d.p = detail::get_int(j, "p");
  detail::require(j.contains("classes") && j["classes"].is_array(), "classes must be an array");
  for (const auto& c : j["classes"]) {
    detail::require(c.is_number_integer(), "classes must be integers");
    d.classes.push_back(c.get<int>());
  }
  validate_datum(d);
  return d;
}

inline json to_json(const WittElement& x) {
  const WittRing* R = x.ring();
  return json{{"p", R->F->p},
              {"k", R->F->k},
              {"N", R->N},
              {"ramified", false},
              {"coords", x.coords()}};
}

inline WittElement witt_from_json(const json& j) {
  const int p = detail::get_int(j, "p"), k = detail::get_int(j, "k"),
            N = detail::get_int(j, "N");
  detail::require(j.contains("ramified") && j["ramified"].is_boolean() &&
                      !j["ramified"].get<bool>(),
                  "ramified elements do not cross the serialization boundary");
  const WittRing* R = WittRing::get(p, k, N);
  detail::require(j.contains("coords") && j["coords"].is_array() &&
                      j["coords"].size() == static_cast<size_t>(k),
                  "coords must list k residues");
  std::vector<u64> coords;
  for (const auto& c : j["coords"]) {
    detail::require(c.is_number_integer() && c.get<long long>() >= 0 &&
                        static_cast<u64>(c.get<long long>()) < R->pN,
                    "coordinate out of range mod p^N");
    coords.push_back(c.get<u64>());
  }
  return WittElement(R, std::move(coords));
}

inline json to_json(const WittPoly& f) {
  json out = json::array();
  for (int i = 0; i <= f.degree(); ++i) out.push_back(to_json(f.coeff(i)));
  return out;
}

inline WittPoly witt_poly_from_json(const json& j, const WittRing* R) {
  detail::require(j.is_array(), "polynomial must be an array of coefficients");
  std::vector<WittElement> cs;
  for (const auto& rec : j) {
    WittElement x = witt_from_json(rec);
    detail::require(x.ring() == R, "coefficient from the wrong ring");
    cs.push_back(std::move(x));
  }
  return WittPoly(R, std::move(cs));
}

inline json to_json(const LiftP2Report& rep) {
  auto elems = [](const std::vector<WittElement>& xs) {
    json out = json::array();
    for (const auto& x : xs) out.push_back(to_json(x));
    return out;
  };
  return json{{"p", rep.ring->F->p},
              {"k", rep.ring->F->k},
              {"N", rep.ring->N},
              {"n", rep.n},
              {"certificate", to_json(rep.f1)},
              {"residues", rep.residues},
              {"lifts", elems(rep.lifts)},
              {"eps", elems(rep.eps)},
              {"alpha", elems(rep.alpha)},
              {"Ftilde", to_json(rep.Ftilde)},
              {"Q", to_json(rep.Q)},
              {"R", to_json(rep.R)},
              {"F", to_json(rep.F)}};
}

inline json to_json(const RefinedShapeReport& rep) {
  return json{{"p", rep.ring->F->p},
              {"k", rep.ring->F->k},
              {"N", rep.ring->N},
              {"m", rep.m},
              {"classes", rep.classes},
              {"classes_reduced", rep.classes_reduced},
              {"F", to_json(rep.F)},
              {"Qhat", to_json(rep.dec.Qhat)},
              {"U", to_json(rep.dec.U)},
              {"Rhat", to_json(rep.dec.Rhat)},
              {"Shat", to_json(rep.dec.Shat)},
              {"required_valuation", rep.required_valuation},
              {"observed_valuation", rep.observed_valuation}};
}

// Timing is deliberately not serialized: reports must be byte-identical
// across reruns and job counts.
inline json to_json(const SearchResult& r) {
  json tuples = json::array();
  for (const auto& t : r.tuple_witnesses) tuples.push_back(t);
  json pairs = json::array();
  for (const auto& [A, B] : r.pair_witnesses)
    pairs.push_back(json{{"A", to_json(A)}, {"B", to_json(B)}});
  return json{{"verdict", r.verdict == SearchVerdict::found ? "found" : "exhausted_none"},
              {"enumerated", r.enumerated},
              {"candidates", r.candidates},
              {"pruned", r.pruned},
              {"near_misses", r.near_misses},
              {"tuple_witnesses", std::move(tuples)},
              {"pair_witnesses", std::move(pairs)}};
}

inline json to_json(const Theorem29Report& rep) {
  json rows = json::array();
  for (const auto& row : rep.rows) {
    json r{{"m_plus_1", row.m_plus_1}, {"k", row.k}};
    if (row.skipped) {
      r["skipped"] = true;
      r["candidate_estimate"] = row.candidates;
    } else {
      r["verdict"] = row.verdict == SearchVerdict::found ? "found" : "exhausted_none";
      r["candidates"] = row.candidates;
      r["witnesses"] = row.witnesses;
    }
    rows.push_back(std::move(r));
  }
  json out{{"p", rep.p}, {"rows", std::move(rows)}, {"caveat", rep.caveat}};
  if (!rep.warning.empty()) out["warning"] = rep.warning;
  return out;
}

}  // namespace logforms
