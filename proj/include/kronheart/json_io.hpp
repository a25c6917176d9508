#pragma once

// Shared JSON encodings, used by every file format and by the CLI.
//   field:     {"kind":"Q"} or {"kind":"Fp","p":5}
//   scalars:   rationals as "num/den" strings, F_p elements as integers in [0,p)
//   module:    {"field":..., "d1":..., "d2":..., "a":[[..]], "b":[[..]]}
//   matrices:  standalone as {"rows":r, "cols":c, "entries":[[..]]}
//   summands:  descriptor text ("P3", "Q1", "R[inf,2]", "R[t^2+t+1,1]")

#include "kronheart/pencil.hpp"

#include <json.hpp>

#include <string>

namespace kronheart {

using Json = nlohmann::json;

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

inline Json field_to_json(const FieldSpec& f) {
  if (f.is_rationals()) return Json{{"kind", "Q"}};
  return Json{{"kind", "Fp"}, {"p", f.characteristic()}};
}

inline FieldSpec field_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ParseError("field: expected {\"kind\":...}");
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "Q") return FieldSpec::rationals();
  if (kind == "Fp") {
    if (!j.contains("p")) throw ParseError("field: Fp requires p");
    try {
      return FieldSpec::prime_field(j.at("p").get<std::int64_t>());
    } catch (const NotPrime& e) {
      throw ParseError(e.what());
    }
  }
  throw ParseError("field: unknown kind " + kind);
}

inline Json scalar_to_json(const Scalar& s) {
  if (s.field().is_rationals()) {
    const Rat& q = s.rational();
    return Json(numerator(q).str() + "/" + denominator(q).str());
  }
  return Json(s.residue());
}

inline Scalar scalar_from_json(const Json& j, const FieldSpec& f) {
  if (j.is_number_integer()) return Scalar(f, j.get<std::int64_t>());
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return Scalar(f, Rat(BigInt(s)));
      return Scalar(f, Rat(BigInt(s.substr(0, slash))) / Rat(BigInt(s.substr(slash + 1))));
    } catch (const std::exception&) {
      throw ParseError("bad scalar: " + s);
    }
  }
  throw ParseError("scalar: expected integer or \"num/den\" string");
}

// Nested-array form (shape known from context).
inline Json matrix_rows_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(scalar_to_json(m.at(i, j)));
    rows.push_back(row);
  }
  return rows;
}

inline Matrix matrix_from_rows_json(const Json& j, std::size_t rows, std::size_t cols,
                                    const FieldSpec& f) {
  if (!j.is_array() || j.size() != rows) throw ParseError("matrix: wrong row count");
  Matrix m(rows, cols, f);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw ParseError("matrix: wrong column count");
    for (std::size_t c = 0; c < cols; ++c) m.at(i, c) = scalar_from_json(j[i][c], f);
  }
  return m;
}

// Standalone form carrying its shape.
inline Json matrix_to_json(const Matrix& m) {
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", matrix_rows_json(m)}};
}

inline Matrix matrix_from_json(const Json& j, const FieldSpec& f) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
    throw ParseError("matrix: expected {rows, cols, entries}");
  return matrix_from_rows_json(j.at("entries"), j.at("rows").get<std::size_t>(),
                               j.at("cols").get<std::size_t>(), f);
}

inline Json module_to_json(const KronModule& m) {
  return Json{{"field", field_to_json(m.field)},
              {"d1", m.dim.d1},
              {"d2", m.dim.d2},
              {"a", matrix_rows_json(m.a)},
              {"b", matrix_rows_json(m.b)}};
}

inline KronModule module_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("module: expected an object");
  for (const char* key : {"field", "d1", "d2", "a", "b"})
    if (!j.contains(key)) throw ParseError(std::string("module: missing field \"") + key + "\"");
  FieldSpec f = field_from_json(j.at("field"));
  std::size_t d1 = j.at("d1").get<std::size_t>();
  std::size_t d2 = j.at("d2").get<std::size_t>();
  Matrix a = matrix_from_rows_json(j.at("a"), d2, d1, f);
  Matrix b = matrix_from_rows_json(j.at("b"), d2, d1, f);
  return KronModule(f, a, b);
}

inline Json submodule_to_json(const Submodule& s) {
  return Json{{"inc1", matrix_to_json(s.inc1)}, {"inc2", matrix_to_json(s.inc2)}};
}

inline Json morphism_to_json(const Morphism& f) {
  return Json{{"f1", matrix_to_json(f.f1)}, {"f2", matrix_to_json(f.f2)}};
}

inline Morphism morphism_from_json(const Json& j, const FieldSpec& f) {
  if (!j.is_object() || !j.contains("f1") || !j.contains("f2"))
    throw ParseError("morphism: expected {f1, f2}");
  return {matrix_from_json(j.at("f1"), f), matrix_from_json(j.at("f2"), f)};
}

inline Json decomposition_to_json(const Decomposition& d) {
  Json summands = Json::array();
  for (const auto& s : d.summands) summands.push_back(s.to_string());
  return Json{{"summands", summands}, {"s1", matrix_to_json(d.s1)}, {"s2", matrix_to_json(d.s2)}};
}

}  // namespace kronheart
