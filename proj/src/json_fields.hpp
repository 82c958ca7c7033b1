#pragma once

// Schema helpers shared by the problem and result readers. Every failure names
// the dotted path of the offending field.

#include <cmath>
#include <initializer_list>
#include <string>
#include <vector>

#include "graded/io.hpp"
#include "json.hpp"

namespace graded::io::detail {

using json = nlohmann::json;

[[noreturn]] inline void schema_error(const std::string& path, const std::string& what) {
  throw FormatError("field '" + path + "': " + what);
}

inline std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

inline std::string item(const std::string& parent, std::size_t i) { return parent + "[" + std::to_string(i) + "]"; }

inline void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) schema_error(path.empty() ? "<root>" : path, "expected an object");
}

inline void expect_array(const json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array");
}

inline const json& require(const json& obj, const std::string& parent, const std::string& key) {
  expect_object(obj, parent);
  const auto it = obj.find(key);
  if (it == obj.end()) throw FormatError("missing required field '" + join(parent, key) + "'");
  return *it;
}

inline const json* optional(const json& obj, const std::string& key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

inline void reject_unknown(const json& obj, const std::string& parent, std::initializer_list<const char*> known) {
  for (const auto& [key, value] : obj.items()) {
    bool found = false;
    for (const char* k : known) found = found || key == k;
    if (!found) schema_error(join(parent, key), "unexpected field");
  }
}

inline std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) schema_error(path, "expected a string");
  return j.get<std::string>();
}

inline bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) schema_error(path, "expected true or false");
  return j.get<bool>();
}

inline long long as_int(const json& j, const std::string& path, long long min) {
  if (!j.is_number_integer()) schema_error(path, "expected an integer");
  const auto v = j.get<long long>();
  if (v < min) schema_error(path, "must be at least " + std::to_string(min));
  return v;
}

inline double as_real(const json& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, "expected a number");
  return j.get<double>();
}

inline double as_positive(const json& j, const std::string& path) {
  const double v = as_real(j, path);
  if (!(v > 0) || !std::isfinite(v)) schema_error(path, "must be a positive finite number");
  return v;
}

/// A bare number is accepted as a real entry; otherwise [re, im].
inline std::complex<double> as_complex(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    schema_error(path, "expected a number or an [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

/// Row-major array of rows. `cols` fixes the width when the rows may be empty.
inline ComplexMatrix<double> as_matrix(const json& j, const std::string& path, Index cols = -1) {
  expect_array(j, path);
  const auto rows = static_cast<Index>(j.size());
  if (cols < 0) cols = rows == 0 ? 0 : static_cast<Index>(j[0].is_array() ? j[0].size() : 0);
  ComplexMatrix<double> m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    const auto row_path = item(path, static_cast<std::size_t>(r));
    expect_array(row, row_path);
    if (static_cast<Index>(row.size()) != cols)
      schema_error(row_path, "has " + std::to_string(row.size()) + " entries, expected " + std::to_string(cols));
    for (Index c = 0; c < cols; ++c)
      m(r, c) = as_complex(row[static_cast<std::size_t>(c)], item(row_path, static_cast<std::size_t>(c)));
  }
  return m;
}

inline std::vector<std::vector<std::string>> as_levels(const json& j, const std::string& path) {
  expect_array(j, path);
  std::vector<std::vector<std::string>> levels;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const auto level_path = item(path, k);
    expect_array(j[k], level_path);
    auto& labels = levels.emplace_back();
    for (std::size_t a = 0; a < j[k].size(); ++a) labels.push_back(as_string(j[k][a], item(level_path, a)));
  }
  return levels;
}

}  // namespace graded::io::detail
