// JSON encoding of complex matrices: each entry is a two-element [re, im] array,
// a matrix is an array of rows.
#pragma once

#include "kgen/core.hpp"

#include <nlohmann/json.hpp>

namespace kgen {

using Json = nlohmann::json;

inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw Error(Errc::parse_error, "matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.at(0).size());
  if (cols == 0) throw Error(Errc::parse_error, "matrix rows must be non-empty");
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j.at(static_cast<std::size_t>(r));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw Error(Errc::parse_error, "ragged matrix row " + std::to_string(r));
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Json& e = row.at(static_cast<std::size_t>(c));
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw Error(Errc::parse_error, "matrix entry must be [re, im]");
      m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

}  // namespace kgen
