#pragma once

// Matrix interchange format shared by the CLI and tests:
//   {"rows": n, "cols": m, "data": [[re, im], ...]}   (row-major)

#include "rittlab/core.hpp"

#include <json.hpp>

#include <fstream>

namespace rittlab {

using Json = nlohmann::json;

inline Json matrix_to_json(const Matrix& a) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      data.push_back({a(i, j).real(), a(i, j).imag()});
  return Json{{"rows", a.rows()}, {"cols", a.cols()}, {"data", std::move(data)}};
}

inline Matrix matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
      !j.contains("data"))
    throw InputError("matrix JSON: expected object with rows/cols/data");
  if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer())
    throw InputError("matrix JSON: rows/cols must be integers");
  const Eigen::Index rows = j["rows"].get<Eigen::Index>();
  const Eigen::Index cols = j["cols"].get<Eigen::Index>();
  if (rows < 0 || cols < 0) throw InputError("matrix JSON: negative shape");
  const Json& data = j["data"];
  if (!data.is_array() ||
      data.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
    throw InputError("matrix JSON: data length does not match rows*cols");
  Matrix a(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j2 = 0; j2 < cols; ++j2, ++k) {
      const Json& e = data[k];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw InputError("matrix JSON: each entry must be [re, im]");
      a(i, j2) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  require_finite(a, "matrix JSON");
  return a;
}

inline Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open matrix file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw InputError("malformed JSON in " + path + ": " + e.what());
  }
  return matrix_from_json(j);
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open output file: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace rittlab
