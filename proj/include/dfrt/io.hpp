#pragma once

// Output formats: CSV tables (17 significant digits), binary complex field
// dumps, and JSON manifests.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <string>
#include <vector>

#include <json.hpp>

#include "dfrt/grid.hpp"

namespace dfrt {

using Json = nlohmann::json;

/// Write a CSV table; every cell formatted with 17 significant digits.
inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw Error("write_csv: cannot open " + path);
  for (size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << "\n";
  out << std::setprecision(17);
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw Error("write_csv: row width does not match header in " + path);
    for (size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
    out << "\n";
  }
  if (!out) throw Error("write_csv: write failed for " + path);
}

// Binary field dump: magic "DFRTFLD1", then int32 n_values, float64 h,
// float64 theta, then n_values interleaved (Re, Im) float64 pairs.
// All little-endian.
inline void write_field(const std::string& path, const std::vector<Complex>& field, double h,
                        double theta) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("write_field: cannot open " + path);
  out.write("DFRTFLD1", 8);
  const int32_t n = static_cast<int32_t>(field.size());
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  out.write(reinterpret_cast<const char*>(&h), sizeof(h));
  out.write(reinterpret_cast<const char*>(&theta), sizeof(theta));
  for (const auto& z : field) {
    const double re = z.real(), im = z.imag();
    out.write(reinterpret_cast<const char*>(&re), sizeof(re));
    out.write(reinterpret_cast<const char*>(&im), sizeof(im));
  }
  if (!out) throw Error("write_field: write failed for " + path);
}

struct FieldFile {
  std::vector<Complex> values;
  double h = 0.0;
  double theta = 0.0;
};

inline FieldFile read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("read_field: cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::string(magic, 8) != "DFRTFLD1")
    throw Error("read_field: bad magic in " + path);
  int32_t n = 0;
  FieldFile f;
  in.read(reinterpret_cast<char*>(&n), sizeof(n));
  in.read(reinterpret_cast<char*>(&f.h), sizeof(f.h));
  in.read(reinterpret_cast<char*>(&f.theta), sizeof(f.theta));
  if (!in || n < 0) throw Error("read_field: corrupt header in " + path);
  f.values.resize(static_cast<size_t>(n));
  for (auto& z : f.values) {
    double re = 0.0, im = 0.0;
    in.read(reinterpret_cast<char*>(&re), sizeof(re));
    in.read(reinterpret_cast<char*>(&im), sizeof(im));
    z = Complex(re, im);
  }
  if (!in) throw Error("read_field: truncated data in " + path);
  return f;
}

inline void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error("write_json: cannot open " + path);
  out << j.dump(2) << "\n";
  if (!out) throw Error("write_json: write failed for " + path);
}

inline Json complex_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

}  // namespace dfrt
