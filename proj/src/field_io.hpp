#pragma once

#include <cstdint>
#include <string>

#include "phase_grid.hpp"

namespace wigcur {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Deliberately plain text so runs diff cleanly: a commented header carrying
// the lattice, field name, provenance tag and display scale factor, then one
// row per lattice point, "x p value" (scalar) or "x p jx jp" (vector),
// 9 significant digits, LF line endings. The scale factor is display
// metadata only; stored values are never scaled.
struct FieldFileMeta {
  std::string name;
  std::string provenance = "derived";
  double scale_factor = 1.0;
};

uint64_t fnv1a64(const std::string& bytes);
std::string format_g9(double v);

// Atomic write (temp file + rename); returns the FNV-1a hash of the bytes.
uint64_t write_scalar_field(const ScalarField& f, const FieldFileMeta& meta,
                            const std::string& path);
uint64_t write_vector_field(const VectorField& j, const FieldFileMeta& meta,
                            const std::string& path);

ScalarField read_scalar_field(const std::string& path);
VectorField read_vector_field(const std::string& path);

uint64_t write_text_file(const std::string& content, const std::string& path);
std::string read_text_file(const std::string& path);

}  // namespace wigcur
