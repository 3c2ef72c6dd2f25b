#pragma once

#include <filesystem>
#include <iosfwd>

#include "lqo/types.hpp"

namespace lqo {

/// Reads a real Matrix Market file: array or coordinate format, real or
/// integer field, general / symmetric / skew-symmetric storage.
Matrix read_matrix_market(std::istream& in);
Matrix read_matrix_market(const std::filesystem::path& path);

/// Writes "array real general" with shortest round-trip doubles.
void write_matrix_market(std::ostream& out, const Matrix& x);
void write_matrix_market(const std::filesystem::path& path, const Matrix& x);

}  // namespace lqo
