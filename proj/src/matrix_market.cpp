#include "lqo/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "lqo/csv.hpp"

namespace lqo {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

/// Next line that is neither blank nor a comment.
bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    return true;
  }
  return false;
}

double read_value(std::istringstream& fields, const std::string& line) {
  std::string token;
  if (!(fields >> token)) throw std::runtime_error("matrix market: missing value in '" + line + "'");
  return parse_double(token);
}

}  // namespace

Matrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("matrix market: empty input");
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket" || lower(object) != "matrix") {
    throw std::runtime_error("matrix market: missing '%%MatrixMarket matrix' banner");
  }
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (field != "real" && field != "integer" && field != "double") {
    throw std::runtime_error("matrix market: unsupported field '" + field + "'");
  }
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "skew-symmetric") {
    throw std::runtime_error("matrix market: unsupported symmetry '" + symmetry + "'");
  }
  const bool symmetric = symmetry == "symmetric";
  const bool skew = symmetry == "skew-symmetric";

  if (!next_data_line(in, line)) throw std::runtime_error("matrix market: missing size line");
  std::istringstream size_line(line);
  Index rows = 0, cols = 0, entries = 0;
  if (format == "array") {
    if (!(size_line >> rows >> cols)) throw std::runtime_error("matrix market: bad size line");
  } else if (format == "coordinate") {
    if (!(size_line >> rows >> cols >> entries)) {
      throw std::runtime_error("matrix market: bad size line");
    }
  } else {
    throw std::runtime_error("matrix market: unsupported format '" + format + "'");
  }
  if (rows < 0 || cols < 0 || ((symmetric || skew) && rows != cols)) {
    throw std::runtime_error("matrix market: invalid dimensions");
  }

  Matrix x = Matrix::Zero(rows, cols);
  if (format == "array") {
    for (Index j = 0; j < cols; ++j) {
      const Index start = symmetric ? j : (skew ? j + 1 : 0);
      for (Index i = start; i < rows; ++i) {
        if (!next_data_line(in, line)) throw std::runtime_error("matrix market: truncated array");
        std::istringstream fields(line);
        x(i, j) = read_value(fields, line);
        if (symmetric) x(j, i) = x(i, j);
        if (skew) x(j, i) = -x(i, j);
      }
    }
    return x;
  }
  for (Index e = 0; e < entries; ++e) {
    if (!next_data_line(in, line)) throw std::runtime_error("matrix market: truncated entries");
    std::istringstream fields(line);
    Index i = 0, j = 0;
    if (!(fields >> i >> j) || i < 1 || j < 1 || i > rows || j > cols) {
      throw std::runtime_error("matrix market: bad entry '" + line + "'");
    }
    const double v = read_value(fields, line);
    x(i - 1, j - 1) += v;
    if (i != j && symmetric) x(j - 1, i - 1) += v;
    if (i != j && skew) x(j - 1, i - 1) -= v;
  }
  return x;
}

Matrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return read_matrix_market(in);
  } catch (const std::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void write_matrix_market(std::ostream& out, const Matrix& x) {
  out << "%%MatrixMarket matrix array real general\n" << x.rows() << ' ' << x.cols() << '\n';
  for (Index j = 0; j < x.cols(); ++j) {
    for (Index i = 0; i < x.rows(); ++i) out << format_double(x(i, j)) << '\n';
  }
}

void write_matrix_market(const std::filesystem::path& path, const Matrix& x) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_matrix_market(out, x);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace lqo
