#include "lqo/system_io.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "lqo/matrix_market.hpp"

namespace lqo {

LqoSystem load_system(const std::filesystem::path& manifest, bool check_stability) {
  std::ifstream in(manifest);
  if (!in) throw std::runtime_error("cannot open system manifest " + manifest.string());
  const std::filesystem::path base = manifest.parent_path();
  std::map<std::string, Index> dims;
  std::map<std::string, std::filesystem::path> files;
  std::map<Index, std::filesystem::path> quadratic;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string key;
    if (!(fields >> key)) continue;
    const auto fail = [&](const std::string& why) {
      return std::runtime_error(manifest.string() + ":" + std::to_string(line_no) + ": " + why);
    };
    if (key == "n" || key == "m" || key == "p") {
      Index v = 0;
      if (!(fields >> v) || v < 1) throw fail("bad dimension");
      dims[key] = v;
    } else if (key == "A" || key == "B" || key == "C") {
      std::string file;
      if (!(fields >> file)) throw fail("missing file name");
      files[key] = base / file;
    } else if (key == "M") {
      Index q = 0;
      std::string file;
      if (!(fields >> q >> file) || q < 1) throw fail("expected 'M <output> <file>'");
      quadratic[q] = base / file;
    } else if (key == "method") {
      continue;
    } else {
      throw fail("unknown key '" + key + "'");
    }
  }
  for (const char* key : {"A", "B", "C"}) {
    if (!files.count(key)) throw std::runtime_error(manifest.string() + ": missing " + key);
  }
  Matrix a = read_matrix_market(files["A"]);
  Matrix b = read_matrix_market(files["B"]);
  Matrix c = read_matrix_market(files["C"]);
  const auto expect = [&](const char* key, Index actual) {
    if (dims.count(key) && dims[key] != actual) {
      throw std::runtime_error(manifest.string() + ": " + key + " = " + std::to_string(dims[key]) +
                               " does not match the matrix files (" + std::to_string(actual) + ")");
    }
  };
  expect("n", a.rows());
  expect("m", b.cols());
  expect("p", c.rows());
  std::vector<Matrix> m(static_cast<std::size_t>(c.rows()), Matrix::Zero(a.rows(), a.rows()));
  for (const auto& [q, file] : quadratic) {
    if (q > c.rows()) throw std::runtime_error(manifest.string() + ": M index exceeds p");
    m[static_cast<std::size_t>(q - 1)] = read_matrix_market(file);
  }
  return LqoSystem(std::move(a), std::move(b), std::move(c), std::move(m), check_stability);
}

std::filesystem::path save_system(const std::filesystem::path& dir, const LqoSystem& sys,
                                  const std::optional<std::string>& method) {
  std::filesystem::create_directories(dir);
  write_matrix_market(dir / "A.mtx", sys.a());
  write_matrix_market(dir / "B.mtx", sys.b());
  write_matrix_market(dir / "C.mtx", sys.c());
  const auto manifest = dir / "system.txt";
  std::ofstream out(manifest);
  if (!out) throw std::runtime_error("cannot write " + manifest.string());
  out << "n " << sys.states() << "\nm " << sys.inputs() << "\np " << sys.outputs() << '\n';
  if (method) out << "method " << *method << '\n';
  out << "A A.mtx\nB B.mtx\nC C.mtx\n";
  for (Index q = 0; q < sys.outputs(); ++q) {
    if (sys.m(q).isZero(0.0)) continue;
    const std::string name = "M" + std::to_string(q + 1) + ".mtx";
    write_matrix_market(dir / name, sys.m(q));
    out << "M " << q + 1 << ' ' << name << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + manifest.string());
  return manifest;
}

}  // namespace lqo
