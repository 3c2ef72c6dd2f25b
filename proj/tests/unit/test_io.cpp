#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "lqo/csv.hpp"
#include "lqo/matrix_market.hpp"
#include "lqo/system_io.hpp"
#include "oracles.hpp"

using lqo::Matrix;

TEST_CASE("CSV number format round-trips") {
  for (double v : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 6.02214076e23, 5e-324, -1.7976931348623157e308}) {
    CHECK(lqo::parse_double(lqo::format_double(v)) == v);
  }
  CHECK(lqo::format_double(0.5) == "0.5");
  CHECK_THROWS(lqo::parse_double("1.0x"));
  CHECK_THROWS(lqo::parse_double(""));
  const auto fields = lqo::split_csv_line("1,2.5,,x");
  REQUIRE(fields.size() == 4);
  CHECK(fields[1] == "2.5");
  CHECK(fields[2].empty());
}

TEST_CASE("Matrix Market array and coordinate input") {
  std::istringstream array("%%MatrixMarket matrix array real general\n% comment\n2 2\n1\n2\n3\n4\n");
  const Matrix a = lqo::read_matrix_market(array);
  CHECK(a(0, 0) == 1.0);
  CHECK(a(1, 0) == 2.0);
  CHECK(a(0, 1) == 3.0);

  std::istringstream coord("%%MatrixMarket matrix coordinate real symmetric\n3 3 2\n1 1 2.0\n3 1 -1.5\n");
  const Matrix s = lqo::read_matrix_market(coord);
  CHECK(s(0, 0) == 2.0);
  CHECK(s(2, 0) == -1.5);
  CHECK(s(0, 2) == -1.5);
  CHECK(s(1, 1) == 0.0);

  std::istringstream skew("%%MatrixMarket matrix coordinate integer skew-symmetric\n2 2 1\n2 1 3\n");
  const Matrix k = lqo::read_matrix_market(skew);
  CHECK(k(1, 0) == 3.0);
  CHECK(k(0, 1) == -3.0);

  std::istringstream bad("%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 0\n");
  CHECK_THROWS(lqo::read_matrix_market(bad));
  std::istringstream short_file("%%MatrixMarket matrix array real general\n2 1\n1\n");
  CHECK_THROWS(lqo::read_matrix_market(short_file));
}

TEST_CASE("Matrix Market output round-trips") {
  std::mt19937_64 rng(81);
  Matrix x(3, 2);
  for (lqo::Index i = 0; i < x.size(); ++i) x.data()[i] = oracle::uniform(rng, -10.0, 10.0);
  std::stringstream buf;
  lqo::write_matrix_market(buf, x);
  CHECK(lqo::read_matrix_market(buf) == x);
}

TEST_CASE("system manifests round-trip") {
  std::mt19937_64 rng(82);
  const auto sys = oracle::random_stable(rng, 4, 2, 2);
  const auto dir = std::filesystem::temp_directory_path() / "lqo_system_io";
  std::filesystem::remove_all(dir);
  const auto manifest = lqo::save_system(dir, sys, "bt");
  const auto back = lqo::load_system(manifest);
  CHECK(back.a() == sys.a());
  CHECK(back.b() == sys.b());
  CHECK(back.c() == sys.c());
  CHECK(back.m(0) == sys.m(0));
  CHECK(back.m(1) == sys.m(1));

  // Hand-written manifest with comments, one M omitted, and a dimension check.
  {
    std::ofstream out(dir / "partial.txt");
    out << "# partial\nn 4\nm 2\np 2\nA A.mtx\nB B.mtx\nC C.mtx\nM 2 M2.mtx\n";
  }
  const auto partial = lqo::load_system(dir / "partial.txt");
  CHECK(partial.m(0).cwiseAbs().maxCoeff() == 0.0);
  CHECK(partial.m(1) == sys.m(1));
  {
    std::ofstream out(dir / "wrong.txt");
    out << "n 5\nm 2\np 2\nA A.mtx\nB B.mtx\nC C.mtx\n";
  }
  CHECK_THROWS(lqo::load_system(dir / "wrong.txt"));
  CHECK_THROWS(lqo::load_system(dir / "missing.txt"));
  std::filesystem::remove_all(dir);
}
