#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "lqo/errors.hpp"
#include "lqo/gramians.hpp"
#include "oracles.hpp"

using lqo::Complex;
using lqo::Matrix;
using lqo::Vector;

namespace {

// Closed forms for S1, checked against quadrature in the first test case.
constexpr double kP = 0.5;
constexpr double kQ1 = 0.5;
constexpr double kQ2 = 0.25;
constexpr double kQ = 0.75;

double transfer_gap(const lqo::LqoSystem& x, const lqo::LqoSystem& y, std::mt19937_64& rng) {
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const Complex s1(oracle::uniform(rng, 0.0, 1.0), oracle::uniform(rng, -5.0, 5.0));
    const Complex s2(oracle::uniform(rng, 0.0, 1.0), oracle::uniform(rng, -5.0, 5.0));
    const lqo::CMatrix h1 = lqo::eval_H1(x, s1);
    worst = std::max(worst, (h1 - lqo::eval_H1(y, s1)).norm() / (1.0 + h1.norm()));
    for (lqo::Index q = 0; q < x.outputs(); ++q) {
      const lqo::CMatrix h2 = lqo::eval_H2(x, s1, s2, q);
      worst = std::max(worst, (h2 - lqo::eval_H2(y, s1, s2, q)).norm() / (1.0 + h2.norm()));
    }
  }
  return worst;
}

Matrix random_invertible(std::mt19937_64& rng, lqo::Index n) {
  Matrix t(n, n);
  for (lqo::Index j = 0; j < n; ++j) {
    for (lqo::Index i = 0; i < n; ++i) t(i, j) = oracle::uniform(rng, -1.0, 1.0);
  }
  return t + 2.0 * Matrix::Identity(n, n);
}

lqo::LqoSystem transformed(const lqo::LqoSystem& sys, const Matrix& t) {
  const Matrix ti = t.inverse();
  std::vector<Matrix> m;
  for (const Matrix& mq : sys.quadratic()) m.push_back(t.transpose() * mq * t);
  return lqo::LqoSystem(ti * sys.a() * t, ti * sys.b(), sys.c() * t, m);
}

}  // namespace

TEST_CASE("S1 closed forms agree with numerical integration") {
  const auto s1 = oracle::scalar_s1();
  const auto h1sq = [&](double t) { return std::pow(lqo::eval_h1(s1, t)(0, 0), 2); };
  // P = int e^{At} B B^T e^{A^T t} dt and Q1 = int e^{A^T t} C^T C e^{A t} dt coincide for S1.
  const double p = oracle::simpson(h1sq, 0.0, 40.0, 40000);
  CHECK(p == doctest::Approx(kP).epsilon(1e-10));
  CHECK(p == doctest::Approx(kQ1).epsilon(1e-10));
  // B^T Q2 B = int int h2(t1, t2)^2, and h2 separates for S1.
  const double q2 = p * p;
  CHECK(q2 == doctest::Approx(kQ2).epsilon(1e-10));
  CHECK(p + q2 == doctest::Approx(kQ).epsilon(1e-10));
}

TEST_CASE("S1 Gramians, HSV and norm") {
  const auto s1 = oracle::scalar_s1();
  const auto g = lqo::compute_gramians(s1);
  CHECK(std::abs(g.p(0, 0) - kP) <= 1e-12);
  CHECK(std::abs(g.q1(0, 0) - kQ1) <= 1e-12);
  CHECK(std::abs(g.q2(0, 0) - kQ2) <= 1e-12);
  CHECK(std::abs(g.q(0, 0) - kQ) <= 1e-12);
  const Vector hsv = lqo::hankel_singular_values(g);
  CHECK(std::abs(hsv(0) - std::sqrt(3.0 / 8.0)) <= 1e-12);
  CHECK(hsv(0) == doctest::Approx(0.612372).epsilon(1e-6));
  CHECK(std::abs(lqo::h2_norm(s1) - std::sqrt(0.75)) <= 1e-12);
}

TEST_CASE("degenerate and diagonal Gramians") {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = -1.0;
  a(1, 1) = -2.0;
  const lqo::LqoSystem no_input(a, Matrix::Zero(2, 1), Matrix::Ones(1, 2), {Matrix::Identity(2, 2)});
  const auto g0 = lqo::compute_gramians(no_input);
  CHECK(g0.p.norm() == 0.0);
  CHECK(g0.q2.norm() == 0.0);

  const lqo::LqoSystem diag(a, Matrix::Ones(2, 1), Matrix::Ones(1, 2), {Matrix::Identity(2, 2)});
  const auto g = lqo::compute_gramians(diag);
  Matrix pq1(2, 2);
  pq1 << 0.5, 1.0 / 3.0, 1.0 / 3.0, 0.25;
  Matrix q2(2, 2);
  q2 << 0.25, 1.0 / 9.0, 1.0 / 9.0, 1.0 / 16.0;
  CHECK((g.p - pq1).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((g.q1 - pq1).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((g.q2 - q2).cwiseAbs().maxCoeff() < 1e-13);

  const lqo::LqoSystem silent(a, Matrix::Ones(2, 1), Matrix::Zero(1, 2), {});
  CHECK(lqo::hankel_singular_values(lqo::compute_gramians(silent)).size() == 0);
  CHECK(lqo::h2_norm(silent) == 0.0);
}

TEST_CASE("Gramian invariants on random systems") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 12; ++trial) {
    const auto sys = oracle::random_stable(rng, 2 + trial, 1 + trial % 2, 1 + (trial / 3) % 2);
    const auto g = lqo::compute_gramians(sys);
    for (double r : lqo::gramian_residuals(sys, g)) CHECK(r <= 1e-9);
    CHECK((g.q - (g.q1 + g.q2)).norm() == 0.0);
    const double scale = g.q.cwiseAbs().maxCoeff();
    CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(g.q2).eigenvalues().minCoeff() >= -1e-10 * scale);
    CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(g.q - g.q1).eigenvalues().minCoeff() >= -1e-10 * scale);
    CHECK((g.u * g.u.transpose() - g.p).norm() <= 1e-10 * g.p.norm());
    CHECK((g.l * g.l.transpose() - g.q).norm() <= 1e-10 * g.q.norm());
    if (sys.states() <= 8) {
      CHECK(oracle::scaled_error(g.p, oracle::kron_lyapunov(sys.a().transpose(), sys.b() * sys.b().transpose())) < 1e-11);
    }
  }
}

TEST_CASE("HSVs and BT ROMs are similarity invariant") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 5; ++trial) {
    const auto sys = oracle::random_stable(rng, 4 + trial, 1, 1 + trial % 2);
    const auto other = transformed(sys, random_invertible(rng, sys.states()));
    const Vector h = lqo::hankel_singular_values(lqo::compute_gramians(sys));
    const Vector ht = lqo::hankel_singular_values(lqo::compute_gramians(other));
    CHECK((h - ht).cwiseAbs().maxCoeff() <= 1e-9 * h(0));
    const auto rom = lqo::intrusive_bt(sys, 3);
    const auto rom_t = lqo::intrusive_bt(other, 3);
    CHECK(transfer_gap(rom, rom_t, rng) < 1e-8);
  }
}

TEST_CASE("intrusive BT") {
  std::mt19937_64 rng(33);
  const auto s1 = oracle::scalar_s1();
  const auto rom1 = lqo::intrusive_bt(s1, 1);
  CHECK(rom1.method() == lqo::RomMethod::IntrusiveBt);
  for (double w : {0.0, 0.5, 3.0}) {
    CHECK(std::abs(lqo::eval_H1(rom1, Complex(0.0, w))(0, 0) - lqo::eval_H1(s1, Complex(0.0, w))(0, 0)) <= 1e-12);
  }

  const auto sys = oracle::random_stable(rng, 6, 2, 2);
  const auto full = lqo::intrusive_bt(sys, 6);
  CHECK(transfer_gap(sys, full, rng) < 1e-9);

  const auto g = lqo::compute_gramians(sys);
  const auto proj = lqo::bt_projection(g, 4);
  CHECK((proj.w.transpose() * proj.v - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);

  // Truncating a balanced realization keeps the leading HSVs exactly when
  // M = 0. With M != 0 the ROM's Q2 loses the coupling term M12 S2 M21, so
  // the match is only up to the discarded HSVs.
  const auto big = oracle::random_stable(rng, 10, 1, 1);
  const lqo::LqoSystem big_lti(big.a(), big.b(), big.c(), {});
  const Vector hsv_lti = lqo::hankel_singular_values(lqo::compute_gramians(big_lti));
  const Vector rom_lti = lqo::hankel_singular_values(lqo::compute_gramians(lqo::intrusive_bt(big_lti, 4)));
  CHECK((rom_lti.head(4) - hsv_lti.head(4)).cwiseAbs().maxCoeff() <= 1e-6 * hsv_lti(0));

  const Vector hsv = lqo::hankel_singular_values(lqo::compute_gramians(big));
  const Vector hsv4 = lqo::hankel_singular_values(lqo::compute_gramians(lqo::intrusive_bt(big, 4)));
  CHECK((hsv4.head(4) - hsv.head(4)).cwiseAbs().maxCoeff() <= hsv(4));

  CHECK_THROWS_AS(lqo::intrusive_bt(sys, 7), lqo::RankError);
  CHECK_THROWS(lqo::intrusive_bt(sys, 0));
}

TEST_CASE("h2_norm matches the classical LTI norm when M = 0") {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 8; ++trial) {
    const auto base = oracle::random_stable(rng, 2 + trial, 1, 1);
    const lqo::LqoSystem lti(base.a(), base.b(), base.c(), {});
    const Matrix p = oracle::kron_lyapunov(lti.a().transpose(), lti.b() * lti.b().transpose());
    const double classical = std::sqrt((lti.c() * p * lti.c().transpose())(0, 0));
    CHECK(std::abs(lqo::h2_norm(lti) - classical) <= 1e-9 * classical);
  }
}

TEST_CASE("h2_error") {
  std::mt19937_64 rng(35);
  const auto sys = oracle::random_stable(rng, 8, 2, 2);
  CHECK(lqo::h2_error(sys, sys) <= 1e-10);

  const auto s1 = oracle::scalar_s1();
  const lqo::LqoSystem zero_rom(Matrix::Constant(1, 1, -1.0), Matrix::Zero(1, 1), Matrix::Ones(1, 1),
                                {Matrix::Ones(1, 1)});
  CHECK(lqo::h2_error(s1, zero_rom) == doctest::Approx(std::sqrt(0.75)).epsilon(1e-12));

  const auto big = oracle::random_stable(rng, 20, 1, 1);
  CHECK(lqo::h2_error(big, lqo::intrusive_bt(big, 10)) <= lqo::h2_error(big, lqo::intrusive_bt(big, 2)));

  const lqo::LqoSystem unstable(Matrix::Constant(1, 1, 0.5), Matrix::Ones(1, 1), Matrix::Ones(1, 1), {});
  CHECK_THROWS_AS(lqo::h2_error(s1, unstable), lqo::UnstableRomError);
}
