#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "lqo/errors.hpp"
#include "lqo/gramians.hpp"
#include "lqo/qbt.hpp"
#include "oracles.hpp"

using lqo::Complex;
using lqo::Matrix;
using lqo::Vector;

namespace {

double transfer_gap(const lqo::LqoSystem& x, const lqo::LqoSystem& y, std::mt19937_64& rng) {
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const Complex s1(oracle::uniform(rng, 0.0, 1.0), oracle::uniform(rng, -5.0, 5.0));
    const Complex s2(oracle::uniform(rng, 0.0, 1.0), oracle::uniform(rng, -5.0, 5.0));
    const lqo::CMatrix h1 = lqo::eval_H1(x, s1);
    worst = std::max(worst, (h1 - lqo::eval_H1(y, s1)).norm() / h1.norm());
    for (lqo::Index q = 0; q < x.outputs(); ++q) {
      const lqo::CMatrix h2 = lqo::eval_H2(x, s1, s2, q);
      worst = std::max(worst, (h2 - lqo::eval_H2(y, s1, s2, q)).norm() / h2.norm());
    }
  }
  return worst;
}

lqo::KernelDataset time_data(const lqo::LqoSystem& sys, const lqo::QuadratureRule& rule) {
  return lqo::collect_time_data(std::make_shared<lqo::SystemSampler>(sys), rule, rule);
}

lqo::QbtOptions path(lqo::SvdPath p) {
  lqo::QbtOptions o;
  o.path = p;
  return o;
}

}  // namespace

TEST_CASE("S1 order-1 ROM from quadrature data") {
  const auto s1 = oracle::scalar_s1();
  const auto ds = time_data(s1, lqo::log_trapezoid(1e-3, 30.0, 40));
  const auto rom = lqo::lqo_qbt(ds, 1);
  CHECK(rom.method() == lqo::RomMethod::TimeQbt);
  CHECK(std::abs(lqo::eval_H1(rom, 0.0)(0, 0) - 1.0) <= 1e-3);
  CHECK(std::abs(lqo::eval_H2(rom, 0.0, 0.0, 0)(0, 0) - 1.0) <= 1e-3);
}

TEST_CASE("full-rank QBT reproduces the system") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 4; ++trial) {
    const auto sys = oracle::random_stable(rng, 5, 1 + trial % 2, 1 + trial / 2);
    const auto rule = lqo::log_trapezoid(1e-2, 1e1, 12);
    const auto tds = time_data(sys, rule);
    const auto fds = lqo::collect_freq_data(lqo::SystemSampler(sys), lqo::log_trapezoid(1e-2, 1e2, 12),
                                            lqo::log_trapezoid(1.3e-2, 1.3e2, 12));
    for (const auto* ds : {&tds, &fds}) {
      for (const auto p : {lqo::SvdPath::Dense, lqo::SvdPath::Gram}) {
        const auto reducer = lqo::make_qbt_reducer(*ds, path(p));
        CHECK(reducer.used_gram() == (p == lqo::SvdPath::Gram));
        const lqo::Index r = reducer.numerical_rank();
        REQUIRE(r == 5);
        const auto rom = reducer.reduce(r);
        CHECK(rom.method() == (ds == &tds ? lqo::RomMethod::TimeQbt : lqo::RomMethod::FreqQbt));
        CHECK(transfer_gap(sys, rom, rng) <= 1e-6);
      }
    }
  }
}

TEST_CASE("dense and Gram paths agree") {
  std::mt19937_64 rng(72);
  const auto sys = oracle::random_stable(rng, 8, 2, 2);
  const auto ds = time_data(sys, lqo::log_trapezoid(1e-2, 20.0, 10));
  const auto dense = lqo::make_qbt_reducer(ds, path(lqo::SvdPath::Dense));
  const auto gram = lqo::make_qbt_reducer(ds, path(lqo::SvdPath::Gram));
  const Vector& sd = dense.singular_values();
  const Vector& sg = gram.singular_values();
  REQUIRE(sd.size() == sg.size());
  for (lqo::Index i = 0; i < sd.size(); ++i) {
    if (sd(i) > 1e-6 * sd(0)) CHECK(std::abs(sd(i) - sg(i)) <= 1e-9 * sd(0));
  }
  for (lqo::Index r : {2, 4, 6}) {
    const auto a = dense.reduce(r);
    const auto b = gram.reduce(r);
    CHECK(transfer_gap(a, b, rng) <= 1e-6);
  }
  CHECK(gram.max_order() <= dense.max_order());
}

TEST_CASE("Gram accumulation is independent of threading") {
  std::mt19937_64 rng(73);
  const auto sys = oracle::random_stable(rng, 6, 1, 2);
  const auto ds = time_data(sys, lqo::log_trapezoid(1e-2, 10.0, 9));
  const auto source = lqo::make_slice_source(ds);
  const auto par = lqo::QbtReducer::from_slices(*source, lqo::RomMethod::TimeQbt, true);
  const auto one = lqo::QbtReducer::from_slices(*source, lqo::RomMethod::TimeQbt, false);
  const auto ref = lqo::QbtReducer::from_slices_serial(*source, lqo::RomMethod::TimeQbt);
  CHECK(par.singular_values() == one.singular_values());
  const auto rp = par.reduce(4);
  const auto ro = one.reduce(4);
  CHECK(rp.a() == ro.a());
  CHECK(rp.b() == ro.b());
  CHECK(rp.c() == ro.c());
  CHECK(rp.m(1) == ro.m(1));
  CHECK((par.singular_values() - ref.singular_values()).head(4).cwiseAbs().maxCoeff() <=
        1e-12 * ref.singular_values()(0));
  CHECK(transfer_gap(rp, ref.reduce(4), rng) <= 1e-9);
}

TEST_CASE("dense-limit switch picks the path") {
  std::mt19937_64 rng(74);
  const auto sys = oracle::random_stable(rng, 4, 1, 1);
  const auto ds = time_data(sys, lqo::log_trapezoid(1e-2, 10.0, 6));
  lqo::QbtOptions small;
  small.dense_limit = 10;
  CHECK(lqo::make_qbt_reducer(ds, small).used_gram());
  CHECK_FALSE(lqo::make_qbt_reducer(ds).used_gram());
}

TEST_CASE("order validation") {
  std::mt19937_64 rng(75);
  const auto sys = oracle::random_stable(rng, 6, 1, 1);
  const auto ds = time_data(sys, lqo::log_trapezoid(1e-2, 10.0, 3));
  const auto reducer = lqo::make_qbt_reducer(ds);
  CHECK_THROWS_AS(reducer.reduce(4), lqo::RankError);
  CHECK_THROWS_AS(reducer.reduce(0), std::invalid_argument);
  CHECK_NOTHROW(reducer.reduce(3));

  const lqo::LqoSystem zero(-Matrix::Identity(3, 3), Matrix::Ones(3, 1), Matrix::Zero(1, 3), {});
  const auto zds = time_data(zero, lqo::log_trapezoid(1e-2, 10.0, 3));
  const auto zred = lqo::make_qbt_reducer(zds);
  CHECK(zred.singular_values().cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(zred.reduce(1), lqo::RankError);
}

TEST_CASE("QBT approaches BT as the rules refine") {
  std::mt19937_64 rng(76);
  const auto sys = oracle::random_stable(rng, 8, 1, 1);
  const double bt = lqo::h2_error(sys, lqo::intrusive_bt(sys, 3));
  const auto coarse = lqo::lqo_qbt(time_data(sys, lqo::log_trapezoid(1e-2, 20.0, 10)), 3);
  const auto fine = lqo::lqo_qbt(time_data(sys, lqo::log_trapezoid(1e-3, 40.0, 200)), 3);
  const double e_fine = lqo::h2_error(sys, fine);
  CHECK(e_fine <= 1.05 * bt);
  CHECK(std::abs(e_fine - bt) <= std::abs(lqo::h2_error(sys, coarse) - bt) + 1e-12);
}
