#include <doctest.h>

#include <cmath>
#include <limits>
#include <memory>
#include <random>

#include <Eigen/SVD>

#include "lqo/data_matrices.hpp"
#include "lqo/errors.hpp"
#include "oracles.hpp"

using lqo::CMatrix;
using lqo::Complex;
using lqo::Matrix;
using lqo::Vector;

namespace {

lqo::QuadratureRule unity(std::initializer_list<double> nodes) {
  Vector t(static_cast<lqo::Index>(nodes.size()));
  lqo::Index i = 0;
  for (double v : nodes) t(i++) = v;
  return lqo::make_rule(t, Vector::Ones(t.size()), lqo::RuleKind::LogTrapezoid);
}

lqo::KernelDataset time_data(const lqo::LqoSystem& sys, const lqo::QuadratureRule& rp,
                             const lqo::QuadratureRule& rq) {
  return lqo::collect_time_data(std::make_shared<lqo::SystemSampler>(sys), rp, rq);
}

void check_time_equivalence(const lqo::LqoSystem& sys, const lqo::KernelDataset& ds) {
  const auto f = oracle::time_factors(sys, ds.axis_p, ds.axis_q);
  const auto d = lqo::assemble_time_matrices(ds);
  CHECK(oracle::scaled_error(d.hankel, f.l.transpose() * f.u) <= 1e-10);
  CHECK(oracle::scaled_error(d.shifted, f.l.transpose() * sys.a() * f.u) <= 1e-10);
  CHECK(oracle::scaled_error(d.input, f.l.transpose() * sys.b()) <= 1e-10);
  CHECK(oracle::scaled_error(d.output, sys.c() * f.u) <= 1e-10);
  for (lqo::Index q = 0; q < sys.outputs(); ++q) {
    CHECK(oracle::scaled_error(d.quadratic[static_cast<std::size_t>(q)],
                               f.u.transpose() * sys.m(q) * f.u) <= 1e-10);
  }
}

void check_freq_equivalence(const lqo::LqoSystem& sys, const lqo::KernelDataset& ds) {
  const auto f = oracle::freq_factors(sys, ds.axis_p, ds.axis_q);
  const auto d = lqo::assemble_freq_matrices(ds);
  const CMatrix a = sys.a().cast<Complex>();
  CHECK(oracle::scaled_error(d.hankel, f.lt * f.u) <= 1e-10);
  CHECK(oracle::scaled_error(d.shifted, f.lt * a * f.u) <= 1e-10);
  CHECK(oracle::scaled_error(d.input, f.lt * sys.b().cast<Complex>()) <= 1e-10);
  CHECK(oracle::scaled_error(d.output, sys.c().cast<Complex>() * f.u) <= 1e-10);
  for (lqo::Index q = 0; q < sys.outputs(); ++q) {
    CHECK(oracle::scaled_error(d.quadratic[static_cast<std::size_t>(q)],
                               f.u.transpose() * sys.m(q).cast<Complex>() * f.u) <= 1e-10);
  }
}

}  // namespace

TEST_CASE("row layout with unity weights") {
  std::mt19937_64 rng(61);
  const auto sys = oracle::random_stable(rng, 4, 1, 1);
  const auto t = unity({0.3, 0.9});
  const auto tau = unity({0.2, 0.5});
  const auto ds = time_data(sys, t, tau);
  const Matrix h = lqo::build_hankel(ds);
  REQUIRE(h.rows() == 6);
  REQUIRE(h.cols() == 2);
  const double t1 = 0.3, t2 = 0.9, tau1 = 0.2, tau2 = 0.5;
  const double expect[6] = {
      lqo::eval_h1(sys, t1 + tau1)(0, 0),      lqo::eval_h1(sys, t1 + tau2)(0, 0),
      lqo::eval_h2(sys, t1, t1 + tau1, 0)(0, 0), lqo::eval_h2(sys, t1, t1 + tau2, 0)(0, 0),
      lqo::eval_h2(sys, t2, t1 + tau1, 0)(0, 0), lqo::eval_h2(sys, t2, t1 + tau2, 0)(0, 0)};
  for (int r = 0; r < 6; ++r) CHECK(h(r, 0) == doctest::Approx(expect[r]).epsilon(1e-13));
}

TEST_CASE("S1 closed forms") {
  const auto s1 = oracle::scalar_s1();
  const auto rp = lqo::log_trapezoid(0.1, 3.0, 3);
  const auto rq = lqo::log_trapezoid(0.2, 2.0, 2);
  const auto ds = time_data(s1, rp, rq);
  const Matrix h = lqo::build_hankel(ds);
  const Matrix m = lqo::build_shifted_hankel(ds);
  for (lqo::Index j = 0; j < 2; ++j) {
    for (lqo::Index i = 0; i < 3; ++i) {
      const double v = rp.sqrt_weights(i) * rq.sqrt_weights(j) * std::exp(-(rp.nodes(i) + rq.nodes(j)));
      CHECK(h(j, i) == doctest::Approx(v).epsilon(1e-13));
      CHECK(m(j, i) == doctest::Approx(-v).epsilon(1e-13));
    }
  }
  // Rules need positive nodes; the smallest normal double stands in for tau = 0.
  const auto zero_tau = lqo::make_rule(Vector::Constant(1, std::numeric_limits<double>::min()),
                                       Vector::Ones(1), lqo::RuleKind::LogTrapezoid);
  const auto ds0 = time_data(s1, rp, zero_tau);
  CHECK(lqo::build_projections(ds0).input(0, 0) == doctest::Approx(1.0).epsilon(1e-13));

  const auto fd = lqo::collect_freq_data(lqo::SystemSampler(s1), rp, rq);
  const auto fm = lqo::assemble_freq_matrices(fd);
  for (lqo::Index k = 0; k < fd.axis_q.size(); ++k) {
    for (lqo::Index l = 0; l < fd.axis_p.size(); ++l) {
      const Complex is(0.0, fd.axis_q.nodes(k));
      const Complex it(0.0, fd.axis_p.nodes(l));
      const double w = fd.axis_q.sqrt_weights(k) * fd.axis_p.sqrt_weights(l);
      CHECK(std::abs(fm.hankel(k, l) - w / ((is + 1.0) * (it + 1.0))) < 1e-14);
    }
  }
}

TEST_CASE("zero and degenerate systems") {
  const lqo::LqoSystem zero(-Matrix::Identity(3, 3), Matrix::Ones(3, 1), Matrix::Zero(1, 3), {});
  const auto rule = lqo::log_trapezoid(0.1, 3.0, 3);
  const auto d = lqo::assemble_time_matrices(time_data(zero, rule, rule));
  CHECK(d.hankel.cwiseAbs().maxCoeff() == 0.0);
  CHECK(d.shifted.cwiseAbs().maxCoeff() == 0.0);
  CHECK(d.quadratic[0].cwiseAbs().maxCoeff() == 0.0);
  const auto fz = lqo::assemble_freq_matrices(lqo::collect_freq_data(lqo::SystemSampler(zero), rule, lqo::log_trapezoid(0.15, 4.0, 2)));
  CHECK(fz.hankel.cwiseAbs().maxCoeff() == 0.0);

  std::mt19937_64 rng(62);
  const auto base = oracle::random_stable(rng, 5, 1, 2);
  const lqo::LqoSystem half(base.a(), base.b(), base.c(), {base.m(0), Matrix::Zero(5, 5)});
  const auto ds = time_data(half, rule, lqo::log_trapezoid(0.2, 2.0, 2));
  const auto dm = lqo::assemble_time_matrices(ds);
  const lqo::Index linear = 2 * 2;
  const lqo::Index per_q = 3 * 2 * 1;
  CHECK(dm.hankel.middleRows(linear, per_q).cwiseAbs().maxCoeff() > 0.0);
  CHECK(dm.hankel.middleRows(linear + per_q, per_q).cwiseAbs().maxCoeff() == 0.0);
  CHECK(dm.input.middleRows(linear + per_q, per_q).cwiseAbs().maxCoeff() == 0.0);
  CHECK(dm.quadratic[1].cwiseAbs().maxCoeff() == 0.0);
  for (const Matrix& k : dm.quadratic) CHECK((k - k.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + k.cwiseAbs().maxCoeff()));
}

TEST_CASE("time-domain matrices equal the explicit factor products") {
  std::mt19937_64 rng(63);
  for (int trial = 0; trial < 10; ++trial) {
    const auto n = static_cast<lqo::Index>(3 + trial);
    const auto sys = oracle::random_stable(rng, n, 1 + trial % 2, 1 + (trial / 2) % 2);
    const auto rp = oracle::random_rule(rng, 1 + trial % 6, 0.01, 5.0);
    const auto rq = oracle::random_rule(rng, 1 + (trial + 3) % 6, 0.01, 5.0);
    check_time_equivalence(sys, time_data(sys, rp, rq));
  }
  const auto mimo = oracle::random_stable(rng, 8, 2, 2);
  check_time_equivalence(mimo, time_data(mimo, oracle::random_rule(rng, 5, 0.01, 4.0), oracle::random_rule(rng, 4, 0.01, 4.0)));
}

TEST_CASE("frequency-domain matrices equal the complex factor products") {
  std::mt19937_64 rng(64);
  for (int trial = 0; trial < 8; ++trial) {
    const auto sys = oracle::random_stable(rng, 3 + trial, 1 + trial % 2, 1 + (trial / 2) % 2);
    const auto rp = oracle::random_rule(rng, 1 + trial % 4, 0.05, 20.0);
    const auto rq = oracle::random_rule(rng, 1 + (trial + 1) % 4, 0.05, 20.0);
    lqo::FreqCollectOptions opts;
    opts.conjugate_closure = trial % 3 != 0;
    check_freq_equivalence(sys, lqo::collect_freq_data(lqo::SystemSampler(sys), rp, rq, opts));
  }
}

TEST_CASE("realification is unitary and real") {
  std::mt19937_64 rng(65);
  const auto sys = oracle::random_stable(rng, 6, 2, 2);
  const auto ds = lqo::collect_freq_data(lqo::SystemSampler(sys), oracle::random_rule(rng, 3, 0.1, 10.0),
                                         oracle::random_rule(rng, 2, 0.1, 10.0));
  const auto c = lqo::assemble_freq_matrices(ds);
  const auto r = lqo::realify(c, ds);
  CHECK(r.hankel.rows() == c.hankel.rows());
  CHECK(r.hankel.cols() == c.hankel.cols());
  const Vector sc = Eigen::JacobiSVD<CMatrix>(c.hankel).singularValues();
  const Vector sr = Eigen::JacobiSVD<Matrix>(r.hankel).singularValues();
  CHECK((sc - sr).cwiseAbs().maxCoeff() <= 1e-12 * sc(0));
  // Frobenius norms are preserved entry family by entry family.
  CHECK(std::abs(c.shifted.norm() - r.shifted.norm()) <= 1e-12 * c.shifted.norm());
  CHECK(std::abs(c.input.norm() - r.input.norm()) <= 1e-12 * c.input.norm());
  CHECK(std::abs(c.output.norm() - r.output.norm()) <= 1e-12 * c.output.norm());
  CHECK(std::abs(c.quadratic[1].norm() - r.quadratic[1].norm()) <= 1e-12 * c.quadratic[1].norm());
  for (const Matrix& k : r.quadratic) CHECK((k - k.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * k.cwiseAbs().maxCoeff());

  lqo::FreqCollectOptions open;
  open.conjugate_closure = false;
  const auto ods = lqo::collect_freq_data(lqo::SystemSampler(sys), oracle::random_rule(rng, 3, 0.1, 10.0),
                                          oracle::random_rule(rng, 2, 0.1, 10.0), open);
  CHECK_THROWS_AS(lqo::realify(lqo::assemble_freq_matrices(ods), ods), std::invalid_argument);
  CHECK_THROWS_AS(lqo::make_slice_source(ods), std::invalid_argument);
}

TEST_CASE("slice sources reproduce the Gram products") {
  std::mt19937_64 rng(66);
  const auto sys = oracle::random_stable(rng, 7, 2, 2);
  const auto rp = oracle::random_rule(rng, 4, 0.05, 5.0);
  const auto rq = oracle::random_rule(rng, 3, 0.05, 5.0);
  lqo::CollectOptions defer;
  defer.shifted = lqo::ShiftedStorage::Defer;
  const auto tds = lqo::collect_time_data(std::make_shared<lqo::SystemSampler>(sys), rp, rq, defer);
  const auto fds = lqo::collect_freq_data(lqo::SystemSampler(sys), rp, rq);
  for (const auto* ds : {&tds, &fds}) {
    const auto dense = lqo::assemble_data_matrices(*ds);
    CHECK(dense.hankel.rows() == lqo::data_rows(*ds));
    const auto source = lqo::make_slice_source(*ds);
    Matrix gram = Matrix::Zero(dense.hankel.cols(), dense.hankel.cols());
    Matrix cross = gram;
    Matrix input = Matrix::Zero(dense.hankel.cols(), dense.input.cols());
    lqo::Index rows = 0;
    Matrix h, m, hv;
    for (lqo::Index s = 0; s < source->slice_count(); ++s) {
      source->slice(s, h, m, hv);
      rows += h.rows();
      gram += h.transpose() * h;
      cross += h.transpose() * m;
      input += h.transpose() * hv;
    }
    CHECK(rows == dense.hankel.rows());
    CHECK(oracle::scaled_error(gram, dense.hankel.transpose() * dense.hankel) < 1e-13);
    CHECK(oracle::scaled_error(cross, dense.hankel.transpose() * dense.shifted) < 1e-13);
    CHECK(oracle::scaled_error(input, dense.hankel.transpose() * dense.input) < 1e-13);
    CHECK(oracle::scaled_error(source->output(), dense.output) < 1e-14);
    CHECK(oracle::scaled_error(source->quadratic()[1], dense.quadratic[1]) < 1e-14);
  }
}
