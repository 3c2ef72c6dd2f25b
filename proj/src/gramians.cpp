#include "lqo/gramians.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "lqo/errors.hpp"

namespace lqo {

namespace {

Matrix symmetrized(const Matrix& x) { return 0.5 * (x + x.transpose()); }

Matrix quadratic_load(const LqoSystem& sys, const Matrix& p) {
  const Index n = sys.states();
  Matrix w = Matrix::Zero(n, n);
  for (const Matrix& mq : sys.quadratic()) w += mq * p * mq;
  return symmetrized(w);
}

Matrix reachability(const LqoSystem& sys, const LyapunovOptions& options) {
  return symmetrized(
      solve_lyapunov(sys.a().transpose(), sys.b() * sys.b().transpose(), options));
}

}  // namespace

GramianPair compute_gramians(const LqoSystem& sys, const LyapunovOptions& options) {
  GramianPair g;
  g.p = reachability(sys, options);
  g.q1 = symmetrized(solve_lyapunov(sys.a(), sys.c().transpose() * sys.c(), options));
  g.q2 = symmetrized(solve_lyapunov(sys.a(), quadratic_load(sys, g.p), options));
  g.q = g.q1 + g.q2;
  g.u = psd_sqrt_factor(g.p);
  g.l1 = psd_sqrt_factor(g.q1);
  g.l2 = psd_sqrt_factor(g.q2);
  g.l = psd_sqrt_factor(g.q);
  return g;
}

std::array<double, 3> gramian_residuals(const LqoSystem& sys, const GramianPair& g) {
  return {lyapunov_relative_residual(sys.a().transpose(), g.p, sys.b() * sys.b().transpose()),
          lyapunov_relative_residual(sys.a(), g.q1, sys.c().transpose() * sys.c()),
          lyapunov_relative_residual(sys.a(), g.q2, quadratic_load(sys, g.p))};
}

Vector hankel_singular_values(const GramianPair& g) {
  if (g.l.cols() == 0 || g.u.cols() == 0) return Vector();
  return svd(g.l.transpose() * g.u).singular_values;
}

BtProjection bt_projection(const GramianPair& g, Index r) {
  if (r < 1) throw std::invalid_argument("intrusive_bt: order must be >= 1");
  if (g.l.cols() == 0 || g.u.cols() == 0) {
    throw RankError("intrusive_bt: system has a zero Gramian");
  }
  SvdResult dec = svd(g.l.transpose() * g.u);
  normalize_svd_signs(dec);
  const Vector& s = dec.singular_values;
  if (r > s.size()) {
    throw RankError("intrusive_bt: order " + std::to_string(r) + " exceeds rank " +
                    std::to_string(s.size()));
  }
  if (!(s(r - 1) >= 1e-13 * s(0)) || s(0) <= 0.0) {
    throw RankError("intrusive_bt: sigma_" + std::to_string(r) + " is numerically zero");
  }
  if (r < s.size() && s(r - 1) - s(r) <= 1e-12 * s(0)) {
    std::clog << "warning: intrusive_bt: sigma_" << r << " and sigma_" << r + 1
              << " tie; truncation is not unique\n";
  }
  const Vector inv_sqrt = s.head(r).cwiseSqrt().cwiseInverse();
  BtProjection proj;
  proj.w = g.l * dec.left.leftCols(r) * inv_sqrt.asDiagonal();
  proj.v = g.u * dec.right.leftCols(r) * inv_sqrt.asDiagonal();
  proj.hsv = s;
  return proj;
}

ReducedLqoSystem intrusive_bt(const LqoSystem& sys, const GramianPair& g, Index r) {
  const BtProjection proj = bt_projection(g, r);
  std::vector<Matrix> mr;
  mr.reserve(sys.quadratic().size());
  for (const Matrix& mq : sys.quadratic()) mr.push_back(proj.v.transpose() * mq * proj.v);
  LqoSystem rom(proj.w.transpose() * sys.a() * proj.v, proj.w.transpose() * sys.b(),
                sys.c() * proj.v, std::move(mr));
  return ReducedLqoSystem(std::move(rom), RomMethod::IntrusiveBt);
}

ReducedLqoSystem intrusive_bt(const LqoSystem& sys, Index r) {
  return intrusive_bt(sys, compute_gramians(sys), r);
}

double h2_norm(const LqoSystem& sys) {
  const Matrix u = psd_sqrt_factor(reachability(sys, {}));
  if (u.cols() == 0) return 0.0;
  double total = (sys.c() * u).squaredNorm();
  for (const Matrix& mq : sys.quadratic()) total += (u.transpose() * mq * u).squaredNorm();
  return std::sqrt(total);
}

double h2_error(const LqoSystem& sys, const LqoSystem& rom) {
  if (sys.inputs() != rom.inputs() || sys.outputs() != rom.outputs()) {
    throw std::invalid_argument("h2_error: FOM and ROM have different input/output counts");
  }
  if (!rom.is_stable()) {
    throw UnstableRomError("h2_error: reduced model is unstable (spectral abscissa " +
                           std::to_string(spectral_abscissa(rom.a())) + ")");
  }
  const Index n = sys.states();
  const Index r = rom.states();
  Matrix a = Matrix::Zero(n + r, n + r);
  a.topLeftCorner(n, n) = sys.a();
  a.bottomRightCorner(r, r) = rom.a();
  Matrix b(n + r, sys.inputs());
  b << sys.b(), rom.b();
  Matrix c(sys.outputs(), n + r);
  c << sys.c(), -rom.c();
  std::vector<Matrix> m;
  for (Index q = 0; q < sys.outputs(); ++q) {
    Matrix mq = Matrix::Zero(n + r, n + r);
    mq.topLeftCorner(n, n) = sys.m(q);
    mq.bottomRightCorner(r, r) = -rom.m(q);
    m.push_back(std::move(mq));
  }
  return h2_norm(LqoSystem(std::move(a), std::move(b), std::move(c), std::move(m)));
}

}  // namespace lqo
