#include "lqo/synth.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lqo {

double NormalStream::uniform() {
  // 53 random bits, shifted off zero.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double NormalStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Matrix tridiag_121(Index n) {
  Matrix t = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    t(i, i) = 2.0;
    if (i + 1 < n) t(i, i + 1) = t(i + 1, i) = 1.0;
  }
  return t;
}

namespace {

double log_spaced(double from, double to, Index k, Index count) {
  if (count == 1) return from;
  const double s = static_cast<double>(k) / static_cast<double>(count - 1);
  return std::exp(std::log(from) + s * (std::log(to) - std::log(from)));
}

}  // namespace

LqoSystem synth_system(const SynthOptions& o) {
  if (o.n < 1 || o.m < 1 || o.p < 1) throw std::invalid_argument("synth: sizes must be positive");
  if (!(o.omega_min > 0.0) || !(o.omega_max >= o.omega_min) || !(o.damping_min > 0.0) ||
      !(o.damping_max > 0.0)) {
    throw std::invalid_argument("synth: frequency and damping ranges must be positive");
  }
  const Index blocks = o.n / 2;
  Matrix a = Matrix::Zero(o.n, o.n);
  for (Index k = 0; k < blocks; ++k) {
    const double w = log_spaced(o.omega_min, o.omega_max, k, blocks);
    const double z = log_spaced(o.damping_max, o.damping_min, k, blocks);
    const double decay = z * w;
    a.block(2 * k, 2 * k, 2, 2) << -decay, w, -w, -decay;
  }
  if (o.n % 2 == 1) a(o.n - 1, o.n - 1) = -o.omega_min * o.damping_max;

  NormalStream rng(o.seed);
  Matrix b(o.n, o.m), c(o.p, o.n);
  for (Index j = 0; j < o.m; ++j) {
    for (Index i = 0; i < o.n; ++i) b(i, j) = rng.next();
  }
  for (Index i = 0; i < o.p; ++i) {
    for (Index j = 0; j < o.n; ++j) c(i, j) = rng.next();
  }
  std::vector<Matrix> m(static_cast<std::size_t>(o.p), tridiag_121(o.n));
  return LqoSystem(std::move(a), std::move(b), std::move(c), std::move(m));
}

LqoSystem select_channels(const LqoSystem& sys, Index m, Index p) {
  if (m < 1 || m > sys.inputs() || p < 1 || p > sys.outputs()) {
    throw std::invalid_argument("select_channels: channel counts out of range");
  }
  std::vector<Matrix> quadratic(sys.quadratic().begin(), sys.quadratic().begin() + p);
  return LqoSystem(sys.a(), sys.b().leftCols(m), sys.c().topRows(p), std::move(quadratic));
}

}  // namespace lqo
