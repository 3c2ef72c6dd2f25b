#include "lqo/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/LU>

#include "lqo/errors.hpp"
#include "lqo/numcore.hpp"

namespace lqo {

namespace {

void require_time(double zeta, const char* who) {
  if (!(zeta >= 0.0) || !std::isfinite(zeta)) {
    throw std::invalid_argument(std::string(who) + ": time argument must be finite and >= 0");
  }
}

void require_output(const LqoSystem& sys, Index q, const char* who) {
  if (q < 0 || q >= sys.outputs()) {
    throw std::out_of_range(std::string(who) + ": output index " + std::to_string(q) +
                            " out of range [0, " + std::to_string(sys.outputs()) + ")");
  }
}

}  // namespace

LqoSystem::LqoSystem(Matrix a, Matrix b, Matrix c, std::vector<Matrix> quadratic,
                     bool check_stability)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), m_(std::move(quadratic)) {
  const Index n = a_.rows();
  if (a_.cols() != n) throw std::invalid_argument("LqoSystem: A must be square");
  if (n < 1) throw std::invalid_argument("LqoSystem: state dimension must be positive");
  if (b_.rows() != n) throw std::invalid_argument("LqoSystem: B must have n rows");
  if (c_.cols() != n) throw std::invalid_argument("LqoSystem: C must have n columns");
  if (b_.cols() < 1 || c_.rows() < 1) {
    throw std::invalid_argument("LqoSystem: need at least one input and one output");
  }
  if (m_.empty()) m_.assign(static_cast<std::size_t>(c_.rows()), Matrix::Zero(n, n));
  if (static_cast<Index>(m_.size()) != c_.rows()) {
    throw std::invalid_argument("LqoSystem: need one quadratic matrix per output");
  }
  for (Matrix& mq : m_) {
    if (mq.rows() != n || mq.cols() != n) {
      throw std::invalid_argument("LqoSystem: quadratic matrices must be n x n");
    }
    mq = (0.5 * (mq + mq.transpose())).eval();
  }
  bool finite = a_.allFinite() && b_.allFinite() && c_.allFinite();
  for (const Matrix& mq : m_) finite = finite && mq.allFinite();
  if (!finite) throw std::invalid_argument("LqoSystem: non-finite entries");
  if (check_stability && !is_stable()) {
    throw UnstableSystemError("LqoSystem: A is not Hurwitz (spectral abscissa " +
                              std::to_string(spectral_abscissa(a_)) + ")");
  }
}

const Matrix& LqoSystem::m(Index q) const {
  require_output(*this, q, "LqoSystem::m");
  return m_[static_cast<std::size_t>(q)];
}

bool LqoSystem::is_stable() const { return spectral_abscissa(a_) < 0.0; }

std::string to_string(RomMethod method) {
  switch (method) {
    case RomMethod::IntrusiveBt: return "bt";
    case RomMethod::TimeQbt: return "qbt-time";
    case RomMethod::FreqQbt: return "qbt-freq";
  }
  return "unknown";
}

ReducedLqoSystem::ReducedLqoSystem(LqoSystem system, RomMethod method)
    : LqoSystem(std::move(system)), method_(method) {}

Matrix eval_h1(const LqoSystem& sys, double zeta) {
  require_time(zeta, "eval_h1");
  return sys.c() * (expm(sys.a(), zeta) * sys.b());
}

Matrix eval_dh1(const LqoSystem& sys, double zeta) {
  require_time(zeta, "eval_dh1");
  return sys.c() * (sys.a() * (expm(sys.a(), zeta) * sys.b()));
}

Matrix eval_h2(const LqoSystem& sys, double z1, double z2, Index q) {
  require_time(z1, "eval_h2");
  require_time(z2, "eval_h2");
  require_output(sys, q, "eval_h2");
  const Matrix left = expm(sys.a(), z1) * sys.b();
  const Matrix right = expm(sys.a(), z2) * sys.b();
  return left.transpose() * sys.m(q) * right;
}

Matrix eval_dh2_dz2(const LqoSystem& sys, double z1, double z2, Index q) {
  require_time(z1, "eval_dh2_dz2");
  require_time(z2, "eval_dh2_dz2");
  require_output(sys, q, "eval_dh2_dz2");
  const Matrix left = expm(sys.a(), z1) * sys.b();
  const Matrix right = sys.a() * (expm(sys.a(), z2) * sys.b());
  return left.transpose() * sys.m(q) * right;
}

CMatrix resolvent_times_b(const LqoSystem& sys, Complex s) {
  CMatrix shifted = -sys.a().cast<Complex>();
  shifted.diagonal().array() += s;
  Eigen::PartialPivLU<CMatrix> lu(shifted);
  const double rcond = lu.rcond();
  if (!(rcond > 1e2 * std::numeric_limits<double>::epsilon())) {
    throw FrequencyCollisionError("sI - A is singular at s = (" + std::to_string(s.real()) +
                                  ", " + std::to_string(s.imag()) + ")");
  }
  return lu.solve(sys.b().cast<Complex>());
}

CMatrix eval_H1(const LqoSystem& sys, Complex s) {
  return sys.c().cast<Complex>() * resolvent_times_b(sys, s);
}

CMatrix eval_H2(const LqoSystem& sys, Complex s1, Complex s2, Index q) {
  require_output(sys, q, "eval_H2");
  const CMatrix left = resolvent_times_b(sys, s1);
  const CMatrix right = resolvent_times_b(sys, s2);
  return left.transpose() * sys.m(q).cast<Complex>() * right;
}

Vector output_of(const LqoSystem& sys, const Vector& x) {
  Vector y = sys.c() * x;
  for (Index q = 0; q < sys.outputs(); ++q) y(q) += x.dot(sys.m(q) * x);
  return y;
}

Trajectory simulate(const LqoSystem& sys, const InputSignal& u, const std::vector<double>& t_grid,
                    const Vector& x0) {
  if (t_grid.empty()) throw std::invalid_argument("simulate: empty time grid");
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    if (!(t_grid[k] > t_grid[k - 1])) {
      throw std::invalid_argument("simulate: time grid must be strictly increasing");
    }
  }
  const Index n = sys.states();
  Vector x = x0.size() == 0 ? Vector::Zero(n) : x0;
  if (x.size() != n) throw std::invalid_argument("simulate: x0 has wrong dimension");

  const auto input = [&](double t) {
    Vector v = u(t);
    if (v.size() != sys.inputs()) throw std::invalid_argument("simulate: input has wrong size");
    return v;
  };
  const auto rhs = [&](double t, const Vector& state) -> Vector {
    return sys.a() * state + sys.b() * input(t);
  };

  const Index steps = static_cast<Index>(t_grid.size());
  Trajectory traj;
  traj.times = t_grid;
  traj.states.resize(n, steps);
  traj.outputs.resize(sys.outputs(), steps);
  traj.states.col(0) = x;
  traj.outputs.col(0) = output_of(sys, x);
  for (Index k = 1; k < steps; ++k) {
    const double t = t_grid[static_cast<std::size_t>(k - 1)];
    const double h = t_grid[static_cast<std::size_t>(k)] - t;
    const Vector k1 = rhs(t, x);
    const Vector k2 = rhs(t + 0.5 * h, x + 0.5 * h * k1);
    const Vector k3 = rhs(t + 0.5 * h, x + 0.5 * h * k2);
    const Vector k4 = rhs(t + h, x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    traj.states.col(k) = x;
    traj.outputs.col(k) = output_of(sys, x);
  }
  return traj;
}

std::vector<double> uniform_grid(double t0, double t1, Index steps) {
  if (steps < 1 || !(t1 > t0)) throw std::invalid_argument("uniform_grid: need t1 > t0, steps >= 1");
  std::vector<double> grid(static_cast<std::size_t>(steps + 1));
  for (Index k = 0; k <= steps; ++k) {
    grid[static_cast<std::size_t>(k)] = t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(steps);
  }
  return grid;
}

}  // namespace lqo
