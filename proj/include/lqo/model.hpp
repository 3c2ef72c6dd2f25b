#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lqo/types.hpp"

namespace lqo {

/// Linear dynamics with a linear-plus-quadratic output,
///   x' = A x + B u,   y_q = (C x)_q + x^T M_q x,   q = 0..p-1.
///
/// Immutable after construction. Each M_q is stored symmetrized.
class LqoSystem {
 public:
  LqoSystem() = default;

  /// An empty `quadratic` list stands for M_q = 0 for every output.
  /// With `check_stability` the constructor computes the spectral abscissa
  /// of A and throws UnstableSystemError unless it is negative.
  LqoSystem(Matrix a, Matrix b, Matrix c, std::vector<Matrix> quadratic,
            bool check_stability = false);

  const Matrix& a() const { return a_; }
  const Matrix& b() const { return b_; }
  const Matrix& c() const { return c_; }
  const Matrix& m(Index q) const;
  const std::vector<Matrix>& quadratic() const { return m_; }

  Index states() const { return a_.rows(); }
  Index inputs() const { return b_.cols(); }
  Index outputs() const { return c_.rows(); }

  bool is_stable() const;

 private:
  Matrix a_, b_, c_;
  std::vector<Matrix> m_;
};

enum class RomMethod { IntrusiveBt, TimeQbt, FreqQbt };

std::string to_string(RomMethod method);

/// Order-r model produced by one of the reduction methods.
class ReducedLqoSystem : public LqoSystem {
 public:
  ReducedLqoSystem(LqoSystem system, RomMethod method);
  RomMethod method() const { return method_; }

 private:
  RomMethod method_;
};

/// Time samples in `times`; column k of `states` / `outputs` belongs to times[k].
struct Trajectory {
  std::vector<double> times;
  Matrix states;   ///< n x T
  Matrix outputs;  ///< p x T
};

/// C exp(A zeta) B, p x m.
Matrix eval_h1(const LqoSystem& sys, double zeta);
/// C A exp(A zeta) B.
Matrix eval_dh1(const LqoSystem& sys, double zeta);
/// B^T exp(A^T z1) M_q exp(A z2) B, m x m. q is 0-based.
Matrix eval_h2(const LqoSystem& sys, double z1, double z2, Index q);
/// Derivative of eval_h2 in its second argument.
Matrix eval_dh2_dz2(const LqoSystem& sys, double z1, double z2, Index q);

/// C (sI - A)^{-1} B. Throws FrequencyCollisionError if sI - A is singular.
CMatrix eval_H1(const LqoSystem& sys, Complex s);
/// B^T (s1 I - A^T)^{-1} M_q (s2 I - A)^{-1} B.
CMatrix eval_H2(const LqoSystem& sys, Complex s1, Complex s2, Index q);

/// (sI - A)^{-1} B, the building block of both transfer functions.
CMatrix resolvent_times_b(const LqoSystem& sys, Complex s);

/// y_q = (C x)_q + x^T M_q x for one state.
Vector output_of(const LqoSystem& sys, const Vector& x);

using InputSignal = std::function<Vector(double)>;

/// Classical RK4 on the given grid. An empty x0 means the zero state.
Trajectory simulate(const LqoSystem& sys, const InputSignal& u, const std::vector<double>& t_grid,
                    const Vector& x0 = Vector());

/// Uniform grid with `steps` intervals on [t0, t1].
std::vector<double> uniform_grid(double t0, double t1, Index steps);

}  // namespace lqo
