#pragma once

#include <array>

#include "lqo/model.hpp"
#include "lqo/numcore.hpp"

namespace lqo {

/// Reachability Gramian P, observability parts Q1 (linear output) and Q2
/// (quadratic outputs), Q = Q1 + Q2, and their square-root factors.
struct GramianPair {
  Matrix p, q1, q2, q;
  Matrix u;   ///< U U^T = P
  Matrix l1;  ///< L1 L1^T = Q1
  Matrix l2;  ///< L2 L2^T = Q2
  Matrix l;   ///< L L^T = Q
};

/// Solves
///   A P + P A^T + B B^T = 0,
///   A^T Q1 + Q1 A + C^T C = 0,
///   A^T Q2 + Q2 A + sum_q M_q P M_q = 0.
GramianPair compute_gramians(const LqoSystem& sys, const LyapunovOptions& options = {});

/// Relative residuals of the three equations above, in that order.
std::array<double, 3> gramian_residuals(const LqoSystem& sys, const GramianPair& g);

/// Singular values of L^T U, nonincreasing.
Vector hankel_singular_values(const GramianPair& g);

/// Square-root balanced truncation to order r. Writes a warning to
/// std::clog when sigma_r and sigma_{r+1} tie.
ReducedLqoSystem intrusive_bt(const LqoSystem& sys, Index r);
ReducedLqoSystem intrusive_bt(const LqoSystem& sys, const GramianPair& g, Index r);

/// Petrov-Galerkin bases of the truncation; W^T V = I_r.
struct BtProjection {
  Matrix w;
  Matrix v;
  Vector hsv;
};
BtProjection bt_projection(const GramianPair& g, Index r);

/// L2 norm of the kernel pair (h1, h2), i.e. sqrt(trace(B^T Q B)).
/// Evaluated as sqrt(||C U||_F^2 + sum_q ||U^T M_q U||_F^2) with P = U U^T;
/// the factored form keeps small error norms accurate where the trace
/// would cancel.
double h2_norm(const LqoSystem& sys);

/// h2_norm of the error system diag(A, A_r), [B; B_r], [C, -C_r],
/// diag(M_q, -M_rq). Throws UnstableRomError if the ROM is not Hurwitz.
double h2_error(const LqoSystem& sys, const LqoSystem& rom);

}  // namespace lqo
