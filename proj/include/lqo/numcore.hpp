#pragma once

#include "lqo/types.hpp"

namespace lqo {

/// Matrix exponential exp(A t) by scaling and squaring with a diagonal
/// Padé approximant (degrees 3..13, chosen from the 1-norm of A t).
/// Throws std::invalid_argument on non-square or non-finite input.
Matrix expm(const Matrix& a, double t = 1.0);

struct LyapunovOptions {
  int max_iterations = 100;
  /// Relative residual that triggers a refinement sweep.
  double refine_tolerance = 1e-12;
  int max_refinements = 2;
};

/// Solves A^T X + X A + W = 0 for symmetric X with the Newton iteration for
/// the matrix sign function (determinant scaling). A must be Hurwitz.
///
/// The reachability equation A P + P A^T + B B^T = 0 is obtained by passing
/// A^T.  Throws UnstableSystemError if the iteration converges to a sign
/// other than -I, ConvergenceError if it stalls.
Matrix solve_lyapunov(const Matrix& a, const Matrix& w, const LyapunovOptions& options = {});

/// Frobenius norm of A^T X + X A + W.
double lyapunov_residual(const Matrix& a, const Matrix& x, const Matrix& w);

/// Relative residual ||A^T X + X A + W||_F / (2 ||A||_F ||X||_F + ||W||_F).
double lyapunov_relative_residual(const Matrix& a, const Matrix& x, const Matrix& w);

/// Rank-revealing square-root factor F (n x k) with F F^T = X for a
/// symmetric positive semidefinite X. Columns follow decreasing eigenvalues;
/// eigenvalues below 1e-13 * lambda_max are dropped, negative dust above
/// -1e-12 * ||X|| is clipped, anything more negative is an error.
Matrix psd_sqrt_factor(const Matrix& x);

struct SvdResult {
  Matrix left;              ///< Z, orthonormal columns
  Vector singular_values;   ///< S, nonincreasing
  Matrix right;             ///< Y, orthonormal columns
};

/// Thin SVD, M = Z diag(S) Y^T.
SvdResult svd(const Matrix& m);

/// Flips column pairs of (Z, Y) so the first entry of each column of Z whose
/// magnitude exceeds 1e-12 is positive.
void normalize_svd_signs(SvdResult& result);

/// Number of singular values above rtol * sigma_1 (0 for an all-zero input).
Index numerical_rank(const Vector& singular_values, double rtol);

/// Largest real part of the eigenvalues of A.
double spectral_abscissa(const Matrix& a);

}  // namespace lqo
