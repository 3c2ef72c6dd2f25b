#include "lqo/numcore.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "lqo/errors.hpp"

namespace lqo {

namespace {

void require_square(const Matrix& a, const char* who) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument(std::string(who) + ": matrix must be square");
  }
}

void require_finite(const Matrix& a, const char* who) {
  if (!a.allFinite()) {
    throw std::invalid_argument(std::string(who) + ": non-finite entries");
  }
}

double norm1(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

// Higham (2005) degree thresholds and Padé numerator coefficients.
constexpr std::array<double, 4> kPadeTheta{1.495585217958292e-2, 2.539398330063230e-1,
                                           9.504178996162932e-1, 2.097847961257068e0};
constexpr double kPadeTheta13 = 5.371920351148152e0;

Matrix pade_low(const Matrix& a, int degree) {
  static const std::vector<double> b3{120., 60., 12., 1.};
  static const std::vector<double> b5{30240., 15120., 3360., 420., 30., 1.};
  static const std::vector<double> b7{17297280., 8648640., 1995840., 277200.,
                                      25200.,    1512.,    56.,      1.};
  static const std::vector<double> b9{17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                                      2162160.,     110880.,     3960.,       90.,        1.};
  const std::vector<double>& b = degree == 3 ? b3 : degree == 5 ? b5 : degree == 7 ? b7 : b9;

  const Index n = a.rows();
  const Matrix ident = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  Matrix power = ident;
  Matrix u_inner = Matrix::Zero(n, n);
  Matrix v = Matrix::Zero(n, n);
  for (int k = 0; k <= degree; k += 2) {
    v += b[k] * power;
    u_inner += b[k + 1] * power;
    power = power * a2;
  }
  const Matrix u = a * u_inner;
  return (v - u).partialPivLu().solve(v + u);
}

Matrix pade13(const Matrix& a) {
  constexpr std::array<double, 14> b{64764752532480000., 32382376266240000., 7771770303897600.,
                                     1187353796428800.,  129060195264000.,   10559470521600.,
                                     670442572800.,      33522128640.,       1323241920.,
                                     40840800.,          960960.,            16380.,
                                     182.,               1.};
  const Index n = a.rows();
  const Matrix ident = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const Matrix u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                        b[3] * a2 + b[1] * ident);
  const Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 +
                   b[2] * a2 + b[0] * ident;
  return (v - u).partialPivLu().solve(v + u);
}

// E X + X E^T + W = 0 by the scaled sign iteration; returns X.
Matrix sign_lyapunov(const Matrix& e, const Matrix& w, int max_iterations) {
  const Index n = e.rows();
  Matrix ak = e;
  Matrix wk = w;
  bool scale = true;
  bool finishing = false;
  for (int it = 1; it <= max_iterations; ++it) {
    Eigen::PartialPivLU<Matrix> lu(ak);
    const Matrix inv = lu.inverse();
    if (!inv.allFinite()) {
      throw UnstableSystemError(
          "solve_lyapunov: singular sign iterate; A has eigenvalues on the imaginary axis");
    }
    double c = 1.0;
    if (scale) {
      const double log_det = lu.matrixLU().diagonal().cwiseAbs().array().log().sum();
      c = std::exp(log_det / static_cast<double>(n));
      if (!std::isfinite(c) || c <= 0.0) c = 1.0;
    }
    Matrix a_next = 0.5 * (ak / c + c * inv);
    Matrix w_next = 0.5 * (wk / c + c * (inv * wk * inv.transpose()));
    w_next = 0.5 * (w_next + w_next.transpose()).eval();
    if (!a_next.allFinite() || !w_next.allFinite()) {
      throw UnstableSystemError("solve_lyapunov: sign iteration diverged");
    }
    const double change = norm1(a_next - ak);
    const double size = norm1(a_next);
    ak = std::move(a_next);
    wk = std::move(w_next);
    if (finishing) {
      const double defect = norm1(ak + Matrix::Identity(n, n));
      if (defect > 1e-6 * static_cast<double>(n)) {
        throw UnstableSystemError("solve_lyapunov: A is not Hurwitz (sign(A) != -I)");
      }
      return 0.5 * wk;
    }
    if (change < 1e-2 * size) scale = false;
    if (change <= 1e-10 * size) finishing = true;
  }
  throw ConvergenceError("solve_lyapunov: sign iteration did not converge", max_iterations);
}

}  // namespace

Matrix expm(const Matrix& a, double t) {
  require_square(a, "expm");
  require_finite(a, "expm");
  if (!std::isfinite(t)) throw std::invalid_argument("expm: non-finite time");
  const Index n = a.rows();
  if (n == 0) return Matrix(0, 0);

  const Matrix at = a * t;
  const double norm = norm1(at);
  constexpr std::array<int, 4> degrees{3, 5, 7, 9};
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (norm <= kPadeTheta[i]) return pade_low(at, degrees[i]);
  }
  int squarings = 0;
  if (norm > kPadeTheta13) {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kPadeTheta13))));
  }
  Matrix r = pade13(at / std::ldexp(1.0, squarings));
  for (int s = 0; s < squarings; ++s) r = (r * r).eval();
  return r;
}

Matrix solve_lyapunov(const Matrix& a, const Matrix& w, const LyapunovOptions& options) {
  require_square(a, "solve_lyapunov");
  require_square(w, "solve_lyapunov");
  if (a.rows() != w.rows()) throw std::invalid_argument("solve_lyapunov: dimension mismatch");
  require_finite(a, "solve_lyapunov");
  require_finite(w, "solve_lyapunov");
  const Index n = a.rows();
  if (n == 0) return Matrix(0, 0);

  const Matrix w_sym = 0.5 * (w + w.transpose());
  if (w_sym.isZero(0.0)) return Matrix::Zero(n, n);

  const Matrix e = a.transpose();
  Matrix x = sign_lyapunov(e, w_sym, options.max_iterations);
  for (int k = 0; k < options.max_refinements; ++k) {
    Matrix residual = a.transpose() * x + x * a + w_sym;
    residual = 0.5 * (residual + residual.transpose()).eval();
    const double scale = 2.0 * a.norm() * x.norm() + w_sym.norm();
    if (residual.norm() <= options.refine_tolerance * scale) break;
    x += sign_lyapunov(e, residual, options.max_iterations);
    x = 0.5 * (x + x.transpose()).eval();
  }
  return x;
}

double lyapunov_residual(const Matrix& a, const Matrix& x, const Matrix& w) {
  return (a.transpose() * x + x * a + w).norm();
}

double lyapunov_relative_residual(const Matrix& a, const Matrix& x, const Matrix& w) {
  const double scale = 2.0 * a.norm() * x.norm() + w.norm();
  const double res = lyapunov_residual(a, x, w);
  return scale > 0.0 ? res / scale : res;
}

Matrix psd_sqrt_factor(const Matrix& x) {
  require_square(x, "psd_sqrt_factor");
  require_finite(x, "psd_sqrt_factor");
  const Index n = x.rows();
  if (n == 0) return Matrix(0, 0);

  const Matrix sym = 0.5 * (x + x.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) {
    throw NumericalError("psd_sqrt_factor: eigen-decomposition failed");
  }
  const Vector& lambda = es.eigenvalues();  // ascending
  const double spectral_norm = lambda.cwiseAbs().maxCoeff();
  if (lambda.minCoeff() < -1e-12 * spectral_norm) {
    throw NumericalError("psd_sqrt_factor: matrix is indefinite (min eigenvalue " +
                                std::to_string(lambda.minCoeff()) + ")");
  }
  const double lambda_max = std::max(lambda.maxCoeff(), 0.0);
  Index rank = 0;
  if (lambda_max > 0.0) {
    for (Index i = 0; i < n; ++i) {
      if (lambda(i) > 1e-13 * lambda_max) ++rank;
    }
  }
  // Descending eigenvalues; exact ties keep the solver's order, so X = I gives F = I.
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return lambda(i) > lambda(j); });
  Matrix f(n, rank);
  for (Index k = 0; k < rank; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    f.col(k) = es.eigenvectors().col(src) * std::sqrt(lambda(src));
    Index pivot = 0;
    f.col(k).cwiseAbs().maxCoeff(&pivot);
    if (f(pivot, k) < 0.0) f.col(k) = -f.col(k);
  }
  return f;
}

SvdResult svd(const Matrix& m) {
  require_finite(m, "svd");
  SvdResult out;
  if (m.size() == 0) {
    const Index k = std::min(m.rows(), m.cols());
    out.left = Matrix::Zero(m.rows(), k);
    out.singular_values = Vector::Zero(k);
    out.right = Matrix::Zero(m.cols(), k);
    return out;
  }
  Eigen::BDCSVD<Matrix> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.left = dec.matrixU();
  out.singular_values = dec.singularValues();
  out.right = dec.matrixV();
  return out;
}

void normalize_svd_signs(SvdResult& result) {
  for (Index j = 0; j < result.left.cols(); ++j) {
    for (Index i = 0; i < result.left.rows(); ++i) {
      const double v = result.left(i, j);
      if (std::abs(v) > 1e-12) {
        if (v < 0.0) {
          result.left.col(j) = -result.left.col(j);
          result.right.col(j) = -result.right.col(j);
        }
        break;
      }
    }
  }
}

Index numerical_rank(const Vector& singular_values, double rtol) {
  if (singular_values.size() == 0) return 0;
  const double top = singular_values.maxCoeff();
  if (!(top > 0.0)) return 0;
  Index rank = 0;
  for (Index i = 0; i < singular_values.size(); ++i) {
    if (singular_values(i) > rtol * top) ++rank;
  }
  return rank;
}

double spectral_abscissa(const Matrix& a) {
  require_square(a, "spectral_abscissa");
  if (a.rows() == 0) return -std::numeric_limits<double>::infinity();
  Eigen::EigenSolver<Matrix> es(a, false);
  if (es.info() != Eigen::Success) {
    throw NumericalError("spectral_abscissa: eigenvalue computation failed");
  }
  return es.eigenvalues().real().maxCoeff();
}

}  // namespace lqo
