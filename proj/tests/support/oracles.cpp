#include "oracles.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

namespace oracle {

lqo::LqoSystem scalar_s1() {
  return lqo::LqoSystem(Matrix::Constant(1, 1, -1.0), Matrix::Ones(1, 1), Matrix::Ones(1, 1),
                        {Matrix::Ones(1, 1)});
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

namespace {

Matrix gaussian(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> dist;
  Matrix x(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) x(i, j) = dist(rng);
  }
  return x;
}

}  // namespace

lqo::LqoSystem random_stable(std::mt19937_64& rng, Index n, Index m, Index p) {
  const Matrix g = gaussian(rng, n, n);
  const Matrix k = gaussian(rng, n, n);
  Matrix a = -(g * g.transpose() / static_cast<double>(n) + 0.5 * Matrix::Identity(n, n)) +
             0.5 * (k - k.transpose());
  std::vector<Matrix> quadratic;
  for (Index q = 0; q < p; ++q) {
    const Matrix x = gaussian(rng, n, n);
    quadratic.push_back(0.25 * (x + x.transpose()));
  }
  return lqo::LqoSystem(std::move(a), gaussian(rng, n, m), gaussian(rng, p, n), std::move(quadratic));
}

lqo::QuadratureRule random_rule(std::mt19937_64& rng, Index n, double lo, double hi) {
  std::vector<double> nodes;
  for (Index i = 0; i < n; ++i) nodes.push_back(std::exp(uniform(rng, std::log(lo), std::log(hi))));
  std::sort(nodes.begin(), nodes.end());
  Vector weights(n);
  for (Index i = 0; i < n; ++i) weights(i) = uniform(rng, 0.1, 2.0);
  return lqo::make_rule(Eigen::Map<Vector>(nodes.data(), n), weights, lqo::RuleKind::LogTrapezoid);
}

Matrix series_expm(const Matrix& a, double t) {
  Matrix x = a * t;
  int squarings = 0;
  const double norm = x.cwiseAbs().rowwise().sum().maxCoeff();
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  x /= std::ldexp(1.0, squarings);
  Matrix sum = Matrix::Identity(a.rows(), a.cols());
  Matrix term = sum;
  for (int k = 1; k <= 30; ++k) {
    term = term * x / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

Matrix kron_lyapunov(const Matrix& a, const Matrix& w) {
  const Index n = a.rows();
  const Matrix id = Matrix::Identity(n, n);
  Matrix op = Matrix::Zero(n * n, n * n);
  // vec(A^T X + X A) = (I kron A^T + A^T kron I) vec(X)
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      op.block(i * n, j * n, n, n) += id(i, j) * a.transpose();
      op.block(i * n, j * n, n, n) += a(j, i) * id;
    }
  }
  const Vector rhs = -Eigen::Map<const Vector>(w.data(), n * n);
  const Vector x = op.fullPivLu().solve(rhs);
  return Eigen::Map<const Matrix>(x.data(), n, n);
}

TimeFactors time_factors(const lqo::LqoSystem& sys, const lqo::NodeAxis& t,
                         const lqo::NodeAxis& tau) {
  const Index n = sys.states();
  const Index m = sys.inputs();
  const Index p = sys.outputs();
  const Index np = t.size();
  const Index nq = tau.size();
  TimeFactors f;
  f.u.resize(n, np * m);
  for (Index i = 0; i < np; ++i) {
    f.u.middleCols(i * m, m) = t.sqrt_weights(i) * series_expm(sys.a(), t.nodes(i)) * sys.b();
  }
  f.l.resize(n, nq * p + p * np * nq * m);
  for (Index j = 0; j < nq; ++j) {
    f.l.middleCols(j * p, p) =
        tau.sqrt_weights(j) * series_expm(sys.a().transpose(), tau.nodes(j)) * sys.c().transpose();
  }
  for (Index q = 0; q < p; ++q) {
    for (Index k = 0; k < np; ++k) {
      for (Index j = 0; j < nq; ++j) {
        const Index col = nq * p + q * np * nq * m + (nq * k + j) * m;
        f.l.middleCols(col, m) = tau.sqrt_weights(j) * t.sqrt_weights(k) *
                                 series_expm(sys.a().transpose(), tau.nodes(j)) * sys.m(q) *
                                 series_expm(sys.a(), t.nodes(k)) * sys.b();
      }
    }
  }
  return f;
}

FreqFactors freq_factors(const lqo::LqoSystem& sys, const lqo::NodeAxis& theta,
                         const lqo::NodeAxis& s) {
  const Index n = sys.states();
  const Index m = sys.inputs();
  const Index p = sys.outputs();
  const Index np = theta.size();
  const Index nq = s.size();
  const CMatrix a = sys.a().cast<Complex>();
  const CMatrix id = CMatrix::Identity(n, n);
  const auto resolvent = [&](double w) {
    return CMatrix((Complex(0.0, w) * id - a).fullPivLu().inverse());
  };
  const CMatrix b = sys.b().cast<Complex>();
  const CMatrix c = sys.c().cast<Complex>();
  FreqFactors f;
  f.u.resize(n, np * m);
  for (Index l = 0; l < np; ++l) f.u.middleCols(l * m, m) = theta.sqrt_weights(l) * resolvent(theta.nodes(l)) * b;
  f.lt.resize(nq * p + p * np * nq * m, n);
  for (Index k = 0; k < nq; ++k) f.lt.middleRows(k * p, p) = s.sqrt_weights(k) * c * resolvent(s.nodes(k));
  for (Index q = 0; q < p; ++q) {
    const CMatrix mq = sys.m(q).cast<Complex>();
    for (Index k = 0; k < np; ++k) {
      const CMatrix left = (resolvent(theta.nodes(k)) * b).transpose() * mq;
      for (Index j = 0; j < nq; ++j) {
        const Index row = nq * p + q * np * nq * m + (nq * k + j) * m;
        f.lt.middleRows(row, m) =
            s.sqrt_weights(j) * theta.sqrt_weights(k) * left * resolvent(s.nodes(j));
      }
    }
  }
  return f;
}

double scaled_error(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) return INFINITY;
  if (x.size() == 0) return 0.0;
  return (x - y).cwiseAbs().maxCoeff() / (1.0 + y.cwiseAbs().maxCoeff());
}

double scaled_error(const CMatrix& x, const CMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) return INFINITY;
  if (x.size() == 0) return 0.0;
  return (x - y).cwiseAbs().maxCoeff() / (1.0 + y.cwiseAbs().maxCoeff());
}

}  // namespace oracle
