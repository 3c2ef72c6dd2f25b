#include "lqo/qbt.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "lqo/errors.hpp"
#include "lqo/numcore.hpp"

namespace lqo {

namespace {

// Singular values below these fractions of sigma_1 are not trusted.
constexpr double kDenseResolution = 1e-13;
constexpr double kGramResolution = 1e-7;

// Fixed number of partial sums in the parallel Gram accumulation, so the
// result does not depend on the thread count.
constexpr Index kGramChunks = 8;

/// Makes the first entry of each column of `right` above 1e-12 in magnitude
/// positive, flipping the matching column of `left` if given.
void normalize_right_signs(Matrix& right, Matrix* left) {
  for (Index j = 0; j < right.cols(); ++j) {
    for (Index i = 0; i < right.rows(); ++i) {
      if (std::abs(right(i, j)) > 1e-12) {
        if (right(i, j) < 0.0) {
          right.col(j) = -right.col(j);
          if (left != nullptr) left->col(j) = -left->col(j);
        }
        break;
      }
    }
  }
}

struct GramSums {
  Matrix gram;     // H^T H
  Matrix shifted;  // H^T M
  Matrix input;    // H^T h
};

GramSums zero_sums(Index cols, Index inputs) {
  return {Matrix::Zero(cols, cols), Matrix::Zero(cols, cols), Matrix::Zero(cols, inputs)};
}

Index input_count(const RowSliceSource& source) {
  Matrix h, m, hv;
  source.slice(0, h, m, hv);
  return hv.cols();
}

}  // namespace

QbtReducer QbtReducer::from_matrices(const DataMatrices& data, RomMethod method) {
  const Index cols = data.hankel.cols();
  if (data.shifted.rows() != data.hankel.rows() || data.shifted.cols() != cols ||
      data.input.rows() != data.hankel.rows() || data.output.cols() != cols) {
    throw std::invalid_argument("QbtReducer: data matrices have inconsistent shapes");
  }
  SvdResult dec = svd(data.hankel);
  normalize_right_signs(dec.right, &dec.left);
  QbtReducer out;
  out.method_ = method;
  out.gram_ = false;
  out.singular_values_ = dec.singular_values;
  out.core_a_ = dec.left.transpose() * data.shifted * dec.right;
  out.core_b_ = dec.left.transpose() * data.input;
  out.finish_projections(dec.right, data.output, data.quadratic);
  return out;
}

QbtReducer QbtReducer::from_slices(const RowSliceSource& source, RomMethod method, bool parallel) {
  const Index cols = source.columns();
  const Index inputs = input_count(source);
  const Index count = source.slice_count();
  const Index chunks = std::min(count, kGramChunks);
  std::vector<GramSums> partial(static_cast<std::size_t>(chunks));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(chunks));

#pragma omp parallel for schedule(dynamic, 1) if (parallel)
  for (Index c = 0; c < chunks; ++c) {
    try {
      GramSums sums = zero_sums(cols, inputs);
      Matrix h, m, hv;
      for (Index s = c * count / chunks; s < (c + 1) * count / chunks; ++s) {
        source.slice(s, h, m, hv);
        sums.gram.selfadjointView<Eigen::Lower>().rankUpdate(h.transpose());
        sums.shifted.noalias() += h.transpose() * m;
        sums.input.noalias() += h.transpose() * hv;
      }
      partial[static_cast<std::size_t>(c)] = std::move(sums);
    } catch (...) {
      errors[static_cast<std::size_t>(c)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  GramSums total = zero_sums(cols, inputs);
  for (const GramSums& sums : partial) {
    total.gram += sums.gram;
    total.shifted += sums.shifted;
    total.input += sums.input;
  }
  total.gram = total.gram.selfadjointView<Eigen::Lower>();

  return from_gram(total.gram, total.shifted, total.input, source, method);
}

QbtReducer QbtReducer::from_slices_serial(const RowSliceSource& source, RomMethod method) {
  // Same algebra as from_slices with plain products in slice order.
  const Index cols = source.columns();
  GramSums total = zero_sums(cols, input_count(source));
  Matrix h, m, hv;
  for (Index s = 0; s < source.slice_count(); ++s) {
    source.slice(s, h, m, hv);
    total.gram += h.transpose() * h;
    total.shifted += h.transpose() * m;
    total.input += h.transpose() * hv;
  }
  total.gram = (0.5 * (total.gram + total.gram.transpose())).eval();

  return from_gram(total.gram, total.shifted, total.input, source, method);
}

QbtReducer QbtReducer::from_gram(const Matrix& gram, const Matrix& shifted, const Matrix& input,
                                 const RowSliceSource& source, RomMethod method) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  if (es.info() != Eigen::Success) throw NumericalError("QbtReducer: Gram eigensolver failed");
  const Vector lambda = es.eigenvalues().reverse();
  Matrix right = es.eigenvectors().rowwise().reverse();
  normalize_right_signs(right, nullptr);

  QbtReducer out;
  out.method_ = method;
  out.gram_ = true;
  out.singular_values_ = lambda.cwiseMax(0.0).cwiseSqrt();
  const Vector& s = out.singular_values_;
  // Z^T X = S^{-1} Y^T (H^T X) for the trusted singular triplets.
  Vector inv_s = Vector::Zero(s.size());
  for (Index i = 0; i < s.size(); ++i) {
    if (s(0) > 0.0 && s(i) >= kGramResolution * s(0)) inv_s(i) = 1.0 / s(i);
  }
  out.core_a_ = inv_s.asDiagonal() * (right.transpose() * shifted * right);
  out.core_b_ = inv_s.asDiagonal() * (right.transpose() * input);
  out.finish_projections(right, source.output(), source.quadratic());
  return out;
}

void QbtReducer::finish_projections(const Matrix& right, const Matrix& output,
                                    const std::vector<Matrix>& quadratic) {
  if (output.cols() != right.rows()) {
    throw std::invalid_argument("QbtReducer: output data has the wrong column count");
  }
  core_c_ = output * right;
  core_m_.clear();
  for (const Matrix& k : quadratic) {
    if (k.rows() != right.rows() || k.cols() != right.rows()) {
      throw std::invalid_argument("QbtReducer: quadratic data has the wrong shape");
    }
    core_m_.push_back(right.transpose() * k * right);
  }
  if (static_cast<Index>(core_m_.size()) != output.rows()) {
    throw std::invalid_argument("QbtReducer: need one quadratic data matrix per output");
  }
}

Index QbtReducer::numerical_rank(double rtol) const {
  const double resolution = gram_ ? kGramResolution : kDenseResolution;
  return lqo::numerical_rank(singular_values_, std::max(rtol, resolution));
}

Index QbtReducer::max_order() const {
  const double resolution = gram_ ? kGramResolution : kDenseResolution;
  return lqo::numerical_rank(singular_values_, resolution * (1.0 - 1e-15));
}

ReducedLqoSystem QbtReducer::reduce(Index r) const {
  if (r < 1) throw std::invalid_argument("qbt: order must be >= 1");
  if (r > singular_values_.size()) {
    throw RankError("qbt: order " + std::to_string(r) + " exceeds the " +
                    std::to_string(singular_values_.size()) + " columns of the data matrix");
  }
  if (r > max_order()) {
    throw RankError("qbt: data matrix is rank deficient at order " + std::to_string(r) +
                    " (numerical rank " + std::to_string(max_order()) + ")");
  }
  const Vector d = singular_values_.head(r).cwiseSqrt().cwiseInverse();
  const auto scale = d.asDiagonal();
  Matrix a = scale * core_a_.topLeftCorner(r, r) * scale;
  Matrix b = scale * core_b_.topRows(r);
  Matrix c = core_c_.leftCols(r) * scale;
  std::vector<Matrix> m;
  for (const Matrix& core : core_m_) m.push_back(scale * core.topLeftCorner(r, r) * scale);
  return ReducedLqoSystem(LqoSystem(std::move(a), std::move(b), std::move(c), std::move(m)),
                          method_);
}

QbtReducer make_qbt_reducer(const KernelDataset& ds, const QbtOptions& options) {
  const RomMethod method = ds.domain == Domain::Time ? RomMethod::TimeQbt : RomMethod::FreqQbt;
  bool dense = options.path == SvdPath::Dense;
  if (options.path == SvdPath::Auto) {
    dense = data_rows(ds) * ds.axis_p.size() * ds.m <= options.dense_limit;
  }
  if (dense) return QbtReducer::from_matrices(assemble_data_matrices(ds), method);
  const auto source = make_slice_source(ds);
  return QbtReducer::from_slices(*source, method, options.parallel);
}

ReducedLqoSystem lqo_qbt(const KernelDataset& ds, Index r, const QbtOptions& options) {
  return make_qbt_reducer(ds, options).reduce(r);
}

}  // namespace lqo
