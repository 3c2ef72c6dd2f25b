#pragma once

#include <vector>

#include "lqo/data_matrices.hpp"
#include "lqo/model.hpp"

namespace lqo {

/// How the SVD of the data Hankel matrix is obtained.
///  Dense: materialize it and run a thin SVD.
///  Gram:  stream row slices, accumulate H^T H, H^T M and H^T h, and
///         eigen-decompose the Gram matrix. Needs memory independent of the
///         row count, at the price of resolving singular values only down to
///         about 1e-7 sigma_1.
enum class SvdPath { Auto, Dense, Gram };

struct QbtOptions {
  SvdPath path = SvdPath::Auto;
  /// Auto uses the dense path while the Hankel matrix has at most this many entries.
  Index dense_limit = Index(1) << 23;
  /// Parallel Gram accumulation (deterministic: fixed chunking, ordered reduction).
  bool parallel = true;
};

/// Square-root balancing from data. Computes the SVD once; reduce() then
/// truncates at any admissible order.
class QbtReducer {
 public:
  /// Dense path on assembled matrices.
  static QbtReducer from_matrices(const DataMatrices& data, RomMethod method);
  /// Gram path over row slices.
  static QbtReducer from_slices(const RowSliceSource& source, RomMethod method,
                                bool parallel = true);
  /// Serial Gram accumulation, slice by slice in order (reference for tests).
  static QbtReducer from_slices_serial(const RowSliceSource& source, RomMethod method);

  /// Singular values of the data Hankel matrix, nonincreasing.
  const Vector& singular_values() const { return singular_values_; }
  bool used_gram() const { return gram_; }

  /// Count of singular values above rtol * sigma_1; rtol is raised to the
  /// path's resolution, below which the Gram path returns rounding noise.
  Index numerical_rank(double rtol = 1e-10) const;

  /// Largest order reduce() accepts.
  Index max_order() const;

  /// Order-r model. Throws RankError if r exceeds the column count or
  /// sigma_r falls below the path's resolution.
  ReducedLqoSystem reduce(Index r) const;

 private:
  QbtReducer() = default;
  static QbtReducer from_gram(const Matrix& gram, const Matrix& shifted, const Matrix& input,
                              const RowSliceSource& source, RomMethod method);
  void finish_projections(const Matrix& right, const Matrix& output,
                          const std::vector<Matrix>& quadratic);

  RomMethod method_ = RomMethod::TimeQbt;
  bool gram_ = false;
  Vector singular_values_;
  // With H = Z S Y^T: Z^T M Y, Z^T h, g Y, Y^T K_q Y (all leading columns).
  Matrix core_a_;
  Matrix core_b_;
  Matrix core_c_;
  std::vector<Matrix> core_m_;
};

/// Reducer for a dataset; picks the path from options and the data size.
QbtReducer make_qbt_reducer(const KernelDataset& ds, const QbtOptions& options = {});

/// One-shot data-driven balanced truncation of a dataset to order r.
ReducedLqoSystem lqo_qbt(const KernelDataset& ds, Index r, const QbtOptions& options = {});

}  // namespace lqo
