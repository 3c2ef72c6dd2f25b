#pragma once

#include <memory>
#include <vector>

#include "lqo/dataset.hpp"

namespace lqo {

/// The five data matrices QBT works from. With implicit quadrature factors
/// U~ (n x N_p m) and L~ they equal
///   hankel = L~^T U~,  shifted = L~^T A U~,  input = L~^T B,
///   output = C U~,     quadratic[q] = U~^T M_q U~,
/// but are built from samples alone.
///
/// Row layout of hankel / shifted / input: N_q linear blocks (p rows each),
/// then for every output q the quadratic blocks (m rows each) with block
/// index N_q * k + j, k over the rule_p axis and j over the rule_q axis.
struct DataMatrices {
  Matrix hankel;
  Matrix shifted;
  Matrix input;
  Matrix output;
  std::vector<Matrix> quadratic;
};

struct ComplexDataMatrices {
  CMatrix hankel;
  CMatrix shifted;
  CMatrix input;
  CMatrix output;
  std::vector<CMatrix> quadratic;
};

/// Time-domain builders.
Matrix build_hankel(const KernelDataset& ds);
Matrix build_shifted_hankel(const KernelDataset& ds);

struct ProjectedData {
  Matrix input;
  Matrix output;
  std::vector<Matrix> quadratic;
};
ProjectedData build_projections(const KernelDataset& ds);

/// All five time-domain matrices; scalar entries become p x m or m x m
/// blocks for MIMO data.
DataMatrices assemble_time_matrices(const KernelDataset& ds);

/// Frequency-domain matrices from divided differences of transfer-function
/// samples, kept complex.
ComplexDataMatrices assemble_freq_matrices(const KernelDataset& ds);

/// Maps each conjugate pair (x, conj x) of rows and of columns to
/// (sqrt2 Re x, sqrt2 Im x). The unitary change of basis leaves the
/// singular values and the reduced model unchanged and makes both real.
/// Requires a conjugate-closed dataset.
DataMatrices realify(const ComplexDataMatrices& data, const KernelDataset& ds);

/// Time-domain or realified frequency-domain matrices.
DataMatrices assemble_data_matrices(const KernelDataset& ds);

/// Rows of hankel / shifted / input in independent groups. The Gram path of
/// QBT only needs sums over rows, so groups may come in any order.
class RowSliceSource {
 public:
  virtual ~RowSliceSource() = default;
  virtual Index columns() const = 0;
  virtual Index slice_count() const = 0;
  virtual void slice(Index index, Matrix& hankel, Matrix& shifted, Matrix& input) const = 0;
  virtual Matrix output() const = 0;
  virtual std::vector<Matrix> quadratic() const = 0;
};

/// Streams the rows of a dataset without materializing the full matrices;
/// deferred shifted families are sampled slice by slice.
std::unique_ptr<RowSliceSource> make_slice_source(const KernelDataset& ds);

/// Slices of already assembled matrices, `rows_per_slice` rows at a time.
std::unique_ptr<RowSliceSource> make_slice_source(const DataMatrices& data, Index rows_per_slice);

/// Total row count of hankel for a dataset (time or frequency).
Index data_rows(const KernelDataset& ds);

}  // namespace lqo
