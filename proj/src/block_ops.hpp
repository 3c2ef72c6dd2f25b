#pragma once

#include <stdexcept>
#include <string>

#include "lqo/data_matrices.hpp"

namespace lqo::detail {

/// Multiplies block row r (height row_block) by row_scale(r) and block
/// column c (width col_block) by col_scale(c).
template <class Mat>
void scale_blocks(Mat& x, Index row_block, const Vector& row_scale, Index col_block,
                  const Vector& col_scale) {
  for (Index r = 0; r < row_scale.size(); ++r) {
    x.middleRows(r * row_block, row_block) *= row_scale(r);
  }
  for (Index c = 0; c < col_scale.size(); ++c) {
    x.middleCols(c * col_block, col_block) *= col_scale(c);
  }
}

inline void require_domain(const KernelDataset& ds, Domain domain, const char* who) {
  if (ds.domain != domain) {
    throw std::invalid_argument(std::string(who) + ": expected a " + to_string(domain) +
                                "-domain dataset, got " + to_string(ds.domain));
  }
}

inline void require_shape(bool ok, const char* who, const char* family) {
  if (!ok) {
    throw std::invalid_argument(std::string(who) + ": inconsistent block shapes in " + family);
  }
}

std::unique_ptr<RowSliceSource> make_freq_slice_source(const KernelDataset& ds);
void validate_freq(const KernelDataset& ds, const char* who);

}  // namespace lqo::detail
