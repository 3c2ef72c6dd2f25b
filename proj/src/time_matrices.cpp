#include <algorithm>
#include <stdexcept>

#include "block_ops.hpp"
#include "lqo/data_matrices.hpp"

namespace lqo {

namespace {

using detail::require_shape;
using detail::scale_blocks;

void validate_time(const KernelDataset& ds, const char* who) {
  detail::require_domain(ds, Domain::Time, who);
  const Index np = ds.axis_p.size();
  const Index nq = ds.axis_q.size();
  const Index m = ds.m;
  const Index p = ds.p;
  const TimeSamples& s = ds.time;
  require_shape(np > 0 && nq > 0 && m > 0 && p > 0, who, "dataset header");
  require_shape(s.h1_sum.rows() == nq * p && s.h1_sum.cols() == np * m, who, "h1 at t + tau");
  require_shape(s.dh1_sum.rows() == nq * p && s.dh1_sum.cols() == np * m, who, "dh1 at t + tau");
  require_shape(s.h1_tau.rows() == nq * p && s.h1_tau.cols() == m, who, "h1 at tau");
  require_shape(s.h1_t.rows() == p && s.h1_t.cols() == np * m, who, "h1 at t");
  require_shape(static_cast<Index>(s.h2_tau.size()) == p && static_cast<Index>(s.h2_tt.size()) == p,
                who, "h2 families");
  for (Index q = 0; q < p; ++q) {
    const auto uq = static_cast<std::size_t>(q);
    require_shape(s.h2_tau[uq].rows() == np * m && s.h2_tau[uq].cols() == nq * m, who, "h2 at (t, tau)");
    require_shape(s.h2_tt[uq].rows() == np * m && s.h2_tt[uq].cols() == np * m, who, "h2 at (t, t)");
  }
  if (ds.shifted_stored()) {
    require_shape(static_cast<Index>(s.h2_shift.size()) == p &&
                      static_cast<Index>(s.dh2_shift.size()) == p,
                  who, "shifted h2 families");
    for (Index q = 0; q < p; ++q) {
      const auto uq = static_cast<std::size_t>(q);
      require_shape(static_cast<Index>(s.h2_shift[uq].size()) == nq &&
                        static_cast<Index>(s.dh2_shift[uq].size()) == nq,
                    who, "shifted h2 families");
      for (Index j = 0; j < nq; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        require_shape(s.h2_shift[uq][uj].rows() == np * m && s.h2_shift[uq][uj].cols() == np * m &&
                          s.dh2_shift[uq][uj].rows() == np * m &&
                          s.dh2_shift[uq][uj].cols() == np * m,
                      who, "shifted h2 families");
      }
    }
  } else if (!ds.deferred) {
    throw std::invalid_argument(std::string(who) + ": dataset lacks the shifted h2 samples");
  }
}

Matrix linear_rows(const KernelDataset& ds, bool derivative) {
  Matrix x = derivative ? ds.time.dh1_sum : ds.time.h1_sum;
  scale_blocks(x, ds.p, ds.axis_q.sqrt_weights, ds.m, ds.axis_p.sqrt_weights);
  return x;
}

Matrix linear_input(const KernelDataset& ds) {
  Matrix x = ds.time.h1_tau;
  scale_blocks(x, ds.p, ds.axis_q.sqrt_weights, ds.m, Vector());
  return x;
}

/// Rows (k, j) for fixed q and j, k = 0..N_p-1: phi_j rho_k rho_i h2_q(t_k, tau_j + t_i).
Matrix quadratic_rows(const KernelDataset& ds, Index q, Index j, bool derivative) {
  Matrix x = ds.shifted_grid(j, q, derivative);
  scale_blocks(x, ds.m, ds.axis_p.sqrt_weights * ds.axis_q.sqrt_weights(j), ds.m,
               ds.axis_p.sqrt_weights);
  return x;
}

Matrix quadratic_input(const KernelDataset& ds, Index q, Index j) {
  Matrix x = ds.time.h2_tau[static_cast<std::size_t>(q)].middleCols(j * ds.m, ds.m);
  scale_blocks(x, ds.m, ds.axis_p.sqrt_weights * ds.axis_q.sqrt_weights(j), ds.m, Vector());
  return x;
}

/// Fills the quadratic part of a stacked matrix, scattering the (q, j)
/// slices into the row order N_q * k + j.
template <class SliceFn>
void scatter_quadratic(const KernelDataset& ds, Matrix& out, SliceFn&& slice) {
  const Index np = ds.axis_p.size();
  const Index nq = ds.axis_q.size();
  const Index m = ds.m;
  const Index linear = nq * ds.p;
  for (Index q = 0; q < ds.p; ++q) {
    const Index offset = linear + q * np * nq * m;
    for (Index j = 0; j < nq; ++j) {
      const Matrix rows = slice(q, j);
      for (Index k = 0; k < np; ++k) {
        out.middleRows(offset + (nq * k + j) * m, m) = rows.middleRows(k * m, m);
      }
    }
  }
}

Matrix stacked(const KernelDataset& ds, bool derivative) {
  Matrix out(data_rows(ds), ds.axis_p.size() * ds.m);
  out.topRows(ds.axis_q.size() * ds.p) = linear_rows(ds, derivative);
  scatter_quadratic(ds, out, [&](Index q, Index j) { return quadratic_rows(ds, q, j, derivative); });
  return out;
}

class TimeSliceSource final : public RowSliceSource {
 public:
  explicit TimeSliceSource(const KernelDataset& ds) : ds_(ds) {}

  Index columns() const override { return ds_.axis_p.size() * ds_.m; }
  Index slice_count() const override { return 1 + ds_.p * ds_.axis_q.size(); }

  void slice(Index index, Matrix& hankel, Matrix& shifted, Matrix& input) const override {
    if (index == 0) {
      hankel = linear_rows(ds_, false);
      shifted = linear_rows(ds_, true);
      input = linear_input(ds_);
      return;
    }
    const Index q = (index - 1) / ds_.axis_q.size();
    const Index j = (index - 1) % ds_.axis_q.size();
    hankel = quadratic_rows(ds_, q, j, false);
    shifted = quadratic_rows(ds_, q, j, true);
    input = quadratic_input(ds_, q, j);
  }

  Matrix output() const override { return build_projections(ds_).output; }
  std::vector<Matrix> quadratic() const override { return build_projections(ds_).quadratic; }

 private:
  const KernelDataset& ds_;
};

class DenseSliceSource final : public RowSliceSource {
 public:
  DenseSliceSource(const DataMatrices& data, Index rows_per_slice)
      : data_(data), rows_(std::max<Index>(rows_per_slice, 1)) {}

  Index columns() const override { return data_.hankel.cols(); }
  Index slice_count() const override { return (data_.hankel.rows() + rows_ - 1) / rows_; }

  void slice(Index index, Matrix& hankel, Matrix& shifted, Matrix& input) const override {
    const Index start = index * rows_;
    const Index count = std::min(rows_, data_.hankel.rows() - start);
    hankel = data_.hankel.middleRows(start, count);
    shifted = data_.shifted.middleRows(start, count);
    input = data_.input.middleRows(start, count);
  }

  Matrix output() const override { return data_.output; }
  std::vector<Matrix> quadratic() const override { return data_.quadratic; }

 private:
  const DataMatrices& data_;
  Index rows_;
};

}  // namespace

Index data_rows(const KernelDataset& ds) {
  return ds.axis_q.size() * ds.p + ds.p * ds.axis_p.size() * ds.axis_q.size() * ds.m;
}

Matrix build_hankel(const KernelDataset& ds) {
  validate_time(ds, "build_hankel");
  return stacked(ds, false);
}

Matrix build_shifted_hankel(const KernelDataset& ds) {
  validate_time(ds, "build_shifted_hankel");
  return stacked(ds, true);
}

ProjectedData build_projections(const KernelDataset& ds) {
  validate_time(ds, "build_projections");
  ProjectedData out;
  out.input.resize(data_rows(ds), ds.m);
  out.input.topRows(ds.axis_q.size() * ds.p) = linear_input(ds);
  scatter_quadratic(ds, out.input, [&](Index q, Index j) { return quadratic_input(ds, q, j); });

  out.output = ds.time.h1_t;
  scale_blocks(out.output, ds.p, Vector(), ds.m, ds.axis_p.sqrt_weights);
  for (const Matrix& grid : ds.time.h2_tt) {
    Matrix k = grid;
    scale_blocks(k, ds.m, ds.axis_p.sqrt_weights, ds.m, ds.axis_p.sqrt_weights);
    out.quadratic.push_back(0.5 * (k + k.transpose()));
  }
  return out;
}

DataMatrices assemble_time_matrices(const KernelDataset& ds) {
  validate_time(ds, "assemble_time_matrices");
  ProjectedData proj = build_projections(ds);
  DataMatrices out;
  out.hankel = stacked(ds, false);
  out.shifted = stacked(ds, true);
  out.input = std::move(proj.input);
  out.output = std::move(proj.output);
  out.quadratic = std::move(proj.quadratic);
  return out;
}

DataMatrices assemble_data_matrices(const KernelDataset& ds) {
  if (ds.domain == Domain::Time) return assemble_time_matrices(ds);
  return realify(assemble_freq_matrices(ds), ds);
}

std::unique_ptr<RowSliceSource> make_slice_source(const KernelDataset& ds) {
  if (ds.domain == Domain::Frequency) return detail::make_freq_slice_source(ds);
  validate_time(ds, "make_slice_source");
  return std::make_unique<TimeSliceSource>(ds);
}

std::unique_ptr<RowSliceSource> make_slice_source(const DataMatrices& data, Index rows_per_slice) {
  return std::make_unique<DenseSliceSource>(data, rows_per_slice);
}

}  // namespace lqo
