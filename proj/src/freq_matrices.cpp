#include <cmath>
#include <numbers>
#include <stdexcept>

#include "block_ops.hpp"
#include "lqo/data_matrices.hpp"
#include "lqo/errors.hpp"

namespace lqo {

namespace detail {

void validate_freq(const KernelDataset& ds, const char* who) {
  require_domain(ds, Domain::Frequency, who);
  const Index np = ds.axis_p.size();
  const Index nq = ds.axis_q.size();
  const Index m = ds.m;
  const Index p = ds.p;
  const FreqSamples& f = ds.freq;
  require_shape(np > 0 && nq > 0 && m > 0 && p > 0, who, "dataset header");
  require_shape(f.h1_s.rows() == p && f.h1_s.cols() == nq * m, who, "H1 at s");
  require_shape(f.h1_theta.rows() == p && f.h1_theta.cols() == np * m, who, "H1 at theta");
  require_shape(static_cast<Index>(f.h2_theta_s.size()) == p &&
                    static_cast<Index>(f.h2_theta_theta.size()) == p,
                who, "H2 families");
  for (Index q = 0; q < p; ++q) {
    const auto uq = static_cast<std::size_t>(q);
    require_shape(f.h2_theta_s[uq].rows() == np * m && f.h2_theta_s[uq].cols() == nq * m, who,
                  "H2 at (theta, s)");
    require_shape(f.h2_theta_theta[uq].rows() == np * m && f.h2_theta_theta[uq].cols() == np * m,
                  who, "H2 at (theta, theta)");
  }
  if (ds.conjugate_closed) require_shape(np % 2 == 0 && nq % 2 == 0, who, "conjugate pairs");
}

}  // namespace detail

namespace {

using detail::scale_blocks;

const Complex kI(0.0, 1.0);

/// -(f(a) - f(b)) / (a - b), or -(a f(a) - b f(b)) / (a - b) for the shifted variant.
CMatrix divided_difference(const CMatrix& fa, Complex a, const CMatrix& fb, Complex b,
                           bool shifted) {
  const Complex gap = a - b;
  if (std::abs(gap) == 0.0) {
    throw FrequencyCollisionError("divided difference at coinciding nodes");
  }
  CMatrix out = shifted ? CMatrix(-(a * fa - b * fb) / gap) : CMatrix(-(fa - fb) / gap);
  if (!out.allFinite()) throw FrequencyCollisionError("non-finite divided difference");
  return out;
}

/// Block (k, l): divided difference between H1(i s_k) and H1(i theta_l).
CMatrix linear_rows(const KernelDataset& ds, bool shifted) {
  const Index np = ds.axis_p.size();
  const Index nq = ds.axis_q.size();
  const Index m = ds.m;
  const Index p = ds.p;
  CMatrix x(nq * p, np * m);
  for (Index k = 0; k < nq; ++k) {
    const CMatrix hs = ds.freq.h1_s.middleCols(k * m, m);
    for (Index l = 0; l < np; ++l) {
      x.block(k * p, l * m, p, m) =
          divided_difference(hs, kI * ds.axis_q.nodes(k), ds.freq.h1_theta.middleCols(l * m, m),
                             kI * ds.axis_p.nodes(l), shifted);
    }
  }
  scale_blocks(x, p, ds.axis_q.sqrt_weights, m, ds.axis_p.sqrt_weights);
  return x;
}

CMatrix linear_input(const KernelDataset& ds) {
  const Index nq = ds.axis_q.size();
  const Index m = ds.m;
  const Index p = ds.p;
  CMatrix x(nq * p, m);
  for (Index k = 0; k < nq; ++k) x.middleRows(k * p, p) = ds.freq.h1_s.middleCols(k * m, m);
  scale_blocks(x, p, ds.axis_q.sqrt_weights, m, Vector());
  return x;
}

/// Rows (k, j), j = 0..N_q-1, for fixed output q and theta index k.
CMatrix quadratic_rows(const KernelDataset& ds, Index q, Index k, bool shifted) {
  const Index np = ds.axis_p.size();
  const Index nq = ds.axis_q.size();
  const Index m = ds.m;
  const CMatrix& ts = ds.freq.h2_theta_s[static_cast<std::size_t>(q)];
  const CMatrix& tt = ds.freq.h2_theta_theta[static_cast<std::size_t>(q)];
  CMatrix x(nq * m, np * m);
  for (Index j = 0; j < nq; ++j) {
    const CMatrix at_s = ts.block(k * m, j * m, m, m);
    for (Index l = 0; l < np; ++l) {
      x.block(j * m, l * m, m, m) =
          divided_difference(at_s, kI * ds.axis_q.nodes(j), tt.block(k * m, l * m, m, m),
                             kI * ds.axis_p.nodes(l), shifted);
    }
  }
  scale_blocks(x, m, ds.axis_q.sqrt_weights * ds.axis_p.sqrt_weights(k), m, ds.axis_p.sqrt_weights);
  return x;
}

CMatrix quadratic_input(const KernelDataset& ds, Index q, Index k) {
  const Index nq = ds.axis_q.size();
  const Index m = ds.m;
  const CMatrix& ts = ds.freq.h2_theta_s[static_cast<std::size_t>(q)];
  CMatrix x(nq * m, m);
  for (Index j = 0; j < nq; ++j) x.middleRows(j * m, m) = ts.block(k * m, j * m, m, m);
  scale_blocks(x, m, ds.axis_q.sqrt_weights * ds.axis_p.sqrt_weights(k), m, Vector());
  return x;
}

template <class SliceFn>
CMatrix stacked(const KernelDataset& ds, Index cols, const CMatrix& linear, SliceFn&& slice) {
  const Index np = ds.axis_p.size();
  const Index nq = ds.axis_q.size();
  const Index m = ds.m;
  CMatrix out(data_rows(ds), cols);
  out.topRows(linear.rows()) = linear;
  for (Index q = 0; q < ds.p; ++q) {
    for (Index k = 0; k < np; ++k) {
      out.middleRows(linear.rows() + (q * np + k) * nq * m, nq * m) = slice(q, k);
    }
  }
  return out;
}

// Partner maps: index of the conjugate of every row / column.

std::vector<Index> pair_partner(Index blocks, Index block) {
  std::vector<Index> partner(static_cast<std::size_t>(blocks * block));
  for (Index b = 0; b < blocks; ++b) {
    for (Index o = 0; o < block; ++o) {
      partner[static_cast<std::size_t>(b * block + o)] = (b ^ 1) * block + o;
    }
  }
  return partner;
}

/// Rows (k, j) of `k_count` consecutive theta indices starting at an even k.
std::vector<Index> quadratic_partner(Index k_count, Index nq, Index m) {
  std::vector<Index> partner(static_cast<std::size_t>(k_count * nq * m));
  for (Index k = 0; k < k_count; ++k) {
    for (Index j = 0; j < nq; ++j) {
      for (Index o = 0; o < m; ++o) {
        partner[static_cast<std::size_t>((k * nq + j) * m + o)] = ((k ^ 1) * nq + (j ^ 1)) * m + o;
      }
    }
  }
  return partner;
}

std::vector<Index> full_row_partner(const KernelDataset& ds) {
  const Index np = ds.axis_p.size();
  const Index nq = ds.axis_q.size();
  std::vector<Index> partner = pair_partner(nq, ds.p);
  const std::vector<Index> quad = quadratic_partner(np, nq, ds.m);
  for (Index q = 0; q < ds.p; ++q) {
    const Index base = nq * ds.p + q * np * nq * ds.m;
    for (Index r : quad) partner.push_back(base + r);
  }
  return partner;
}

/// (x, conj x) -> (sqrt2 Re x, sqrt2 Im x) on rows.
CMatrix pair_rows(const CMatrix& x, const std::vector<Index>& partner) {
  CMatrix out = x;
  const double h = std::numbers::sqrt2 / 2.0;
  for (Index r = 0; r < x.rows(); ++r) {
    const Index s = partner[static_cast<std::size_t>(r)];
    if (s <= r) continue;
    out.row(r) = h * (x.row(r) + x.row(s));
    out.row(s) = (kI * h) * (x.row(s) - x.row(r));
  }
  return out;
}

CMatrix pair_cols(const CMatrix& x, const std::vector<Index>& partner) {
  CMatrix out = x;
  const double h = std::numbers::sqrt2 / 2.0;
  for (Index c = 0; c < x.cols(); ++c) {
    const Index s = partner[static_cast<std::size_t>(c)];
    if (s <= c) continue;
    out.col(c) = h * (x.col(c) + x.col(s));
    out.col(s) = (kI * h) * (x.col(s) - x.col(c));
  }
  return out;
}

void require_closure(const KernelDataset& ds, const char* who) {
  if (!ds.conjugate_closed) {
    throw std::invalid_argument(std::string(who) +
                                ": real data matrices need a conjugate-closed frequency dataset");
  }
}

class FreqSliceSource final : public RowSliceSource {
 public:
  explicit FreqSliceSource(const KernelDataset& ds)
      : ds_(ds),
        col_partner_(pair_partner(ds.axis_p.size(), ds.m)),
        linear_partner_(pair_partner(ds.axis_q.size(), ds.p)),
        pair_partner_(quadratic_partner(2, ds.axis_q.size(), ds.m)) {}

  Index columns() const override { return ds_.axis_p.size() * ds_.m; }
  Index slice_count() const override { return 1 + ds_.p * (ds_.axis_p.size() / 2); }

  void slice(Index index, Matrix& hankel, Matrix& shifted, Matrix& input) const override {
    if (index == 0) {
      hankel = real_rows(linear_rows(ds_, false), linear_partner_, true);
      shifted = real_rows(linear_rows(ds_, true), linear_partner_, true);
      input = real_rows(linear_input(ds_), linear_partner_, false);
      return;
    }
    const Index pairs = ds_.axis_p.size() / 2;
    const Index q = (index - 1) / pairs;
    const Index k = 2 * ((index - 1) % pairs);
    const auto two = [&](auto&& fn) {
      CMatrix first = fn(k);
      CMatrix both(2 * first.rows(), first.cols());
      both << first, fn(k + 1);
      return both;
    };
    hankel = real_rows(two([&](Index kk) { return quadratic_rows(ds_, q, kk, false); }),
                       pair_partner_, true);
    shifted = real_rows(two([&](Index kk) { return quadratic_rows(ds_, q, kk, true); }),
                        pair_partner_, true);
    input = real_rows(two([&](Index kk) { return quadratic_input(ds_, q, kk); }), pair_partner_,
                      false);
  }

  Matrix output() const override { return realified().output; }
  std::vector<Matrix> quadratic() const override { return realified().quadratic; }

 private:
  Matrix real_rows(const CMatrix& x, const std::vector<Index>& rows, bool cols) const {
    CMatrix y = pair_rows(x, rows);
    if (cols) y = pair_cols(y, col_partner_);
    return y.real();
  }

  DataMatrices realified() const {
    ComplexDataMatrices small;
    small.output = ds_.freq.h1_theta;
    scale_blocks(small.output, ds_.p, Vector(), ds_.m, ds_.axis_p.sqrt_weights);
    DataMatrices out;
    out.output = pair_cols(small.output, col_partner_).real();
    for (const CMatrix& grid : ds_.freq.h2_theta_theta) {
      CMatrix k = grid;
      scale_blocks(k, ds_.m, ds_.axis_p.sqrt_weights, ds_.m, ds_.axis_p.sqrt_weights);
      k = pair_cols(pair_rows(k, col_partner_), col_partner_);
      Matrix kr = k.real();
      out.quadratic.push_back(0.5 * (kr + kr.transpose()));
    }
    return out;
  }

  const KernelDataset& ds_;
  std::vector<Index> col_partner_;
  std::vector<Index> linear_partner_;
  std::vector<Index> pair_partner_;
};

}  // namespace

ComplexDataMatrices assemble_freq_matrices(const KernelDataset& ds) {
  detail::validate_freq(ds, "assemble_freq_matrices");
  const Index cols = ds.axis_p.size() * ds.m;
  ComplexDataMatrices out;
  out.hankel = stacked(ds, cols, linear_rows(ds, false),
                       [&](Index q, Index k) { return quadratic_rows(ds, q, k, false); });
  out.shifted = stacked(ds, cols, linear_rows(ds, true),
                        [&](Index q, Index k) { return quadratic_rows(ds, q, k, true); });
  out.input = stacked(ds, ds.m, linear_input(ds),
                      [&](Index q, Index k) { return quadratic_input(ds, q, k); });
  out.output = ds.freq.h1_theta;
  scale_blocks(out.output, ds.p, Vector(), ds.m, ds.axis_p.sqrt_weights);
  for (const CMatrix& grid : ds.freq.h2_theta_theta) {
    CMatrix k = grid;
    scale_blocks(k, ds.m, ds.axis_p.sqrt_weights, ds.m, ds.axis_p.sqrt_weights);
    out.quadratic.push_back(0.5 * (k + k.transpose()));
  }
  return out;
}

DataMatrices realify(const ComplexDataMatrices& data, const KernelDataset& ds) {
  detail::validate_freq(ds, "realify");
  require_closure(ds, "realify");
  const std::vector<Index> rows = full_row_partner(ds);
  const std::vector<Index> cols = pair_partner(ds.axis_p.size(), ds.m);
  DataMatrices out;
  out.hankel = pair_cols(pair_rows(data.hankel, rows), cols).real();
  out.shifted = pair_cols(pair_rows(data.shifted, rows), cols).real();
  out.input = pair_rows(data.input, rows).real();
  out.output = pair_cols(data.output, cols).real();
  for (const CMatrix& k : data.quadratic) {
    Matrix kr = pair_cols(pair_rows(k, cols), cols).real();
    out.quadratic.push_back(0.5 * (kr + kr.transpose()));
  }
  return out;
}

namespace detail {

std::unique_ptr<RowSliceSource> make_freq_slice_source(const KernelDataset& ds) {
  validate_freq(ds, "make_slice_source");
  require_closure(ds, "make_slice_source");
  return std::make_unique<FreqSliceSource>(ds);
}

}  // namespace detail

}  // namespace lqo
