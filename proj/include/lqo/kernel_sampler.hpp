#pragma once

#include <map>
#include <memory>
#include <mutex>

#include "lqo/model.hpp"

namespace lqo {

/// Black-box access to the time-domain kernels of an LQO system. This is
/// everything the data-driven reduction is allowed to see.
///
/// The batched methods have serial default implementations built on the
/// scalar ones; oracles backed by a realization override them.
class TimeKernelSampler {
 public:
  virtual ~TimeKernelSampler() = default;

  virtual Index inputs() const = 0;
  virtual Index outputs() const = 0;

  virtual Matrix h1(double zeta) const = 0;
  virtual Matrix dh1(double zeta) const = 0;
  virtual Matrix h2(double z1, double z2, Index q) const = 0;
  virtual Matrix dh2_dz2(double z1, double z2, Index q) const = 0;

  /// p x (len * m); block i is h1(shift + zetas_i), or dh1 with `derivative`.
  virtual Matrix h1_row(const Vector& zetas, double shift, bool derivative) const;

  /// (len(first) * m) x (len(second) * m); block (k, i) is
  /// h2_q(first_k, shift + second_i), or its z2-derivative.
  virtual Matrix h2_grid(const Vector& first, const Vector& second, double shift, Index q,
                         bool derivative) const;
};

/// Black-box access to the transfer functions H1(s), H2(s1, s2).
class TransferSampler {
 public:
  virtual ~TransferSampler() = default;

  virtual Index inputs() const = 0;
  virtual Index outputs() const = 0;

  virtual CMatrix transfer_h1(Complex s) const = 0;
  virtual CMatrix transfer_h2(Complex s1, Complex s2, Index q) const = 0;

  /// (len(first) * m) x (len(second) * m); block (k, l) is H2_q(first_k, second_l).
  virtual CMatrix transfer_h2_grid(const CVector& first, const CVector& second, Index q) const;
};

/// Kernel oracle backed by a known realization. Caches exp(A zeta) B per
/// node; thread-safe.
class SystemSampler final : public TimeKernelSampler, public TransferSampler {
 public:
  explicit SystemSampler(LqoSystem sys);

  const LqoSystem& system() const { return sys_; }

  Index inputs() const override { return sys_.inputs(); }
  Index outputs() const override { return sys_.outputs(); }

  Matrix h1(double zeta) const override;
  Matrix dh1(double zeta) const override;
  Matrix h2(double z1, double z2, Index q) const override;
  Matrix dh2_dz2(double z1, double z2, Index q) const override;
  Matrix h1_row(const Vector& zetas, double shift, bool derivative) const override;
  Matrix h2_grid(const Vector& first, const Vector& second, double shift, Index q,
                 bool derivative) const override;

  CMatrix transfer_h1(Complex s) const override;
  CMatrix transfer_h2(Complex s1, Complex s2, Index q) const override;
  CMatrix transfer_h2_grid(const CVector& first, const CVector& second, Index q) const override;

 private:
  /// exp(A zeta) B, cached.
  Matrix propagated(double zeta) const;
  Matrix propagated(const Vector& zetas) const;

  LqoSystem sys_;
  mutable std::mutex mutex_;
  mutable std::map<double, Matrix> cache_;
};

/// Replaces the derivative samples of another sampler with central
/// differences of its plain samples, step = relative_step * node (forward
/// differences at node 0).
class FiniteDifferenceSampler final : public TimeKernelSampler {
 public:
  explicit FiniteDifferenceSampler(std::shared_ptr<const TimeKernelSampler> base,
                                   double relative_step = 1e-6);

  Index inputs() const override { return base_->inputs(); }
  Index outputs() const override { return base_->outputs(); }

  Matrix h1(double zeta) const override { return base_->h1(zeta); }
  Matrix dh1(double zeta) const override;
  Matrix h2(double z1, double z2, Index q) const override { return base_->h2(z1, z2, q); }
  Matrix dh2_dz2(double z1, double z2, Index q) const override;

 private:
  std::shared_ptr<const TimeKernelSampler> base_;
  double relative_step_;
};

}  // namespace lqo
