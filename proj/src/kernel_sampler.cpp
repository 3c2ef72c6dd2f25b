#include "lqo/kernel_sampler.hpp"

#include <stdexcept>

#include "lqo/numcore.hpp"

namespace lqo {

Matrix TimeKernelSampler::h1_row(const Vector& zetas, double shift, bool derivative) const {
  const Index m = inputs();
  Matrix row(outputs(), zetas.size() * m);
  for (Index i = 0; i < zetas.size(); ++i) {
    row.middleCols(i * m, m) = derivative ? dh1(shift + zetas(i)) : h1(shift + zetas(i));
  }
  return row;
}

Matrix TimeKernelSampler::h2_grid(const Vector& first, const Vector& second, double shift,
                                  Index q, bool derivative) const {
  const Index m = inputs();
  Matrix grid(first.size() * m, second.size() * m);
  for (Index k = 0; k < first.size(); ++k) {
    for (Index i = 0; i < second.size(); ++i) {
      grid.block(k * m, i * m, m, m) = derivative ? dh2_dz2(first(k), shift + second(i), q)
                                                  : h2(first(k), shift + second(i), q);
    }
  }
  return grid;
}

CMatrix TransferSampler::transfer_h2_grid(const CVector& first, const CVector& second,
                                          Index q) const {
  const Index m = inputs();
  CMatrix grid(first.size() * m, second.size() * m);
  for (Index k = 0; k < first.size(); ++k) {
    for (Index l = 0; l < second.size(); ++l) {
      grid.block(k * m, l * m, m, m) = transfer_h2(first(k), second(l), q);
    }
  }
  return grid;
}

SystemSampler::SystemSampler(LqoSystem sys) : sys_(std::move(sys)) {}

Matrix SystemSampler::propagated(double zeta) const {
  if (!(zeta >= 0.0)) throw std::invalid_argument("kernel sampled at negative time");
  {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto it = cache_.find(zeta);
    if (it != cache_.end()) return it->second;
  }
  Matrix value = expm(sys_.a(), zeta) * sys_.b();
  std::lock_guard<std::mutex> lock(mutex_);
  return cache_.emplace(zeta, std::move(value)).first->second;
}

Matrix SystemSampler::propagated(const Vector& zetas) const {
  const Index m = sys_.inputs();
  Matrix out(sys_.states(), zetas.size() * m);
  for (Index i = 0; i < zetas.size(); ++i) out.middleCols(i * m, m) = propagated(zetas(i));
  return out;
}

Matrix SystemSampler::h1(double zeta) const { return sys_.c() * propagated(zeta); }

Matrix SystemSampler::dh1(double zeta) const { return sys_.c() * (sys_.a() * propagated(zeta)); }

Matrix SystemSampler::h2(double z1, double z2, Index q) const {
  return propagated(z1).transpose() * sys_.m(q) * propagated(z2);
}

Matrix SystemSampler::dh2_dz2(double z1, double z2, Index q) const {
  return propagated(z1).transpose() * sys_.m(q) * (sys_.a() * propagated(z2));
}

Matrix SystemSampler::h1_row(const Vector& zetas, double shift, bool derivative) const {
  if (!(shift >= 0.0)) throw std::invalid_argument("kernel sampled at negative time");
  Matrix right = propagated(zetas);
  if (shift != 0.0) right = expm(sys_.a(), shift) * right;
  if (derivative) right = sys_.a() * right;
  return sys_.c() * right;
}

Matrix SystemSampler::h2_grid(const Vector& first, const Vector& second, double shift, Index q,
                              bool derivative) const {
  if (!(shift >= 0.0)) throw std::invalid_argument("kernel sampled at negative time");
  Matrix right = propagated(second);
  if (shift != 0.0) right = expm(sys_.a(), shift) * right;
  if (derivative) right = sys_.a() * right;
  return propagated(first).transpose() * (sys_.m(q) * right);
}

CMatrix SystemSampler::transfer_h1(Complex s) const { return eval_H1(sys_, s); }

CMatrix SystemSampler::transfer_h2(Complex s1, Complex s2, Index q) const {
  return eval_H2(sys_, s1, s2, q);
}

CMatrix SystemSampler::transfer_h2_grid(const CVector& first, const CVector& second,
                                        Index q) const {
  const Index m = sys_.inputs();
  const auto stack = [&](const CVector& nodes) {
    CMatrix out(sys_.states(), nodes.size() * m);
    for (Index k = 0; k < nodes.size(); ++k) {
      out.middleCols(k * m, m) = resolvent_times_b(sys_, nodes(k));
    }
    return out;
  };
  const CMatrix left = stack(first);
  const CMatrix right = stack(second);
  return left.transpose() * (sys_.m(q).cast<Complex>() * right);
}

FiniteDifferenceSampler::FiniteDifferenceSampler(std::shared_ptr<const TimeKernelSampler> base,
                                                 double relative_step)
    : base_(std::move(base)), relative_step_(relative_step) {
  if (!base_) throw std::invalid_argument("FiniteDifferenceSampler: null base sampler");
  if (!(relative_step_ > 0.0)) {
    throw std::invalid_argument("FiniteDifferenceSampler: step must be positive");
  }
}

Matrix FiniteDifferenceSampler::dh1(double zeta) const {
  if (zeta == 0.0) {
    const double d = relative_step_;
    return (-3.0 * base_->h1(0.0) + 4.0 * base_->h1(d) - base_->h1(2.0 * d)) / (2.0 * d);
  }
  const double d = relative_step_ * zeta;
  return (base_->h1(zeta + d) - base_->h1(zeta - d)) / (2.0 * d);
}

Matrix FiniteDifferenceSampler::dh2_dz2(double z1, double z2, Index q) const {
  if (z2 == 0.0) {
    const double d = relative_step_;
    return (-3.0 * base_->h2(z1, 0.0, q) + 4.0 * base_->h2(z1, d, q) - base_->h2(z1, 2.0 * d, q)) /
           (2.0 * d);
  }
  const double d = relative_step_ * z2;
  return (base_->h2(z1, z2 + d, q) - base_->h2(z1, z2 - d, q)) / (2.0 * d);
}

}  // namespace lqo
