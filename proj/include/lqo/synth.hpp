#pragma once

#include <cstdint>
#include <random>

#include "lqo/model.hpp"

namespace lqo {

/// Stable test system: A block-diagonal with 2x2 damped-oscillator blocks
/// [[-z w, w], [-w, -z w]], frequencies w log-spaced on [omega_min, omega_max]
/// and damping ratios z log-spaced from damping_max down to damping_min
/// (so the slow modes are the well-damped ones). An odd n gets one extra
/// real pole at -omega_min * damping_max. B and C are standard normal;
/// every M_q is tridiag(1, 2, 1).
struct SynthOptions {
  Index n = 50;
  Index m = 1;
  Index p = 1;
  std::uint64_t seed = 7;
  double omega_min = 0.1;
  double omega_max = 1.0;
  double damping_max = 0.8;
  double damping_min = 0.3;
};

LqoSystem synth_system(const SynthOptions& options);

/// tridiag(1, 2, 1) of size n.
Matrix tridiag_121(Index n);

/// Keeps inputs [0, m) and outputs [0, p) of a system.
LqoSystem select_channels(const LqoSystem& sys, Index m, Index p);

/// Standard-normal stream built on std::mt19937_64 (whose output the
/// standard fixes) with an explicit Box-Muller transform, so a seed gives
/// the same numbers on every platform.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}
  double next();
  double uniform();  ///< in (0, 1)

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace lqo
