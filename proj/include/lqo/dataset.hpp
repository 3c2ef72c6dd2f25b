#pragma once

#include <memory>
#include <string>
#include <vector>

#include "lqo/kernel_sampler.hpp"
#include "lqo/quadrature.hpp"

namespace lqo {

enum class Domain { Time, Frequency };

std::string to_string(Domain domain);
Domain parse_domain(const std::string& name);

/// Nodes with their square-root weights as the reduction uses them. In the
/// time domain this is the rule itself; in the frequency domain the nodes
/// are signed and the weights include the 1/(2 pi) of the inverse transform.
struct NodeAxis {
  Vector nodes;
  Vector sqrt_weights;

  Index size() const { return nodes.size(); }
};

/// Time-domain samples, with t = rule_p nodes (index i or k) and
/// tau = rule_q nodes (index j). Block grids are stored as plain matrices
/// whose (row-block, col-block) follows the index order in the comment.
struct TimeSamples {
  Matrix h1_sum;                  ///< (j, i): h1(t_i + tau_j), p x m blocks
  Matrix dh1_sum;                 ///< (j, i): dh1(t_i + tau_j)
  Matrix h1_tau;                  ///< (j, 0): h1(tau_j)
  Matrix h1_t;                    ///< (0, i): h1(t_i)
  std::vector<Matrix> h2_tau;     ///< [q] (k, j): h2_q(t_k, tau_j), m x m blocks
  std::vector<Matrix> h2_tt;      ///< [q] (i, k): h2_q(t_i, t_k)
  /// [q][j] (k, i): h2_q(t_k, tau_j + t_i) and its z2-derivative. Empty when
  /// the dataset defers these families to its sampler.
  std::vector<std::vector<Matrix>> h2_shift;
  std::vector<std::vector<Matrix>> dh2_shift;
};

/// Frequency-domain samples, theta = axis_p nodes (index k or l) and
/// s = axis_q nodes (index j), all evaluated at i*node.
struct FreqSamples {
  CMatrix h1_s;                      ///< (0, j): H1(i s_j), p x m blocks
  CMatrix h1_theta;                  ///< (0, l): H1(i theta_l)
  std::vector<CMatrix> h2_theta_s;   ///< [q] (k, j): H2_q(i theta_k, i s_j)
  std::vector<CMatrix> h2_theta_theta;  ///< [q] (k, l): H2_q(i theta_k, i theta_l)
};

/// Every sample the data-driven reduction consumes.
struct KernelDataset {
  Domain domain = Domain::Time;
  Index m = 0;
  Index p = 0;
  QuadratureRule rule_p;  ///< as configured (t / theta axis)
  QuadratureRule rule_q;  ///< as configured (tau / s axis)
  NodeAxis axis_p;
  NodeAxis axis_q;
  /// Frequency axes hold +-omega pairs at positions (2a, 2a + 1).
  bool conjugate_closed = false;

  TimeSamples time;
  FreqSamples freq;

  /// Source for deferred shifted families (time domain only).
  std::shared_ptr<const TimeKernelSampler> deferred;

  bool shifted_stored() const { return !time.h2_shift.empty(); }

  /// (k, i) grid of h2_q(t_k, tau_j + t_i) (or the derivative), from storage
  /// or from the deferred sampler.
  Matrix shifted_grid(Index j, Index q, bool derivative) const;
};

enum class ShiftedStorage { Auto, Store, Defer };

struct CollectOptions {
  ShiftedStorage shifted = ShiftedStorage::Auto;
  /// Auto stores the shifted families when they hold at most this many doubles.
  Index store_limit = Index(1) << 24;
  bool parallel = true;
};

/// Samples every kernel family the time-domain data matrices need.
KernelDataset collect_time_data(std::shared_ptr<const TimeKernelSampler> sampler,
                                const QuadratureRule& rule_p, const QuadratureRule& rule_q,
                                const CollectOptions& options = {});

/// Reference implementation: one scalar kernel call per block, serial,
/// shifted families always stored.
KernelDataset collect_time_data_serial(const TimeKernelSampler& sampler,
                                       const QuadratureRule& rule_p,
                                       const QuadratureRule& rule_q);

struct FreqCollectOptions {
  /// Mirror every node to -omega so the data can be made real.
  bool conjugate_closure = true;
  bool parallel = true;
};

/// Axis built from a positive rule: with closure, nodes (w1, -w1, w2, -w2, ...)
/// and sqrt weights sqrt(w / (2 pi)) on each of the pair.
NodeAxis frequency_axis(const QuadratureRule& rule, bool conjugate_closure);

/// Samples H1 and H2 at the imaginary-axis nodes. Throws
/// FrequencyCollisionError if a node of one axis coincides with a node of
/// the other.
KernelDataset collect_freq_data(const TransferSampler& sampler, const QuadratureRule& rule_p,
                                const QuadratureRule& rule_q,
                                const FreqCollectOptions& options = {});

}  // namespace lqo
