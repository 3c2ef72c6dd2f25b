#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lqo/dataset.hpp"
#include "lqo/model.hpp"
#include "lqo/qbt.hpp"
#include "lqo/synth.hpp"

namespace lqo {

/// Where the full-order model comes from and which channels are kept.
struct ProblemSpec {
  std::optional<std::filesystem::path> manifest;  ///< else the synthetic generator
  SynthOptions synth;
  Index inputs = 1;   ///< keep inputs [0, inputs)
  Index outputs = 1;  ///< keep outputs [0, outputs)
};

struct QuadratureConfig {
  Domain domain = Domain::Time;
  RuleKind kind = RuleKind::LogTrapezoid;
  double lower = 1e-1;
  double upper = 1e2;
  Index np = 800;
  Index nq = 800;
};

/// Full-order model with the channel selection applied; checked for stability.
LqoSystem load_problem(const ProblemSpec& spec);

/// Parses "a:b" with 0 < a < b.
std::pair<double, double> parse_interval(const std::string& text);

/// rule_p and rule_q of a configuration. In the frequency domain rule_q is
/// shifted by half a log-step so the two node sets never coincide.
std::pair<QuadratureRule, QuadratureRule> make_rules(const QuadratureConfig& config);

/// Samples the kernels (time) or transfer functions (freq) of `sys`.
KernelDataset collect_data(const LqoSystem& sys, const QuadratureConfig& config);

/// QBT reducer for `sys` under `config`.
QbtReducer qbt_reducer(const LqoSystem& sys, const QuadratureConfig& config);

/// ROM of the requested method ("bt", "qbt-time", "qbt-freq").
ReducedLqoSystem reduce_with(const LqoSystem& sys, RomMethod method, Index r,
                             const QuadratureConfig& config);
RomMethod parse_method(const std::string& name);

/// Writes HSV_f.csv (intrusive) and HSV_r.csv (QBT), the leading `count`
/// values normalized by the first, under `out`.
void cmd_hsv(const ProblemSpec& spec, const QuadratureConfig& config, Index count,
             const std::filesystem::path& out);

struct ReduceReport {
  RomMethod method = RomMethod::IntrusiveBt;
  Index order = 0;
  Index np = 0;
  Index nq = 0;
  std::optional<double> h2_error;  ///< absent when the ROM is unstable
  bool stable = false;
};

/// Writes the ROM (Matrix Market + system.txt) and report.txt under `out`.
ReduceReport cmd_reduce(const ProblemSpec& spec, const QuadratureConfig& config, RomMethod method,
                        Index r, const std::filesystem::path& out);

struct SimulationConfig {
  double t_end = 5.0;
  Index steps = 2000;
  /// ROMs from disk; each one missing is computed at `order`.
  std::optional<std::filesystem::path> qbt_rom;
  std::optional<std::filesystem::path> bt_rom;
  Index order = 10;
  /// Use u = 0 instead of the standard test signal.
  bool zero_input = false;
};

/// u(t) = 5 (cos(5 pi t) + sin(12 pi t) e^{-0.4 t}) on every input.
InputSignal standard_input(Index inputs);

/// Writes error_plot.csv for output 0:
/// Time,FOM_Output,QBT_Output,BT_Output,Abs_Error_QBT,Abs_Error_BT.
void cmd_simulate(const ProblemSpec& spec, const QuadratureConfig& config,
                  const SimulationConfig& sim, const std::filesystem::path& out);

/// Writes h2_vs_n.csv with N,BT_Error,QBT_Error; N_p = N_q = N per row.
void cmd_h2_sweep_n(const ProblemSpec& spec, const QuadratureConfig& config, Index r,
                    const std::vector<Index>& node_counts, const std::filesystem::path& out);

/// Writes h2_vs_r.csv with Truncation_Index,H2_BT_Error,H2_r_Error.
void cmd_h2_sweep_r(const ProblemSpec& spec, const QuadratureConfig& config,
                    const std::vector<Index>& orders, const std::filesystem::path& out);

/// Writes a synthetic system; returns the manifest path.
std::filesystem::path cmd_synth(const SynthOptions& options, const std::filesystem::path& out);

}  // namespace lqo
