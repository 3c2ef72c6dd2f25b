#include "lqo/commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "lqo/csv.hpp"
#include "lqo/errors.hpp"
#include "lqo/gramians.hpp"
#include "lqo/system_io.hpp"

namespace lqo {

namespace fs = std::filesystem;

namespace {

std::ofstream open_csv(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(dir / name);
  if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
  return out;
}

/// H2 error, or NaN with a warning when the ROM is unstable.
double error_or_nan(const LqoSystem& sys, const LqoSystem& rom, const std::string& label) {
  try {
    return h2_error(sys, rom);
  } catch (const UnstableRomError&) {
    std::clog << "warning: " << label << " ROM is unstable; H2 error reported as nan\n";
    return std::numeric_limits<double>::quiet_NaN();
  }
}

std::string format_value(double v) { return std::isnan(v) ? "nan" : format_double(v); }

void write_hsv(const fs::path& dir, const std::string& name, const Vector& values, Index count) {
  auto out = open_csv(dir, name);
  out << "Index,HSV_f\n";
  const Index n = std::min(count, values.size());
  for (Index i = 0; i < n; ++i) {
    out << i + 1 << ',' << format_double(values(i) / values(0)) << '\n';
  }
}

}  // namespace

LqoSystem load_problem(const ProblemSpec& spec) {
  LqoSystem full = spec.manifest ? load_system(*spec.manifest) : synth_system(spec.synth);
  LqoSystem sys = select_channels(full, spec.inputs, spec.outputs);
  if (!sys.is_stable()) throw UnstableSystemError("full-order model is not asymptotically stable");
  return sys;
}

std::pair<double, double> parse_interval(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("interval must look like a:b");
  const double a = parse_double(text.substr(0, colon));
  const double b = parse_double(text.substr(colon + 1));
  if (!(a > 0.0 && b > a)) throw std::invalid_argument("interval needs 0 < a < b");
  return {a, b};
}

std::pair<QuadratureRule, QuadratureRule> make_rules(const QuadratureConfig& config) {
  QuadratureRule rule_p = make_rule(config.kind, config.lower, config.upper, config.np);
  if (config.domain == Domain::Time) {
    return {std::move(rule_p), make_rule(config.kind, config.lower, config.upper, config.nq)};
  }
  const Index steps = std::max<Index>(std::max(config.np, config.nq) - 1, 1);
  const double half = std::pow(config.upper / config.lower, 0.5 / static_cast<double>(steps));
  return {std::move(rule_p),
          make_rule(config.kind, config.lower * half, config.upper * half, config.nq)};
}

KernelDataset collect_data(const LqoSystem& sys, const QuadratureConfig& config) {
  const auto [rule_p, rule_q] = make_rules(config);
  auto sampler = std::make_shared<SystemSampler>(sys);
  if (config.domain == Domain::Time) return collect_time_data(sampler, rule_p, rule_q);
  return collect_freq_data(*sampler, rule_p, rule_q);
}

QbtReducer qbt_reducer(const LqoSystem& sys, const QuadratureConfig& config) {
  return make_qbt_reducer(collect_data(sys, config));
}

RomMethod parse_method(const std::string& name) {
  if (name == "bt") return RomMethod::IntrusiveBt;
  if (name == "qbt-time") return RomMethod::TimeQbt;
  if (name == "qbt-freq") return RomMethod::FreqQbt;
  throw std::invalid_argument("unknown method '" + name + "' (bt | qbt-time | qbt-freq)");
}

ReducedLqoSystem reduce_with(const LqoSystem& sys, RomMethod method, Index r,
                             const QuadratureConfig& config) {
  if (method == RomMethod::IntrusiveBt) return intrusive_bt(sys, r);
  QuadratureConfig cfg = config;
  cfg.domain = method == RomMethod::TimeQbt ? Domain::Time : Domain::Frequency;
  return qbt_reducer(sys, cfg).reduce(r);
}

void cmd_hsv(const ProblemSpec& spec, const QuadratureConfig& config, Index count,
             const fs::path& out) {
  const LqoSystem sys = load_problem(spec);
  const Vector fom = hankel_singular_values(compute_gramians(sys));
  const QbtReducer reducer = qbt_reducer(sys, config);
  write_hsv(out, "HSV_f.csv", fom, count);
  // Values below the path's resolution are rounding noise; leave them out.
  write_hsv(out, "HSV_r.csv", reducer.singular_values(), std::min(count, reducer.max_order()));
}

ReduceReport cmd_reduce(const ProblemSpec& spec, const QuadratureConfig& config, RomMethod method,
                        Index r, const fs::path& out) {
  const LqoSystem sys = load_problem(spec);
  const ReducedLqoSystem rom = reduce_with(sys, method, r, config);
  save_system(out, rom, to_string(method));

  ReduceReport report;
  report.method = method;
  report.order = r;
  if (method != RomMethod::IntrusiveBt) {
    report.np = config.np;
    report.nq = config.nq;
  }
  report.stable = rom.is_stable();
  if (report.stable) report.h2_error = h2_error(sys, rom);

  std::ofstream txt(out / "report.txt");
  txt << "method " << to_string(method) << "\norder " << r << "\nnp " << report.np << "\nnq "
      << report.nq << "\nh2_error " << (report.h2_error ? format_double(*report.h2_error) : "nan")
      << "\nstable " << (report.stable ? 1 : 0) << '\n';
  if (!txt) throw std::runtime_error("cannot write " + (out / "report.txt").string());
  return report;
}

InputSignal standard_input(Index inputs) {
  return [inputs](double t) {
    const double pi = std::numbers::pi;
    const double u = 5.0 * (std::cos(5.0 * pi * t) + std::sin(12.0 * pi * t) * std::exp(-0.4 * t));
    return Vector::Constant(inputs, u).eval();
  };
}

void cmd_simulate(const ProblemSpec& spec, const QuadratureConfig& config,
                  const SimulationConfig& sim, const fs::path& out) {
  const LqoSystem sys = load_problem(spec);
  const auto load_or_reduce = [&](const std::optional<fs::path>& path, RomMethod method) {
    if (path) return load_system(*path);
    return static_cast<LqoSystem>(reduce_with(sys, method, sim.order, config));
  };
  const RomMethod qbt_method =
      config.domain == Domain::Time ? RomMethod::TimeQbt : RomMethod::FreqQbt;
  const LqoSystem qbt = load_or_reduce(sim.qbt_rom, qbt_method);
  const LqoSystem bt = load_or_reduce(sim.bt_rom, RomMethod::IntrusiveBt);
  for (const LqoSystem* rom : {&qbt, &bt}) {
    if (rom->inputs() != sys.inputs() || rom->outputs() != sys.outputs()) {
      throw std::invalid_argument("simulate: ROM channel counts differ from the full model");
    }
  }

  const InputSignal u = sim.zero_input
                            ? InputSignal([m = sys.inputs()](double) { return Vector::Zero(m).eval(); })
                            : standard_input(sys.inputs());
  const auto grid = uniform_grid(0.0, sim.t_end, sim.steps);
  const Trajectory y = simulate(sys, u, grid);
  const Trajectory yq = simulate(qbt, u, grid);
  const Trajectory yb = simulate(bt, u, grid);

  auto csv = open_csv(out, "error_plot.csv");
  csv << "Time,FOM_Output,QBT_Output,BT_Output,Abs_Error_QBT,Abs_Error_BT\n";
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto c = static_cast<Index>(k);
    const double f = y.outputs(0, c);
    const double q = yq.outputs(0, c);
    const double b = yb.outputs(0, c);
    csv << format_double(grid[k]) << ',' << format_double(f) << ',' << format_double(q) << ','
        << format_double(b) << ',' << format_double(std::abs(f - q)) << ','
        << format_double(std::abs(f - b)) << '\n';
  }
}

void cmd_h2_sweep_n(const ProblemSpec& spec, const QuadratureConfig& config, Index r,
                    const std::vector<Index>& node_counts, const fs::path& out) {
  const LqoSystem sys = load_problem(spec);
  const double bt_error = error_or_nan(sys, intrusive_bt(sys, r), "bt");
  // Each point already runs parallel kernels, so points go one at a time.
  std::vector<double> qbt_error;
  for (const Index n : node_counts) {
    QuadratureConfig cfg = config;
    cfg.np = n;
    cfg.nq = n;
    qbt_error.push_back(error_or_nan(sys, qbt_reducer(sys, cfg).reduce(r), "qbt N=" + std::to_string(n)));
  }
  auto csv = open_csv(out, "h2_vs_n.csv");
  csv << "N,BT_Error,QBT_Error\n";
  for (std::size_t i = 0; i < node_counts.size(); ++i) {
    csv << node_counts[i] << ',' << format_value(bt_error) << ',' << format_value(qbt_error[i]) << '\n';
  }
}

void cmd_h2_sweep_r(const ProblemSpec& spec, const QuadratureConfig& config,
                    const std::vector<Index>& orders, const fs::path& out) {
  const LqoSystem sys = load_problem(spec);
  const GramianPair gramians = compute_gramians(sys);
  const QbtReducer reducer = qbt_reducer(sys, config);
  const auto count = static_cast<Index>(orders.size());
  std::vector<double> bt(orders.size()), qbt(orders.size());
  std::vector<std::exception_ptr> errors(orders.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (Index i = 0; i < count; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    try {
      const Index r = orders[ui];
      bt[ui] = error_or_nan(sys, intrusive_bt(sys, gramians, r), "bt r=" + std::to_string(r));
      qbt[ui] = error_or_nan(sys, reducer.reduce(r), "qbt r=" + std::to_string(r));
    } catch (...) {
      errors[ui] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  auto csv = open_csv(out, "h2_vs_r.csv");
  csv << "Truncation_Index,H2_BT_Error,H2_r_Error\n";
  for (std::size_t i = 0; i < orders.size(); ++i) {
    csv << orders[i] << ',' << format_value(bt[i]) << ',' << format_value(qbt[i]) << '\n';
  }
}

fs::path cmd_synth(const SynthOptions& options, const fs::path& out) {
  return save_system(out, synth_system(options));
}

}  // namespace lqo
