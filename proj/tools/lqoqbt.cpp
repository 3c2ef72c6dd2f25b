#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lqo/commands.hpp"
#include "lqo/csv.hpp"
#include "lqo/errors.hpp"

namespace {

struct Args {
  std::string system;
  std::string method = "qbt-time";
  long order = 10;
  long np = 800;
  long nq = 800;
  std::string interval = "1e-1:1e2";
  std::string rule = "trapezoid";
  std::string domain = "time";
  unsigned long long seed = 7;
  std::string out = ".";
  long inputs = 1;
  long outputs = 1;
  long n = 50;
  long synth_m = 1;
  long synth_p = 1;
  std::string omega = "1e-1:1";
  std::string damping = "0.3:0.8";
};

/// "a,b,c" or "first:last" (step 1).
std::vector<lqo::Index> parse_index_list(const std::string& text) {
  std::vector<lqo::Index> out;
  if (const auto colon = text.find(':'); colon != std::string::npos) {
    const long first = std::stol(text.substr(0, colon));
    const long last = std::stol(text.substr(colon + 1));
    for (long v = first; v <= last; ++v) out.push_back(v);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stol(item));
  return out;
}

void add_problem_flags(CLI::App* cmd, Args& a) {
  cmd->add_option("--system", a.system, "System manifest (default: synthetic system)");
  cmd->add_option("--seed", a.seed, "Seed of the synthetic system");
  cmd->add_option("--n", a.n, "State dimension of the synthetic system");
  cmd->add_option("--inputs", a.inputs, "Keep the first k inputs");
  cmd->add_option("--outputs", a.outputs, "Keep the first k outputs");
}

void add_quadrature_flags(CLI::App* cmd, Args& a) {
  cmd->add_option("--np", a.np, "Nodes of the t / theta rule");
  cmd->add_option("--nq", a.nq, "Nodes of the tau / s rule");
  cmd->add_option("--interval", a.interval, "Rule interval a:b");
  cmd->add_option("--rule", a.rule, "trapezoid | clenshaw-curtis");
  cmd->add_option("--domain", a.domain, "time | freq");
}

lqo::SynthOptions synth_options(const Args& a) {
  lqo::SynthOptions s;
  s.n = a.n;
  s.m = a.synth_m;
  s.p = a.synth_p;
  s.seed = a.seed;
  std::tie(s.omega_min, s.omega_max) = lqo::parse_interval(a.omega);
  std::tie(s.damping_min, s.damping_max) = lqo::parse_interval(a.damping);
  return s;
}

lqo::ProblemSpec problem(const Args& a) {
  lqo::ProblemSpec spec;
  if (!a.system.empty()) spec.manifest = a.system;
  spec.synth = synth_options(a);
  // The synthetic stand-in needs at least as many channels as selected.
  spec.synth.m = std::max<long>(a.inputs, a.synth_m);
  spec.synth.p = std::max<long>(a.outputs, a.synth_p);
  spec.inputs = a.inputs;
  spec.outputs = a.outputs;
  return spec;
}

lqo::QuadratureConfig quadrature(const Args& a) {
  lqo::QuadratureConfig q;
  q.domain = lqo::parse_domain(a.domain);
  q.kind = lqo::parse_rule_kind(a.rule);
  std::tie(q.lower, q.upper) = lqo::parse_interval(a.interval);
  q.np = a.np;
  q.nq = a.nq;
  return q;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Data-driven balanced truncation of linear systems with quadratic outputs"};
  app.require_subcommand(1);
  Args a;

  long hsv_count = 30;
  auto* hsv = app.add_subcommand("hsv", "Normalized Hankel singular values: intrusive vs data");
  add_problem_flags(hsv, a);
  add_quadrature_flags(hsv, a);
  hsv->add_option("--order", hsv_count, "Number of leading values to write");
  hsv->add_option("--out", a.out, "Output directory");

  auto* reduce = app.add_subcommand("reduce", "Write a reduced model and an error report");
  add_problem_flags(reduce, a);
  add_quadrature_flags(reduce, a);
  reduce->add_option("--method", a.method, "bt | qbt-time | qbt-freq");
  reduce->add_option("--order", a.order, "Reduced order r");
  reduce->add_option("--out", a.out, "Output directory");

  lqo::SimulationConfig sim;
  std::string qbt_rom, bt_rom;
  bool zero_input = false;
  auto* simulate = app.add_subcommand("simulate", "Output trajectories of the full model and two ROMs");
  add_problem_flags(simulate, a);
  add_quadrature_flags(simulate, a);
  simulate->add_option("--order", a.order, "Order of ROMs computed on the fly");
  simulate->add_option("--qbt-rom", qbt_rom, "QBT ROM manifest (default: reduce now)");
  simulate->add_option("--bt-rom", bt_rom, "BT ROM manifest (default: reduce now)");
  simulate->add_option("--t-end", sim.t_end, "Final time");
  simulate->add_option("--steps", sim.steps, "RK4 steps");
  simulate->add_flag("--zero-input", zero_input, "Simulate with u = 0");
  simulate->add_option("--out", a.out, "Output directory");

  std::string sweep = "n";
  std::string points = "50,100,200,400,800";
  auto* h2 = app.add_subcommand("h2-sweep", "H2 error of BT and QBT over N or over r");
  add_problem_flags(h2, a);
  add_quadrature_flags(h2, a);
  h2->add_option("--sweep", sweep, "n | r");
  h2->add_option("--points", points, "Sweep points: a,b,c or first:last")->capture_default_str();
  h2->add_option("--order", a.order, "Reduced order of the N sweep");
  h2->add_option("--out", a.out, "Output directory");

  auto* synth = app.add_subcommand("synth", "Write a synthetic stable LQO system");
  synth->add_option("--n", a.n, "State dimension");
  synth->add_option("--m", a.synth_m, "Inputs");
  synth->add_option("--p", a.synth_p, "Outputs");
  synth->add_option("--seed", a.seed, "Random seed");
  synth->add_option("--omega", a.omega, "Frequency range a:b (rad/s)");
  synth->add_option("--damping", a.damping, "Damping-ratio range a:b");
  synth->add_option("--out", a.out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*hsv) {
      lqo::cmd_hsv(problem(a), quadrature(a), hsv_count, a.out);
    } else if (*reduce) {
      const auto report =
          lqo::cmd_reduce(problem(a), quadrature(a), lqo::parse_method(a.method), a.order, a.out);
      std::cout << "order " << report.order << ", H2 error "
                << (report.h2_error ? lqo::format_double(*report.h2_error) : "n/a (unstable ROM)")
                << '\n';
    } else if (*simulate) {
      sim.order = a.order;
      sim.zero_input = zero_input;
      if (!qbt_rom.empty()) sim.qbt_rom = qbt_rom;
      if (!bt_rom.empty()) sim.bt_rom = bt_rom;
      lqo::cmd_simulate(problem(a), quadrature(a), sim, a.out);
    } else if (*h2) {
      const auto list = parse_index_list(points);
      if (sweep == "n") {
        lqo::cmd_h2_sweep_n(problem(a), quadrature(a), a.order, list, a.out);
      } else if (sweep == "r") {
        lqo::cmd_h2_sweep_r(problem(a), quadrature(a), list, a.out);
      } else {
        throw std::invalid_argument("--sweep must be n or r");
      }
    } else if (*synth) {
      std::cout << lqo::cmd_synth(synth_options(a), a.out).string() << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "lqoqbt: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
