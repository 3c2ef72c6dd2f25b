#include "lqo/dataset.hpp"

#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "lqo/errors.hpp"

namespace lqo {

namespace {

std::string describe(const char* family, std::initializer_list<double> coords) {
  std::ostringstream out;
  out.precision(17);
  out << family << '(';
  bool first = true;
  for (double c : coords) {
    if (!first) out << ", ";
    out << c;
    first = false;
  }
  out << ')';
  return out.str();
}

template <class Fn>
auto sampled(const std::string& where, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const SamplingError&) {
    throw;
  } catch (const std::exception& e) {
    throw SamplingError("sampling " + where + " failed: " + e.what());
  }
}

/// Runs body(j) for j in [0, count), in parallel if asked. The first
/// exception (lowest j) is rethrown on the calling thread.
template <class Body>
void for_each_index(Index count, bool parallel, Body&& body) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (Index j = 0; j < count; ++j) {
    try {
      body(j);
    } catch (...) {
      errors[static_cast<std::size_t>(j)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void check_rules(const QuadratureRule& rule_p, const QuadratureRule& rule_q) {
  if (rule_p.size() < 1 || rule_q.size() < 1) {
    throw std::invalid_argument("collect: quadrature rules must be nonempty");
  }
}

NodeAxis axis_of(const QuadratureRule& rule) { return {rule.nodes, rule.sqrt_weights}; }

Matrix stack_vertically(const Matrix& row, Index blocks, Index block_cols) {
  Matrix out(row.rows() * blocks, block_cols);
  for (Index j = 0; j < blocks; ++j) {
    out.middleRows(j * row.rows(), row.rows()) = row.middleCols(j * block_cols, block_cols);
  }
  return out;
}

}  // namespace

std::string to_string(Domain domain) { return domain == Domain::Time ? "time" : "freq"; }

Domain parse_domain(const std::string& name) {
  if (name == "time") return Domain::Time;
  if (name == "freq" || name == "frequency") return Domain::Frequency;
  throw std::invalid_argument("unknown domain '" + name + "'");
}

Matrix KernelDataset::shifted_grid(Index j, Index q, bool derivative) const {
  if (domain != Domain::Time) throw std::logic_error("shifted_grid: not a time-domain dataset");
  if (shifted_stored()) {
    const auto& family = derivative ? time.dh2_shift : time.h2_shift;
    return family[static_cast<std::size_t>(q)][static_cast<std::size_t>(j)];
  }
  if (!deferred) throw std::logic_error("shifted_grid: dataset has neither samples nor a source");
  const Vector& t = axis_p.nodes;
  const double tau = axis_q.nodes(j);
  return sampled(describe(derivative ? "dh2 grid" : "h2 grid", {tau, static_cast<double>(q)}),
                 [&] { return deferred->h2_grid(t, t, tau, q, derivative); });
}

KernelDataset collect_time_data(std::shared_ptr<const TimeKernelSampler> sampler,
                                const QuadratureRule& rule_p, const QuadratureRule& rule_q,
                                const CollectOptions& options) {
  if (!sampler) throw std::invalid_argument("collect_time_data: null sampler");
  check_rules(rule_p, rule_q);
  KernelDataset ds;
  ds.domain = Domain::Time;
  ds.m = sampler->inputs();
  ds.p = sampler->outputs();
  ds.rule_p = rule_p;
  ds.rule_q = rule_q;
  ds.axis_p = axis_of(rule_p);
  ds.axis_q = axis_of(rule_q);

  const Vector& t = rule_p.nodes;
  const Vector& tau = rule_q.nodes;
  const Index np = t.size();
  const Index nq = tau.size();
  const Index m = ds.m;
  const Index p = ds.p;
  const bool par = options.parallel;

  TimeSamples& s = ds.time;
  s.h1_sum.resize(nq * p, np * m);
  s.dh1_sum.resize(nq * p, np * m);
  for_each_index(nq, par, [&](Index j) {
    s.h1_sum.middleRows(j * p, p) = sampled(describe("h1 row at shift", {tau(j)}),
                                            [&] { return sampler->h1_row(t, tau(j), false); });
    s.dh1_sum.middleRows(j * p, p) = sampled(describe("dh1 row at shift", {tau(j)}),
                                             [&] { return sampler->h1_row(t, tau(j), true); });
  });
  s.h1_tau = stack_vertically(
      sampled("h1 at tau nodes", [&] { return sampler->h1_row(tau, 0.0, false); }), nq, m);
  s.h1_t = sampled("h1 at t nodes", [&] { return sampler->h1_row(t, 0.0, false); });

  s.h2_tau.resize(static_cast<std::size_t>(p));
  s.h2_tt.resize(static_cast<std::size_t>(p));
  for (Index q = 0; q < p; ++q) {
    const auto uq = static_cast<std::size_t>(q);
    s.h2_tau[uq] = sampled(describe("h2 (t, tau) grid", {static_cast<double>(q)}),
                           [&] { return sampler->h2_grid(t, tau, 0.0, q, false); });
    s.h2_tt[uq] = sampled(describe("h2 (t, t) grid", {static_cast<double>(q)}),
                          [&] { return sampler->h2_grid(t, t, 0.0, q, false); });
  }

  const Index shifted_doubles = 2 * p * nq * (np * m) * (np * m);
  const bool store = options.shifted == ShiftedStorage::Store ||
                     (options.shifted == ShiftedStorage::Auto && shifted_doubles <= options.store_limit);
  if (!store) {
    ds.deferred = std::move(sampler);
    return ds;
  }
  s.h2_shift.assign(static_cast<std::size_t>(p), std::vector<Matrix>(static_cast<std::size_t>(nq)));
  s.dh2_shift.assign(static_cast<std::size_t>(p), std::vector<Matrix>(static_cast<std::size_t>(nq)));
  for_each_index(p * nq, par, [&](Index qj) {
    const Index q = qj / nq;
    const Index j = qj % nq;
    const auto uq = static_cast<std::size_t>(q);
    const auto uj = static_cast<std::size_t>(j);
    s.h2_shift[uq][uj] = sampled(describe("h2 grid at shift", {tau(j), static_cast<double>(q)}),
                                 [&] { return sampler->h2_grid(t, t, tau(j), q, false); });
    s.dh2_shift[uq][uj] = sampled(describe("dh2 grid at shift", {tau(j), static_cast<double>(q)}),
                                  [&] { return sampler->h2_grid(t, t, tau(j), q, true); });
  });
  return ds;
}

KernelDataset collect_time_data_serial(const TimeKernelSampler& sampler,
                                       const QuadratureRule& rule_p,
                                       const QuadratureRule& rule_q) {
  check_rules(rule_p, rule_q);
  KernelDataset ds;
  ds.domain = Domain::Time;
  ds.m = sampler.inputs();
  ds.p = sampler.outputs();
  ds.rule_p = rule_p;
  ds.rule_q = rule_q;
  ds.axis_p = axis_of(rule_p);
  ds.axis_q = axis_of(rule_q);

  const Vector& t = rule_p.nodes;
  const Vector& tau = rule_q.nodes;
  const Index np = t.size();
  const Index nq = tau.size();
  const Index m = ds.m;
  const Index p = ds.p;
  const auto h1 = [&](double z) { return sampled(describe("h1", {z}), [&] { return sampler.h1(z); }); };
  const auto dh1 = [&](double z) {
    return sampled(describe("dh1", {z}), [&] { return sampler.dh1(z); });
  };
  const auto h2 = [&](double a, double b, Index q) {
    return sampled(describe("h2", {a, b, static_cast<double>(q)}), [&] { return sampler.h2(a, b, q); });
  };
  const auto dh2 = [&](double a, double b, Index q) {
    return sampled(describe("dh2", {a, b, static_cast<double>(q)}),
                   [&] { return sampler.dh2_dz2(a, b, q); });
  };

  TimeSamples& s = ds.time;
  s.h1_sum.resize(nq * p, np * m);
  s.dh1_sum.resize(nq * p, np * m);
  s.h1_tau.resize(nq * p, m);
  s.h1_t.resize(p, np * m);
  for (Index j = 0; j < nq; ++j) {
    for (Index i = 0; i < np; ++i) {
      s.h1_sum.block(j * p, i * m, p, m) = h1(t(i) + tau(j));
      s.dh1_sum.block(j * p, i * m, p, m) = dh1(t(i) + tau(j));
    }
    s.h1_tau.middleRows(j * p, p) = h1(tau(j));
  }
  for (Index i = 0; i < np; ++i) s.h1_t.middleCols(i * m, m) = h1(t(i));

  const auto up = static_cast<std::size_t>(p);
  const auto unq = static_cast<std::size_t>(nq);
  s.h2_tau.assign(up, Matrix(np * m, nq * m));
  s.h2_tt.assign(up, Matrix(np * m, np * m));
  s.h2_shift.assign(up, std::vector<Matrix>(unq, Matrix(np * m, np * m)));
  s.dh2_shift.assign(up, std::vector<Matrix>(unq, Matrix(np * m, np * m)));
  for (Index q = 0; q < p; ++q) {
    const auto uq = static_cast<std::size_t>(q);
    for (Index k = 0; k < np; ++k) {
      for (Index j = 0; j < nq; ++j) s.h2_tau[uq].block(k * m, j * m, m, m) = h2(t(k), tau(j), q);
      for (Index i = 0; i < np; ++i) s.h2_tt[uq].block(k * m, i * m, m, m) = h2(t(k), t(i), q);
    }
    for (Index j = 0; j < nq; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      for (Index k = 0; k < np; ++k) {
        for (Index i = 0; i < np; ++i) {
          s.h2_shift[uq][uj].block(k * m, i * m, m, m) = h2(t(k), tau(j) + t(i), q);
          s.dh2_shift[uq][uj].block(k * m, i * m, m, m) = dh2(t(k), tau(j) + t(i), q);
        }
      }
    }
  }
  return ds;
}

NodeAxis frequency_axis(const QuadratureRule& rule, bool conjugate_closure) {
  const double scale = 1.0 / (2.0 * std::numbers::pi);
  NodeAxis axis;
  if (!conjugate_closure) {
    axis.nodes = rule.nodes;
    axis.sqrt_weights = (rule.weights * scale).cwiseSqrt();
    return axis;
  }
  const Index n = rule.size();
  axis.nodes.resize(2 * n);
  axis.sqrt_weights.resize(2 * n);
  for (Index a = 0; a < n; ++a) {
    const double rho = std::sqrt(rule.weights(a) * scale);
    axis.nodes(2 * a) = rule.nodes(a);
    axis.nodes(2 * a + 1) = -rule.nodes(a);
    axis.sqrt_weights(2 * a) = rho;
    axis.sqrt_weights(2 * a + 1) = rho;
  }
  return axis;
}

KernelDataset collect_freq_data(const TransferSampler& sampler, const QuadratureRule& rule_p,
                                const QuadratureRule& rule_q, const FreqCollectOptions& options) {
  check_rules(rule_p, rule_q);
  KernelDataset ds;
  ds.domain = Domain::Frequency;
  ds.m = sampler.inputs();
  ds.p = sampler.outputs();
  ds.rule_p = rule_p;
  ds.rule_q = rule_q;
  ds.conjugate_closed = options.conjugate_closure;
  ds.axis_p = frequency_axis(rule_p, options.conjugate_closure);
  ds.axis_q = frequency_axis(rule_q, options.conjugate_closure);

  const Vector& theta = ds.axis_p.nodes;
  const Vector& s = ds.axis_q.nodes;
  for (Index j = 0; j < s.size(); ++j) {
    for (Index l = 0; l < theta.size(); ++l) {
      if (std::abs(s(j) - theta(l)) <= 1e-12 * std::max(std::abs(s(j)), std::abs(theta(l)))) {
        throw FrequencyCollisionError("collect_freq_data: node s_" + std::to_string(j) +
                                      " coincides with theta_" + std::to_string(l) + " (" +
                                      std::to_string(s(j)) + " rad/s)");
      }
    }
  }
  const Complex i1(0.0, 1.0);
  const CVector is = i1 * s.cast<Complex>();
  const CVector itheta = i1 * theta.cast<Complex>();
  const Index m = ds.m;
  const Index p = ds.p;

  FreqSamples& f = ds.freq;
  f.h1_s.resize(p, s.size() * m);
  f.h1_theta.resize(p, theta.size() * m);
  for_each_index(s.size(), options.parallel, [&](Index j) {
    f.h1_s.middleCols(j * m, m) =
        sampled(describe("H1 at i*s", {s(j)}), [&] { return sampler.transfer_h1(is(j)); });
  });
  for_each_index(theta.size(), options.parallel, [&](Index l) {
    f.h1_theta.middleCols(l * m, m) = sampled(describe("H1 at i*theta", {theta(l)}),
                                              [&] { return sampler.transfer_h1(itheta(l)); });
  });
  f.h2_theta_s.resize(static_cast<std::size_t>(p));
  f.h2_theta_theta.resize(static_cast<std::size_t>(p));
  for (Index q = 0; q < p; ++q) {
    const auto uq = static_cast<std::size_t>(q);
    f.h2_theta_s[uq] = sampled(describe("H2 (theta, s) grid", {static_cast<double>(q)}),
                               [&] { return sampler.transfer_h2_grid(itheta, is, q); });
    f.h2_theta_theta[uq] = sampled(describe("H2 (theta, theta) grid", {static_cast<double>(q)}),
                                   [&] { return sampler.transfer_h2_grid(itheta, itheta, q); });
  }
  return ds;
}

}  // namespace lqo
