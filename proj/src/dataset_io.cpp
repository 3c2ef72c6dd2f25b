#include "lqo/dataset_io.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lqo/csv.hpp"

namespace lqo {

namespace {

namespace fs = std::filesystem;

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

std::string header(const std::vector<std::string>& indices, Index entries, bool complex) {
  std::string h;
  for (const auto& name : indices) h += name + ',';
  for (Index e = 0; e < entries; ++e) {
    if (complex) {
      h += "re" + std::to_string(e) + ",im" + std::to_string(e);
    } else {
      h += "v" + std::to_string(e);
    }
    if (e + 1 < entries) h += ',';
  }
  return h;
}

template <class Mat>
void write_block(std::ostream& out, const Mat& block) {
  for (Index r = 0; r < block.rows(); ++r) {
    for (Index c = 0; c < block.cols(); ++c) {
      if constexpr (std::is_same_v<typename Mat::Scalar, Complex>) {
        out << ',' << format_double(block(r, c).real()) << ',' << format_double(block(r, c).imag());
      } else {
        out << ',' << format_double(block(r, c));
      }
    }
  }
}

/// Grid of blocks, rows "row_index,col_index,entries".
template <class Mat>
void write_grid(const fs::path& path, const Mat& grid, Index br, Index bc,
                const std::string& row_name, const std::string& col_name) {
  constexpr bool complex = std::is_same_v<typename Mat::Scalar, Complex>;
  auto out = open_out(path);
  out << header({row_name, col_name}, br * bc, complex) << '\n';
  for (Index r = 0; r < grid.rows() / br; ++r) {
    for (Index c = 0; c < grid.cols() / bc; ++c) {
      out << r << ',' << c;
      write_block(out, grid.block(r * br, c * bc, br, bc));
      out << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

/// Parsed CSV rows: leading integer indices and the trailing values.
struct Records {
  std::vector<std::vector<Index>> indices;
  std::vector<std::vector<double>> values;
};

Records read_records(const fs::path& path, std::size_t index_count, std::size_t value_count) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
  Records rec;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != index_count + value_count) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected " +
                               std::to_string(index_count + value_count) + " fields");
    }
    std::vector<Index> idx;
    for (std::size_t f = 0; f < index_count; ++f) {
      const double v = parse_double(fields[f]);
      idx.push_back(static_cast<Index>(v));
    }
    std::vector<double> vals;
    for (std::size_t f = index_count; f < fields.size(); ++f) vals.push_back(parse_double(fields[f]));
    rec.indices.push_back(std::move(idx));
    rec.values.push_back(std::move(vals));
  }
  return rec;
}

template <class Mat>
Mat read_grid(const fs::path& path, Index row_blocks, Index col_blocks, Index br, Index bc) {
  constexpr bool complex = std::is_same_v<typename Mat::Scalar, Complex>;
  const std::size_t per = static_cast<std::size_t>(br * bc * (complex ? 2 : 1));
  const Records rec = read_records(path, 2, per);
  Mat grid(row_blocks * br, col_blocks * bc);
  std::vector<char> seen(static_cast<std::size_t>(row_blocks * col_blocks), 0);
  for (std::size_t n = 0; n < rec.indices.size(); ++n) {
    const Index r = rec.indices[n][0];
    const Index c = rec.indices[n][1];
    if (r < 0 || r >= row_blocks || c < 0 || c >= col_blocks) {
      throw std::runtime_error(path.string() + ": block index out of range");
    }
    seen[static_cast<std::size_t>(r * col_blocks + c)] = 1;
    const auto& v = rec.values[n];
    for (Index a = 0; a < br; ++a) {
      for (Index b = 0; b < bc; ++b) {
        const auto e = static_cast<std::size_t>(a * bc + b);
        if constexpr (complex) {
          grid(r * br + a, c * bc + b) = Complex(v[2 * e], v[2 * e + 1]);
        } else {
          grid(r * br + a, c * bc + b) = v[e];
        }
      }
    }
  }
  for (char s : seen) {
    if (!s) throw std::runtime_error(path.string() + ": missing samples");
  }
  return grid;
}

void write_rule(const fs::path& path, const QuadratureRule& rule) {
  auto out = open_out(path);
  write_rule_csv(out, rule);
}

QuadratureRule read_rule(const fs::path& path, RuleKind kind) {
  auto in = open_in(path);
  std::string line;
  std::getline(in, line);
  std::vector<double> nodes, weights, roots;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 3) throw std::runtime_error(path.string() + ": expected node,weight,sqrt_weight");
    nodes.push_back(parse_double(f[0]));
    weights.push_back(parse_double(f[1]));
    roots.push_back(parse_double(f[2]));
  }
  QuadratureRule rule;
  rule.kind = kind;
  rule.nodes = Eigen::Map<Vector>(nodes.data(), static_cast<Index>(nodes.size()));
  rule.weights = Eigen::Map<Vector>(weights.data(), static_cast<Index>(weights.size()));
  rule.sqrt_weights = Eigen::Map<Vector>(roots.data(), static_cast<Index>(roots.size()));
  return rule;
}

void write_axis(const fs::path& path, const NodeAxis& axis) {
  auto out = open_out(path);
  out << "node,sqrt_weight\n";
  for (Index i = 0; i < axis.size(); ++i) {
    out << format_double(axis.nodes(i)) << ',' << format_double(axis.sqrt_weights(i)) << '\n';
  }
}

NodeAxis read_axis(const fs::path& path) {
  auto in = open_in(path);
  std::string line;
  std::getline(in, line);
  std::vector<double> nodes, roots;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 2) throw std::runtime_error(path.string() + ": expected node,sqrt_weight");
    nodes.push_back(parse_double(f[0]));
    roots.push_back(parse_double(f[1]));
  }
  NodeAxis axis;
  axis.nodes = Eigen::Map<Vector>(nodes.data(), static_cast<Index>(nodes.size()));
  axis.sqrt_weights = Eigen::Map<Vector>(roots.data(), static_cast<Index>(roots.size()));
  return axis;
}

std::string q_suffix(Index q) { return "_q" + std::to_string(q + 1) + ".csv"; }

}  // namespace

void write_dataset(const fs::path& dir, const KernelDataset& ds) {
  fs::create_directories(dir);
  const Index np = ds.axis_p.size();
  const Index nq = ds.axis_q.size();
  const Index m = ds.m;
  const Index p = ds.p;
  {
    auto out = open_out(dir / "dataset.txt");
    out << "domain " << to_string(ds.domain) << "\nnp " << np << "\nnq " << nq << "\nm " << m
        << "\np " << p << "\nconjugate_closed " << (ds.conjugate_closed ? 1 : 0) << "\nrule_p "
        << to_string(ds.rule_p.kind) << "\nrule_q " << to_string(ds.rule_q.kind) << '\n';
  }
  write_rule(dir / "rule_p.csv", ds.rule_p);
  write_rule(dir / "rule_q.csv", ds.rule_q);
  write_axis(dir / "axis_p.csv", ds.axis_p);
  write_axis(dir / "axis_q.csv", ds.axis_q);

  if (ds.domain == Domain::Frequency) {
    const FreqSamples& f = ds.freq;
    write_grid(dir / "H1_s.csv", f.h1_s, p, m, "zero", "j");
    write_grid(dir / "H1_theta.csv", f.h1_theta, p, m, "zero", "l");
    for (Index q = 0; q < p; ++q) {
      const auto uq = static_cast<std::size_t>(q);
      write_grid(dir / ("H2_theta_s" + q_suffix(q)), f.h2_theta_s[uq], m, m, "k", "j");
      write_grid(dir / ("H2_theta_theta" + q_suffix(q)), f.h2_theta_theta[uq], m, m, "k", "l");
    }
    return;
  }
  const TimeSamples& s = ds.time;
  write_grid(dir / "h1_sum.csv", s.h1_sum, p, m, "j", "i");
  write_grid(dir / "dh1_sum.csv", s.dh1_sum, p, m, "j", "i");
  write_grid(dir / "h1_tau.csv", s.h1_tau, p, m, "j", "zero");
  write_grid(dir / "h1_t.csv", s.h1_t, p, m, "zero", "i");
  for (Index q = 0; q < p; ++q) {
    const auto uq = static_cast<std::size_t>(q);
    write_grid(dir / ("h2_tau" + q_suffix(q)), s.h2_tau[uq], m, m, "k", "j");
    write_grid(dir / ("h2_tt" + q_suffix(q)), s.h2_tt[uq], m, m, "i", "k");
    for (const bool derivative : {false, true}) {
      const fs::path path = dir / ((derivative ? "dh2_shift" : "h2_shift") + q_suffix(q));
      auto out = open_out(path);
      out << header({"j", "k", "i"}, m * m, false) << '\n';
      for (Index j = 0; j < nq; ++j) {
        const Matrix grid = ds.shifted_grid(j, q, derivative);
        for (Index k = 0; k < np; ++k) {
          for (Index i = 0; i < np; ++i) {
            out << j << ',' << k << ',' << i;
            write_block(out, grid.block(k * m, i * m, m, m));
            out << '\n';
          }
        }
      }
      if (!out) throw std::runtime_error("write failed: " + path.string());
    }
  }
}

KernelDataset read_dataset(const fs::path& dir) {
  auto in = open_in(dir / "dataset.txt");
  std::map<std::string, std::string> manifest;
  std::string key, value;
  while (in >> key >> value) manifest[key] = value;
  const auto get = [&](const std::string& k) {
    const auto it = manifest.find(k);
    if (it == manifest.end()) throw std::runtime_error((dir / "dataset.txt").string() + ": missing " + k);
    return it->second;
  };
  KernelDataset ds;
  ds.domain = parse_domain(get("domain"));
  const Index np = std::stol(get("np"));
  const Index nq = std::stol(get("nq"));
  ds.m = std::stol(get("m"));
  ds.p = std::stol(get("p"));
  ds.conjugate_closed = get("conjugate_closed") == "1";
  ds.rule_p = read_rule(dir / "rule_p.csv", parse_rule_kind(get("rule_p")));
  ds.rule_q = read_rule(dir / "rule_q.csv", parse_rule_kind(get("rule_q")));
  ds.axis_p = read_axis(dir / "axis_p.csv");
  ds.axis_q = read_axis(dir / "axis_q.csv");
  if (ds.axis_p.size() != np || ds.axis_q.size() != nq) {
    throw std::runtime_error(dir.string() + ": axis files disagree with the manifest");
  }
  const Index m = ds.m;
  const Index p = ds.p;

  if (ds.domain == Domain::Frequency) {
    FreqSamples& f = ds.freq;
    f.h1_s = read_grid<CMatrix>(dir / "H1_s.csv", 1, nq, p, m);
    f.h1_theta = read_grid<CMatrix>(dir / "H1_theta.csv", 1, np, p, m);
    for (Index q = 0; q < p; ++q) {
      f.h2_theta_s.push_back(read_grid<CMatrix>(dir / ("H2_theta_s" + q_suffix(q)), np, nq, m, m));
      f.h2_theta_theta.push_back(
          read_grid<CMatrix>(dir / ("H2_theta_theta" + q_suffix(q)), np, np, m, m));
    }
    return ds;
  }
  TimeSamples& s = ds.time;
  s.h1_sum = read_grid<Matrix>(dir / "h1_sum.csv", nq, np, p, m);
  s.dh1_sum = read_grid<Matrix>(dir / "dh1_sum.csv", nq, np, p, m);
  s.h1_tau = read_grid<Matrix>(dir / "h1_tau.csv", nq, 1, p, m);
  s.h1_t = read_grid<Matrix>(dir / "h1_t.csv", 1, np, p, m);
  s.h2_shift.resize(static_cast<std::size_t>(p));
  s.dh2_shift.resize(static_cast<std::size_t>(p));
  for (Index q = 0; q < p; ++q) {
    s.h2_tau.push_back(read_grid<Matrix>(dir / ("h2_tau" + q_suffix(q)), np, nq, m, m));
    s.h2_tt.push_back(read_grid<Matrix>(dir / ("h2_tt" + q_suffix(q)), np, np, m, m));
    for (const bool derivative : {false, true}) {
      const fs::path path = dir / ((derivative ? "dh2_shift" : "h2_shift") + q_suffix(q));
      const Records rec = read_records(path, 3, static_cast<std::size_t>(m * m));
      std::vector<Matrix> grids(static_cast<std::size_t>(nq), Matrix(np * m, np * m));
      std::vector<char> seen(static_cast<std::size_t>(nq * np * np), 0);
      for (std::size_t n = 0; n < rec.indices.size(); ++n) {
        const Index j = rec.indices[n][0], k = rec.indices[n][1], i = rec.indices[n][2];
        if (j < 0 || j >= nq || k < 0 || k >= np || i < 0 || i >= np) {
          throw std::runtime_error(path.string() + ": index out of range");
        }
        seen[static_cast<std::size_t>((j * np + k) * np + i)] = 1;
        for (Index a = 0; a < m; ++a) {
          for (Index b = 0; b < m; ++b) {
            grids[static_cast<std::size_t>(j)](k * m + a, i * m + b) =
                rec.values[n][static_cast<std::size_t>(a * m + b)];
          }
        }
      }
      for (char c : seen) {
        if (!c) throw std::runtime_error(path.string() + ": missing samples");
      }
      (derivative ? s.dh2_shift : s.h2_shift)[static_cast<std::size_t>(q)] = std::move(grids);
    }
  }
  return ds;
}

}  // namespace lqo
