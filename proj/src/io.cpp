#include "symflow/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace symflow::io {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int require_int(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc.at(key).is_number_integer())
    throw Error(ErrorKind::Parse, std::string("missing integer field \"") + key + "\"");
  return doc.at(key).get<int>();
}

}  // namespace

json matrix_to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat matrix_from_json(const json& rows, Eigen::Index expected_rows, Eigen::Index expected_cols) {
  if (!rows.is_array()) throw Error(ErrorKind::Parse, "matrix must be an array");
  Mat m(expected_rows, expected_cols);
  const auto number = [](const json& v) {
    if (!v.is_number()) throw Error(ErrorKind::Parse, "matrix entries must be numbers");
    return v.get<double>();
  };
  const bool flat = !rows.empty() && !rows.front().is_array();
  if (flat || (rows.empty() && expected_rows * expected_cols == 0 && expected_cols == 0)) {
    if (static_cast<Eigen::Index>(rows.size()) != expected_rows * expected_cols)
      throw Error(ErrorKind::Parse, "flat matrix has the wrong number of entries");
    for (Eigen::Index i = 0; i < expected_rows; ++i)
      for (Eigen::Index j = 0; j < expected_cols; ++j)
        m(i, j) = number(rows[static_cast<std::size_t>(i * expected_cols + j)]);
    return m;
  }
  if (static_cast<Eigen::Index>(rows.size()) != expected_rows)
    throw Error(ErrorKind::Parse, "matrix has the wrong number of rows");
  for (Eigen::Index i = 0; i < expected_rows; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != expected_cols)
      throw Error(ErrorKind::Parse, "matrix row has the wrong length");
    for (Eigen::Index j = 0; j < expected_cols; ++j)
      m(i, j) = number(row[static_cast<std::size_t>(j)]);
  }
  return m;
}

Subspace subspace_from_json(const json& doc, bool reorthonormalize) {
  if (!doc.is_object()) throw Error(ErrorKind::Parse, "subspace document must be an object");
  const int n = require_int(doc, "n");
  const int k = require_int(doc, "k");
  if (n < 1 || k < 0 || k > 2 * n) throw Error(ErrorKind::Parse, "invalid n or k");
  if (!doc.contains("basis")) throw Error(ErrorKind::Parse, "missing field \"basis\"");
  const Mat basis = matrix_from_json(doc.at("basis"), 2 * n, k);
  const SpacePtr space = make_standard_space(n);
  if (reorthonormalize) return subspace_from_spanning(space, basis);
  const double dev = max_abs(basis.transpose() * basis - Mat::Identity(k, k));
  if (dev > 1e-12)
    throw Error(ErrorKind::Parse, "basis is not orthonormal (deviation " + fmt17(dev) +
                                      "); pass the reorthonormalize flag to accept it");
  return Subspace(space, basis);
}

json subspace_to_json(const Subspace& w) {
  return json{{"n", w.n()}, {"k", w.k()}, {"basis", matrix_to_json(w.basis())}};
}

Subspace read_subspace(const std::string& path, bool reorthonormalize) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, path + ": " + e.what());
  }
  return subspace_from_json(doc, reorthonormalize);
}

void write_subspace(const std::string& path, const Subspace& w) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  out << subspace_to_json(w).dump(2) << '\n';
}

json darboux_to_json(const DarbouxBasis& basis, const std::vector<double>& angles) {
  std::vector<double> sorted = angles;
  std::sort(sorted.begin(), sorted.end());
  return json{{"n", basis.e.rows() / 2},
              {"e0", matrix_to_json(basis.e0())},
              {"eplus", matrix_to_json(basis.eplus())},
              {"eminus", matrix_to_json(basis.eminus())},
              {"f0", matrix_to_json(basis.f0())},
              {"fplus", matrix_to_json(basis.fplus())},
              {"fminus", matrix_to_json(basis.fminus())},
              {"angles", sorted}};
}

DarbouxBasis darboux_from_json(const json& doc) {
  const int n = require_int(doc, "n");
  const auto cols = [&](const char* key) -> Eigen::Index {
    if (!doc.contains(key) || !doc.at(key).is_array())
      throw Error(ErrorKind::Parse, std::string("missing block \"") + key + "\"");
    const json& rows = doc.at(key);
    if (static_cast<int>(rows.size()) != 2 * n)
      throw Error(ErrorKind::Parse, std::string("block \"") + key + "\" needs 2n rows");
    return rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size());
  };
  DarbouxBasis b;
  b.n0 = static_cast<int>(cols("e0"));
  b.nplus = static_cast<int>(cols("eplus"));
  b.nminus = static_cast<int>(cols("eminus"));
  if (b.n0 + b.nplus + b.nminus != n || cols("f0") != b.n0 || cols("fplus") != b.nplus ||
      cols("fminus") != b.nminus)
    throw Error(ErrorKind::Parse, "Darboux block sizes are inconsistent");
  b.e.resize(2 * n, n);
  b.f.resize(2 * n, n);
  b.e << matrix_from_json(doc.at("e0"), 2 * n, b.n0),
      matrix_from_json(doc.at("eplus"), 2 * n, b.nplus),
      matrix_from_json(doc.at("eminus"), 2 * n, b.nminus);
  b.f << matrix_from_json(doc.at("f0"), 2 * n, b.n0),
      matrix_from_json(doc.at("fplus"), 2 * n, b.nplus),
      matrix_from_json(doc.at("fminus"), 2 * n, b.nminus);
  return b;
}

void write_trajectory_csv(std::ostream& out, const FlowTrajectory& traj) {
  out << kTrajectoryHeader << '\n';
  for (const FlowSample& s : traj.samples) {
    out << s.step << ',' << fmt17(s.t) << ',' << fmt17(s.f) << ',' << fmt17(s.grad_norm) << ','
        << s.type.n0 << ',' << s.type.nplus << ',' << s.type.nminus << ',' << fmt17(s.min_angle)
        << ',' << fmt17(s.residual) << '\n';
  }
}

json report_to_json(const OracleReport& r) {
  return json{{"name", r.name},           {"max_abs_error", r.max_abs_error},
              {"max_rel_error", r.max_rel_error}, {"samples", r.samples},
              {"pass", r.pass},           {"seed", r.seed},
              {"tolerance", r.tolerance},     {"failures", r.failures},
              {"note", r.note}};
}

}  // namespace symflow::io
