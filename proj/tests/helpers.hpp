#pragma once

#include <initializer_list>

#include "symflow/symplectic_core.hpp"

namespace testing {

using symflow::Mat;
using symflow::Vec;

// Standard basis vectors: e(n, i) and f(n, i) = J e(n, i), zero-based.
inline Vec e(int n, int i) {
  Vec v = Vec::Zero(2 * n);
  v(i) = 1.0;
  return v;
}
inline Vec f(int n, int i) {
  Vec v = Vec::Zero(2 * n);
  v(n + i) = 1.0;
  return v;
}

inline Mat columns(std::initializer_list<Vec> cols) {
  const auto rows = cols.begin()->size();
  Mat m(rows, static_cast<Eigen::Index>(cols.size()));
  Eigen::Index j = 0;
  for (const Vec& c : cols) m.col(j++) = c;
  return m;
}

inline symflow::Subspace span(int n, std::initializer_list<Vec> cols) {
  return symflow::subspace_from_spanning(symflow::make_standard_space(n), columns(cols));
}

inline bool same_subspace(const symflow::Subspace& a, const symflow::Subspace& b,
                          double tol = 1e-10) {
  return a.k() == b.k() && symflow::projection_distance(a, b) < tol;
}

}  // namespace testing
