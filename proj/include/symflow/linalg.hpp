#pragma once

#include <Eigen/Dense>

namespace symflow {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

inline Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }
inline Mat anticommutator(const Mat& a, const Mat& b) { return a * b + b * a; }

inline double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Trace inner product <A, B> = Tr(A B^T).
inline double trace_inner(const Mat& a, const Mat& b) { return (a.array() * b.array()).sum(); }

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
/// The series is summed until the next term drops below 1e-16 relative to the
/// partial sum, which is well under the 1e-13 accuracy target for the small
/// (at most 20x20) matrices used here.
Mat expm(const Mat& a);

/// Orthonormal basis of the column span of `m` via Householder QR, with the
/// sign of each column fixed so that diag(R) >= 0. Assumes full column rank.
Mat orthonormalize(const Mat& m);

/// Orthonormal basis of the orthogonal complement of the column span of an
/// orthonormal `basis` (the trailing columns of a full QR).
Mat orthogonal_complement(const Mat& basis);

/// Orthonormal eigenvectors of a symmetric matrix whose eigenvalues satisfy
/// `lo <= lambda <= hi`, in ascending eigenvalue order.
Mat eigenspace(const Mat& symmetric, double lo, double hi);

inline Mat projection_of(const Mat& basis) { return basis * basis.transpose(); }

}  // namespace symflow
