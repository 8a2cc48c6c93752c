#include "symflow/linalg.hpp"

#include <cmath>

namespace symflow {

Mat expm(const Mat& a) {
  const Eigen::Index dim = a.rows();
  if (dim == 0) return a;
  // 1-norm bounds the spectral radius; scale so it is at most 1/2.
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Mat scaled = a / std::ldexp(1.0, squarings);

  Mat result = Mat::Identity(dim, dim);
  Mat term = Mat::Identity(dim, dim);
  for (int i = 1; i < 40; ++i) {
    term = term * scaled / static_cast<double>(i);
    result += term;
    if (max_abs(term) <= 1e-16 * max_abs(result)) break;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

Mat orthonormalize(const Mat& m) {
  const Eigen::Index rows = m.rows(), cols = m.cols();
  if (cols == 0) return Mat(rows, 0);
  Eigen::HouseholderQR<Mat> qr(m);
  Mat q = qr.householderQ() * Mat::Identity(rows, cols);
  const Mat r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < cols; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

Mat orthogonal_complement(const Mat& basis) {
  const Eigen::Index rows = basis.rows(), cols = basis.cols();
  if (cols == 0) return Mat::Identity(rows, rows);
  Eigen::HouseholderQR<Mat> qr(basis);
  const Mat q = qr.householderQ();
  return q.rightCols(rows - cols);
}

Mat eigenspace(const Mat& symmetric, double lo, double hi) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(symmetric);
  const Vec& values = eig.eigenvalues();
  Eigen::Index count = 0;
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (values(i) >= lo && values(i) <= hi) ++count;
  Mat out(symmetric.rows(), count);
  Eigen::Index c = 0;
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (values(i) >= lo && values(i) <= hi) out.col(c++) = eig.eigenvectors().col(i);
  return out;
}

}  // namespace symflow
