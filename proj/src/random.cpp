#include "symflow/random.hpp"

namespace symflow {

namespace {

Mat standard_j(int n) {
  Mat j = Mat::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = -Mat::Identity(n, n);
  j.bottomLeftCorner(n, n) = Mat::Identity(n, n);
  return j;
}

}  // namespace

std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) noexcept {
  std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Mat gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  Mat m(rows, cols);
  // Fill column by column so the draw order is independent of Eigen internals.
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

Mat random_symplectic(int n, Rng& rng, double sigma) {
  const Mat a = gaussian_matrix(2 * n, 2 * n, rng, sigma);
  const Mat s = 0.5 * (a + a.transpose());
  return expm(standard_j(n) * s);
}

Mat random_unitary(int n, Rng& rng, double sigma) {
  const Mat a = gaussian_matrix(2 * n, 2 * n, rng, sigma);
  const Mat skew = 0.5 * (a - a.transpose());
  const Mat j = standard_j(n);
  const Mat xi = 0.5 * (skew + j * skew * j.transpose());
  return expm(xi);
}

}  // namespace symflow
