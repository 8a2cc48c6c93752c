#include "symflow/oracles.hpp"

#include <cmath>

namespace symflow {

namespace {

double half_trace_commutator_squared(const Mat& p, const Mat& j) {
  const Mat c = p * j - j * p;
  return 0.5 * (c * c).trace();
}

// Orthonormal tangent frame in Hom(W, W-perp) form; kept local so the
// oracle does not share the frame code of the closed-form Hessian.
std::vector<Mat> local_frame(const Subspace& w) {
  const Mat& b = w.basis();
  const Mat perp = orthogonal_complement(b);
  std::vector<Mat> frame;
  for (Eigen::Index j = 0; j < b.cols(); ++j)
    for (Eigen::Index i = 0; i < perp.cols(); ++i) {
      Mat e = perp.col(i) * b.col(j).transpose();
      e = (e + e.transpose()).eval() / std::sqrt(2.0);
      frame.push_back(e);
    }
  return frame;
}

Mat curve_projection(const Subspace& w, const Mat& shift) {
  const Mat q = orthonormalize(w.basis() + shift);
  return q * q.transpose();
}

}  // namespace

Subspace random_subspace(const SpacePtr& space, int k, Rng& rng) {
  return subspace_from_spanning(space, gaussian_matrix(space->dim(), k, rng));
}

Mat random_tangent(const Subspace& w, Rng& rng) {
  const Mat perp = orthogonal_complement(w.basis());
  const Mat m = gaussian_matrix(perp.cols(), w.k(), rng);
  Mat y = perp * m * w.basis().transpose();
  y += y.transpose().eval();
  const double norm = y.norm();
  return norm > 0.0 ? Mat(y / norm) : y;
}

double energy_along(const Subspace& w, const Mat& direction, double t) {
  const Mat lift = (Mat::Identity(w.space().dim(), w.space().dim()) - w.projection()) *
                   direction * w.basis();
  return half_trace_commutator_squared(curve_projection(w, t * lift), w.space().J());
}

double fd_directional_derivative(const Subspace& w, const Mat& direction, double h) {
  return (energy_along(w, direction, h) - energy_along(w, direction, -h)) / (2.0 * h);
}

Mat fd_gradient(const Subspace& w, double h) {
  if (!(h > 0.0 && h <= 1e-3))
    throw Error(ErrorKind::InvalidArgument, "finite-difference step must lie in (0, 1e-3]");
  const int dim = w.space().dim();
  Mat grad = Mat::Zero(dim, dim);
  for (const Mat& e : local_frame(w)) grad += fd_directional_derivative(w, e, h) * e;
  return grad;
}

FdHessian fd_hessian(const Subspace& w, double h, double grad_tol) {
  if (!(h > 0.0 && h <= 1e-2))
    throw Error(ErrorKind::InvalidArgument, "finite-difference step must lie in (0, 1e-2]");
  const double gnorm = fd_gradient(w, std::min(h, 1e-5)).norm();
  if (gnorm > grad_tol)
    throw Error(ErrorKind::NotCritical,
                "finite-difference gradient norm " + std::to_string(gnorm) + " is not small");
  FdHessian out;
  out.frame = local_frame(w);
  const auto m = static_cast<Eigen::Index>(out.frame.size());
  const int dim = w.space().dim();
  const Mat perp_proj = Mat::Identity(dim, dim) - w.projection();
  const Mat& j = w.space().J();
  std::vector<Mat> lifts;
  for (const Mat& e : out.frame) lifts.push_back(perp_proj * e * w.basis());
  const auto f_at = [&](const Mat& shift) {
    return half_trace_commutator_squared(curve_projection(w, shift), j);
  };
  const double f0 = f_at(Mat::Zero(dim, w.k()));
  out.matrix.resize(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    const Mat& la = lifts[static_cast<std::size_t>(a)];
    out.matrix(a, a) = (f_at(h * la) - 2.0 * f0 + f_at(-h * la)) / (h * h);
    for (Eigen::Index b = a + 1; b < m; ++b) {
      const Mat& lb = lifts[static_cast<std::size_t>(b)];
      const double v = (f_at(h * (la + lb)) - f_at(h * (la - lb)) - f_at(h * (lb - la)) +
                        f_at(-h * (la + lb))) /
                       (4.0 * h * h);
      out.matrix(a, b) = v;
      out.matrix(b, a) = v;
    }
  }
  return out;
}

TypeSignature pairing_rank_classifier(const Subspace& w, std::uint64_t seed,
                                      const Tolerances& tol) {
  TypeSignature sig;
  const int k = w.k();
  sig.nminus = w.n();
  if (k == 0) return sig;
  Rng rng(seed);
  // Well-conditioned random change of basis: orthogonal times a diagonal in [1/2, 2].
  const Mat q = orthonormalize(gaussian_matrix(k, k, rng));
  std::uniform_real_distribution<double> scale(0.5, 2.0);
  Vec d(k);
  for (int i = 0; i < k; ++i) d(i) = scale(rng);
  const Mat spanning = w.basis() * q * d.asDiagonal();

  // omega(s_i, s_j) for all spanning vectors.
  const Mat& omega = w.space().omega();
  Mat gram(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) gram(i, j) = spanning.col(j).dot(omega * spanning.col(i));

  const Vec sigma = gram.jacobiSvd().singularValues();
  const double bound = spanning.jacobiSvd().singularValues()(0);
  const double cut = tol.rank_tol * bound * bound;
  int rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cut / tol.unstable_factor && sigma(i) < cut * tol.unstable_factor)
      throw Error(ErrorKind::ClassificationUnstable, "pairing Gram matrix is near the rank cut");
    if (sigma(i) > cut) ++rank;
  }
  if (rank % 2 != 0)
    throw Error(ErrorKind::ClassificationUnstable, "pairing Gram matrix has odd rank");
  sig.n0 = k - rank;
  sig.nplus = rank / 2;
  sig.nminus = w.n() - sig.n0 - sig.nplus;
  return sig;
}

Mat worked_example_group_element(double t) {
  const double c = std::cosh(t), s = std::sinh(t);
  Mat g(4, 4);
  g << c, 0, 0, s,  //
      0, c, s, 0,   //
      0, s, c, 0,   //
      s, 0, 0, c;
  return g;
}

Subspace worked_example_family(double t) {
  // Columns of g(t) applied to e1 and f1 = e3 are orthogonal with equal norm
  // sqrt(cosh 2t); normalize them directly.
  const Mat g = worked_example_group_element(t);
  Mat basis(4, 2);
  basis.col(0) = g.col(0);
  basis.col(1) = g.col(2);
  basis /= std::sqrt(std::cosh(2.0 * t));
  return Subspace(make_standard_space(2), basis);
}

Mat worked_example_projection(double t) {
  const double c = std::cosh(t), s = std::sinh(t);
  Mat p(4, 4);
  p << c * c, 0, 0, c * s,  //
      0, s * s, s * c, 0,   //
      0, s * c, c * c, 0,   //
      c * s, 0, 0, s * s;
  return p / std::cosh(2.0 * t);
}

double worked_example_energy(double t) {
  const double th = std::tanh(2.0 * t);
  return 2.0 * th * th;
}

}  // namespace symflow
