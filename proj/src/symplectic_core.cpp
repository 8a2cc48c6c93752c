#include "symflow/symplectic_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace symflow {

namespace {

void require_same_space(const Subspace& a, const Subspace& b) {
  if (a.n() != b.n())
    throw Error(ErrorKind::InvalidArgument, "subspaces live in different ambient spaces");
}

struct KernelSplit {
  Mat kernel;  // k x n0 coordinates of the numerical kernel of T
  int rank = 0;
};

// Numerical kernel of the skew matrix T = B^T J B with the ambiguity check
// shared by classify and isotropic_kernel.
KernelSplit split_restricted_form(const Subspace& w, const Tolerances& tol) {
  const int k = w.k();
  KernelSplit out;
  if (k == 0) {
    out.kernel = Mat(0, 0);
    return out;
  }
  Eigen::JacobiSVD<Mat> svd(w.restricted_j(), Eigen::ComputeFullV);
  const Vec& sigma = svd.singularValues();
  const double cut = tol.rank_tol;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cut / tol.unstable_factor && sigma(i) < cut * tol.unstable_factor)
      throw Error(ErrorKind::ClassificationUnstable,
                  "singular value " + std::to_string(sigma(i)) + " is within a factor " +
                      std::to_string(tol.unstable_factor) + " of the rank cut");
    if (sigma(i) > cut) ++out.rank;
  }
  if (out.rank % 2 != 0)
    throw Error(ErrorKind::ClassificationUnstable, "restricted form has odd numerical rank");
  out.kernel = svd.matrixV().rightCols(k - out.rank);
  return out;
}

}  // namespace

SymplecticSpace::SymplecticSpace(int n) : n_(n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "half-dimension n must be at least 1");
  const int d = 2 * n;
  omega_ = Mat::Zero(d, d);
  omega_.topRightCorner(n, n) = -Mat::Identity(n, n);
  omega_.bottomLeftCorner(n, n) = Mat::Identity(n, n);
  j_ = omega_;
  metric_ = Mat::Identity(d, d);
}

SpacePtr make_standard_space(int n) { return std::make_shared<const SymplecticSpace>(n); }

Subspace::Subspace(SpacePtr space, Mat basis, double ortho_tol)
    : space_(std::move(space)), basis_(std::move(basis)) {
  if (!space_) throw Error(ErrorKind::InvalidArgument, "null ambient space");
  if (basis_.rows() != space_->dim())
    throw Error(ErrorKind::InvalidArgument,
                "basis has " + std::to_string(basis_.rows()) + " rows, expected " +
                    std::to_string(space_->dim()));
  const Eigen::Index k = basis_.cols();
  const double dev = max_abs(basis_.transpose() * basis_ - Mat::Identity(k, k));
  if (dev > ortho_tol)
    throw Error(ErrorKind::InvalidArgument,
                "basis is not orthonormal (deviation " + std::to_string(dev) + ")");
  projection_ = projection_of(basis_);
}

bool is_consistent(const TypeSignature& sig, int n) noexcept {
  return sig.n0 >= 0 && sig.nplus >= 0 && sig.nminus >= 0 && sig.n() == n;
}

std::vector<TypeSignature> all_signatures(int n) {
  std::vector<TypeSignature> out;
  for (int k = 0; k <= 2 * n; ++k)
    for (int nplus = 0; 2 * nplus <= k; ++nplus) {
      const int n0 = k - 2 * nplus;
      const int nminus = n - n0 - nplus;
      if (nminus >= 0) out.push_back({n0, nplus, nminus});
    }
  std::stable_sort(out.begin(), out.end(), [](const TypeSignature& a, const TypeSignature& b) {
    return a.k() != b.k() ? a.k() < b.k() : a.n0 < b.n0;
  });
  return out;
}

Subspace subspace_from_spanning(const SpacePtr& space, const Mat& spanning,
                                const Tolerances& tol) {
  if (!space) throw Error(ErrorKind::InvalidArgument, "null ambient space");
  if (spanning.rows() != space->dim())
    throw Error(ErrorKind::InvalidArgument, "spanning matrix has wrong row count");
  const Eigen::Index k = spanning.cols();
  if (k == 0) return Subspace(space, Mat(space->dim(), 0));
  if (k > spanning.rows()) throw Error(ErrorKind::RankDeficient, "more columns than rows");
  const Vec sigma = spanning.jacobiSvd().singularValues();
  const double cut = tol.rank_tol * sigma(0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    if (sigma(i) > cut) ++rank;
  if (sigma(0) == 0.0 || rank < k)
    throw Error(ErrorKind::RankDeficient,
                "numerical rank " + std::to_string(rank) + " < " + std::to_string(k));
  return Subspace(space, orthonormalize(spanning));
}

Subspace symplectic_complement(const Subspace& w) {
  const Mat jw = w.space().J() * w.basis();
  return Subspace(w.space_ptr(), orthogonal_complement(jw));
}

Subspace intersect(const Subspace& w1, const Subspace& w2, const Tolerances& tol) {
  require_same_space(w1, w2);
  const Mat sum = w1.projection() + w2.projection();
  const Mat v = eigenspace(0.5 * (sum + sum.transpose()), 2.0 - tol.cluster_tol, 3.0);
  return Subspace(w1.space_ptr(), orthonormalize(v));
}

Subspace isotropic_kernel(const Subspace& w, const Tolerances& tol) {
  const KernelSplit split = split_restricted_form(w, tol);
  return Subspace(w.space_ptr(), orthonormalize(w.basis() * split.kernel));
}

Subspace max_complex_subspace(const Subspace& w, const Tolerances& tol) {
  if (w.k() == 0) return w;
  const Mat t = w.restricted_j();
  const Mat s = t.transpose() * t;
  const Mat coords = eigenspace(0.5 * (s + s.transpose()), 1.0 - tol.cluster_tol, 2.0);
  return Subspace(w.space_ptr(), orthonormalize(w.basis() * coords));
}

Subspace complement_within(const Subspace& outer, const Subspace& inner) {
  require_same_space(outer, inner);
  const Mat coords = outer.basis().transpose() * inner.basis();
  const Mat rest = orthogonal_complement(orthonormalize(coords));
  return Subspace(outer.space_ptr(), orthonormalize(outer.basis() * rest));
}

Subspace apply_j(const Subspace& w) {
  // J is orthogonal, so J B is already orthonormal.
  return Subspace(w.space_ptr(), w.space().J() * w.basis());
}

Subspace transform(const Mat& g, const Subspace& w, const Tolerances& tol) {
  return subspace_from_spanning(w.space_ptr(), g * w.basis(), tol);
}

TypeSignature classify(const Subspace& w, const Tolerances& tol) {
  const KernelSplit split = split_restricted_form(w, tol);
  TypeSignature sig;
  sig.n0 = w.k() - split.rank;
  sig.nplus = split.rank / 2;
  sig.nminus = w.n() - sig.n0 - sig.nplus;
  return sig;
}

KahlerSpectrum kahler_spectrum(const Subspace& w, const Tolerances& tol) {
  KahlerSpectrum out;
  const int k = w.k();
  if (k == 0) {
    out.eigenvalues = Vec(0);
    return out;
  }
  const Mat t = w.restricted_j();
  const Mat s = t.transpose() * t;  // = -T^2
  Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (s + s.transpose()), Eigen::EigenvaluesOnly);
  out.eigenvalues = eig.eigenvalues();

  std::vector<double> middle;
  int ones = 0;
  for (Eigen::Index i = 0; i < out.eigenvalues.size(); ++i) {
    const double lambda = out.eigenvalues(i);
    if (lambda < tol.cluster_tol)
      ++out.n0;
    else if (lambda > 1.0 - tol.cluster_tol)
      ++ones;
    else
      middle.push_back(lambda);
  }
  if (ones % 2 != 0)
    throw Error(ErrorKind::SpectrumPairingFailure, "eigenvalue 1 has odd multiplicity");
  if (middle.size() % 2 != 0)
    throw Error(ErrorKind::SpectrumPairingFailure, "odd number of intermediate eigenvalues");
  out.nJ = ones / 2;
  out.ntheta = static_cast<int>(middle.size() / 2);
  // middle is ascending in lambda = cos^2(theta), i.e. descending in theta.
  for (std::size_t i = middle.size(); i >= 2; i -= 2) {
    const double a = middle[i - 2], b = middle[i - 1];
    if (b - a > tol.cluster_tol)
      throw Error(ErrorKind::SpectrumPairingFailure,
                  "eigenvalues " + std::to_string(a) + " and " + std::to_string(b) +
                      " do not pair");
    out.angles.push_back(std::acos(std::sqrt(0.5 * (a + b))));
  }
  return out;
}

CompatibilityReport is_J_compatible(const Subspace& w, const Tolerances& tol) {
  const KahlerSpectrum spec = kahler_spectrum(w, tol);
  CompatibilityReport out;
  out.compatible = spec.ntheta == 0;
  for (double theta : spec.angles) out.residual += 2.0 * std::sin(theta) * std::sin(theta);
  for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
    const double lambda = spec.eigenvalues(i);
    out.residual += std::min(std::abs(lambda), std::abs(1.0 - lambda));
  }
  return out;
}

bool min_complex_check(const Subspace& w, const Tolerances& tol) {
  if (w.k() <= w.n())
    throw Error(ErrorKind::NotApplicable, "minimal complex subspace bound needs k > n");
  return kahler_spectrum(w, tol).nJ >= w.k() - w.n();
}

double projection_distance(const Subspace& a, const Subspace& b) {
  require_same_space(a, b);
  return (a.projection() - b.projection()).norm();
}

Subspace coordinate_subspace(const SpacePtr& space, const std::vector<int>& indices) {
  Mat basis = Mat::Zero(space->dim(), static_cast<Eigen::Index>(indices.size()));
  for (std::size_t c = 0; c < indices.size(); ++c) {
    const int idx = indices[c];
    if (idx < 0 || idx >= space->dim())
      throw Error(ErrorKind::InvalidArgument, "coordinate index out of range");
    basis(idx, static_cast<Eigen::Index>(c)) = 1.0;
  }
  return Subspace(space, basis);
}

}  // namespace symflow
