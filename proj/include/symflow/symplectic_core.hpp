#pragma once

// Standard symplectic model (R^2n, omega, J, g) and subspace-level linear
// algebra: complements, intersections, type classification, Kahler spectra.

#include <memory>
#include <vector>

#include "symflow/errors.hpp"
#include "symflow/linalg.hpp"

namespace symflow {

/// Numerical cuts for the discrete invariants. Singular values of the
/// restricted form are compared against `rank_tol` (the form has operator
/// norm 1 on orthonormal bases, so the cut is absolute); eigenvalues of
/// S = -T^2 and of P1 + P2 are clustered with `cluster_tol`.
struct Tolerances {
  double rank_tol = 1e-9;
  double cluster_tol = 1e-7;
  /// A singular value within this factor of `rank_tol` is ambiguous.
  double unstable_factor = 10.0;
};

/// The fixed model: omega = J = [[0, -I], [I, 0]], metric = identity.
/// omega(u, v) = v^T omega u and g(u, v) = omega(u, J v) = u . v.
class SymplecticSpace {
 public:
  explicit SymplecticSpace(int n);

  int n() const noexcept { return n_; }
  int dim() const noexcept { return 2 * n_; }
  const Mat& omega() const noexcept { return omega_; }
  const Mat& J() const noexcept { return j_; }
  const Mat& metric() const noexcept { return metric_; }

  double form(const Vec& u, const Vec& v) const { return v.dot(omega_ * u); }
  double inner(const Vec& u, const Vec& v) const { return form(u, j_ * v); }

  /// Matrix of pairings omega(a_i, b_j) for the columns of a and b.
  Mat pairing(const Mat& a, const Mat& b) const { return -a.transpose() * omega_ * b; }

 private:
  int n_;
  Mat omega_;
  Mat j_;
  Mat metric_;
};

using SpacePtr = std::shared_ptr<const SymplecticSpace>;

SpacePtr make_standard_space(int n);

/// A k-dimensional linear subspace held by an orthonormal basis together
/// with its orthogonal projection. Immutable once built.
class Subspace {
 public:
  /// Takes an already orthonormal basis; throws InvalidArgument when
  /// basis^T basis deviates from the identity by more than `ortho_tol`.
  Subspace(SpacePtr space, Mat basis, double ortho_tol = 1e-12);

  const SymplecticSpace& space() const noexcept { return *space_; }
  const SpacePtr& space_ptr() const noexcept { return space_; }
  int n() const noexcept { return space_->n(); }
  int k() const noexcept { return static_cast<int>(basis_.cols()); }
  const Mat& basis() const noexcept { return basis_; }
  const Mat& projection() const noexcept { return projection_; }

  /// T = B^T J B, the compression of J to W in basis coordinates.
  Mat restricted_j() const { return basis_.transpose() * space_->J() * basis_; }

 private:
  SpacePtr space_;
  Mat basis_;
  Mat projection_;
};

struct TypeSignature {
  int n0 = 0;
  int nplus = 0;
  int nminus = 0;

  int n() const noexcept { return n0 + nplus + nminus; }
  int k() const noexcept { return n0 + 2 * nplus; }
  friend bool operator==(const TypeSignature&, const TypeSignature&) = default;
};

/// True when all entries are nonnegative and they sum to n.
bool is_consistent(const TypeSignature& sig, int n) noexcept;

/// Every signature (n0, n+, n-) with n0 + n+ + n- = n, ordered by k then n0.
std::vector<TypeSignature> all_signatures(int n);

struct KahlerSpectrum {
  int n0 = 0;
  int nJ = 0;
  int ntheta = 0;
  /// Kahler angles of the totally real pairs, ascending, each in (0, pi/2).
  std::vector<double> angles;
  /// Raw eigenvalues of S = -T^2, ascending.
  Vec eigenvalues;
};

Subspace subspace_from_spanning(const SpacePtr& space, const Mat& spanning,
                                const Tolerances& tol = {});

/// W^omega, computed as the orthogonal complement of J W.
Subspace symplectic_complement(const Subspace& w);

/// W1 intersect W2 from the eigenvalue-2 eigenspace of P1 + P2.
Subspace intersect(const Subspace& w1, const Subspace& w2, const Tolerances& tol = {});

/// W_0 = W intersect W^omega, read off as the numerical kernel of T.
Subspace isotropic_kernel(const Subspace& w, const Tolerances& tol = {});

/// W intersect JW, the eigenvalue-1 eigenspace of S = -T^2.
Subspace max_complex_subspace(const Subspace& w, const Tolerances& tol = {});

/// Orthogonal complement of `inner` inside `outer` (inner must be contained
/// in outer up to roundoff).
Subspace complement_within(const Subspace& outer, const Subspace& inner);

/// The subspace J W.
Subspace apply_j(const Subspace& w);

/// g W for an invertible 2n x 2n matrix g, reorthonormalized.
Subspace transform(const Mat& g, const Subspace& w, const Tolerances& tol = {});

TypeSignature classify(const Subspace& w, const Tolerances& tol = {});

KahlerSpectrum kahler_spectrum(const Subspace& w, const Tolerances& tol = {});

struct CompatibilityReport {
  bool compatible = false;
  double residual = 0.0;
};

CompatibilityReport is_J_compatible(const Subspace& w, const Tolerances& tol = {});

/// Checks that W (k > n) contains a complex subspace of complex dimension at
/// least k - n. Throws NotApplicable when k <= n.
bool min_complex_check(const Subspace& w, const Tolerances& tol = {});

/// Frobenius distance between the orthogonal projections of two subspaces.
double projection_distance(const Subspace& a, const Subspace& b);

/// Subspace spanned by the given standard basis vectors: index i < n is e_{i+1},
/// index n + i is f_{i+1} = J e_{i+1}.
Subspace coordinate_subspace(const SpacePtr& space, const std::vector<int>& indices);

}  // namespace symflow
