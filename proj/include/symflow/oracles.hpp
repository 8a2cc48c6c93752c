#pragma once

// Brute-force and finite-difference cross-checks. Nothing here calls the
// closed-form derivative code, so agreement with it is evidence.

#include <cstdint>
#include <string>
#include <vector>

#include "symflow/random.hpp"
#include "symflow/symplectic_core.hpp"

namespace symflow {

struct OracleReport {
  std::string name;
  double max_abs_error = 0.0;
  double max_rel_error = 0.0;
  long samples = 0;
  bool pass = false;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  /// Samples whose error exceeded the tolerance or that raised an error.
  long failures = 0;
  /// First failure message, empty when none.
  std::string note;
};

/// Random k-dimensional subspace from a Gaussian spanning matrix.
Subspace random_subspace(const SpacePtr& space, int k, Rng& rng);

/// Random unit tangent direction at W as a symmetric 2n x 2n matrix.
Mat random_tangent(const Subspace& w, Rng& rng);

/// Energy along the curve t -> span(B + t (I - P) Y B).
double energy_along(const Subspace& w, const Mat& direction, double t);

/// Central difference (f(h) - f(-h)) / 2h along `direction`.
double fd_directional_derivative(const Subspace& w, const Mat& direction, double h = 1e-5);

/// Central differences along an orthonormal tangent frame, assembled into a
/// symmetric matrix. Requires 0 < h <= 1e-3.
Mat fd_gradient(const Subspace& w, double h = 1e-5);

struct FdHessian {
  std::vector<Mat> frame;
  Mat matrix;
};

/// Second differences of f on an orthonormal tangent frame. Throws
/// NotCritical when the finite-difference gradient is not small.
FdHessian fd_hessian(const Subspace& w, double h = 1e-4, double grad_tol = 1e-6);

/// Type from the rank of the omega Gram matrix of a randomized,
/// non-orthonormal spanning set of W.
TypeSignature pairing_rank_classifier(const Subspace& w, std::uint64_t seed,
                                      const Tolerances& tol = {});

/// g(t) acting on R^4: the cosh/sinh one-parameter subgroup of Sp(4).
Mat worked_example_group_element(double t);

/// W(t) = g(t) span{e1, f1} in R^4.
Subspace worked_example_family(double t);

/// Closed-form projection onto W(t).
Mat worked_example_projection(double t);

/// Closed-form energy 2 tanh^2(2t).
double worked_example_energy(double t);

}  // namespace symflow
