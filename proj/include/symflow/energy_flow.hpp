#pragma once

// Energy f(P) = 1/2 |[P, J]|^2 on the Grassmannian, its derivatives, the
// fundamental vector fields of sp(V), and the negative gradient flow
// integrated through the symplectic group action.

#include <vector>

#include "symflow/symplectic_core.hpp"

namespace symflow {

/// Symmetric 2n x 2n matrix X tangent at `at`: {2P - I, X} = 0.
struct TangentVector {
  Subspace at;
  Mat matrix;
};

enum class Flavor { Orthogonal, Symplectic, Both };

struct LieAlgebraElement {
  Mat matrix;
  Flavor flavor = Flavor::Symplectic;
};

/// Throws FlavorViolation when `xi` does not satisfy its declared flavor
/// (xi J + J xi^T = 0 for symplectic, xi^T = -xi for orthogonal, both plus
/// [xi, J] = 0 for Both) within `tol` relative to max(1, |xi|).
void check_flavor(const LieAlgebraElement& xi, const SymplecticSpace& space, double tol = 1e-12);

struct FlowConfig {
  double step = 0.1;
  double grad_tol = 1e-10;
  long max_steps = 100000;
  double shrink = 0.5;
  long record_every = 1;
  /// Step size doubles after this many consecutive accepted steps.
  int grow_after = 20;
  double max_step = 1.0;
  Tolerances tol{};
};

struct FlowSample {
  long step = 0;
  double t = 0.0;
  Mat basis;
  double f = 0.0;
  double grad_norm = 0.0;
  TypeSignature type;
  /// Smallest Kahler angle of the totally real pairs, 0 when there are none.
  double min_angle = 0.0;
  /// J-compatibility residual (zero exactly on the critical set).
  double residual = 0.0;
};

struct FlowTrajectory {
  std::vector<FlowSample> samples;
  Subspace limit;
  bool converged = false;
  long steps = 0;
  long rejected = 0;
};

struct StepResult {
  Subspace next;
  double f_before = 0.0;
  double f_after = 0.0;
  /// False when the step raised the energy; the caller should shrink h.
  bool accepted = false;
};

struct HessianReport {
  std::vector<double> eigenvalues;  // ascending
  int kernel_dim = 0;
  int expected_kernel_dim = 0;
  /// max |H - H^T| of the assembled operator matrix.
  double asymmetry = 0.0;
};

struct EnergyBounds {
  double lower = 0.0;
  double upper = 0.0;
  bool strict_upper = false;
};

struct StabilizerDimensions {
  int dim_H = 0;
  int dim_Levi = 0;
  int dim_total = 0;
  int dim_unitary_stab = 0;
};

/// f(W) = 1/2 Tr([P, J]^2).
double energy(const Subspace& w);

/// k + Tr(P J P J); equal to energy(w) up to roundoff.
double energy_trace_form(const Subspace& w);

TangentVector project_to_tangent(const Subspace& w, const Mat& a);

/// [P, [P, [J, [P, J]]]].
TangentVector riemannian_gradient(const Subspace& w);

/// Z = -[J, [P, J]], an element of p in sp(V) whose fundamental field is -grad f.
LieAlgebraElement symmetry_generator(const Subspace& w);

/// -ad*_P(xi) = -1/2 [P, xi - xi^T] + 1/2 [P, [P, xi + xi^T]].
TangentVector fundamental_field(const LieAlgebraElement& xi, const Subspace& w);

/// Hessian action at a critical point:
/// [P, [P, [J, [Y, J]]]] + [P, [Y, [J, [P, J]]]].
TangentVector hessian_at_critical(const Subspace& w, const TangentVector& y,
                                  double grad_tol = 1e-10, const Tolerances& tol = {});

/// Same action evaluated through the block form (2(A^T - A), 0, 0, 2(D + J- D J+))
/// in an orthonormal basis adapted to W0 + W+^J + J W0 + W-^J.
TangentVector hessian_block_formula(const Subspace& w, const TangentVector& y,
                                    const Tolerances& tol = {});

/// Orthonormal basis of T_P Gr(k; V) under the trace inner product, built
/// from the Hom(W, W-perp) identification.
std::vector<Mat> tangent_frame(const Subspace& w);

/// Matrix of the Hessian in tangent_frame(w).
Mat hessian_matrix(const Subspace& w, double grad_tol = 1e-10, const Tolerances& tol = {});

HessianReport hessian_report(const Subspace& w, double grad_tol = 1e-10,
                             double kernel_threshold = 1e-8, const Tolerances& tol = {});

/// n^2 - n0(n0-1)/2 - n+^2 - n-^2, the dimension of the unitary orbit.
int expected_kernel_dim(const TypeSignature& sig);

/// One Lie-Euler step: span(exp(h Z(W)) B), reorthonormalized.
StepResult flow_step(const Subspace& w, double h);

FlowTrajectory flow_run(const Subspace& start, const FlowConfig& cfg = {});

/// Throws InvalidArgument unless energies are non-increasing (slack 1e-12)
/// and the type signature is constant across the samples.
void validate_trajectory(const FlowTrajectory& traj);

EnergyBounds energy_bounds(const TypeSignature& sig);
EnergyBounds energy_bounds(const TypeSignature& sig, int k, int n);

StabilizerDimensions stabilizer_dimensions(const TypeSignature& sig);

/// Dimension of {xi : xi J + J xi^T = 0, (I - P) xi P = 0}, the Lie algebra of
/// the stabilizer of W in Sp(V), from the nullity of the stacked linear system.
int stabilizer_dimension_oracle(const Subspace& w, const Tolerances& tol = {});

}  // namespace symflow
