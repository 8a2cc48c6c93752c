#pragma once

// Constructive Darboux bases: relative (adapted to a splitting), totally
// real, and J-compatible; the Kahler block decomposition; and
// representatives of a prescribed type.

#include <cstdint>
#include <vector>

#include "symflow/symplectic_core.hpp"

namespace symflow {

/// The triple (W+, W-, W^0) associated to W.
struct Splitting {
  Subspace wplus;
  Subspace wminus;
  Subspace w0dual;
};

/// Columns of `e` are grouped e0 | e+ | e-, and likewise for `f`.
struct DarbouxBasis {
  Mat e;
  Mat f;
  int n0 = 0;
  int nplus = 0;
  int nminus = 0;

  Mat e0() const { return e.leftCols(n0); }
  Mat eplus() const { return e.middleCols(n0, nplus); }
  Mat eminus() const { return e.rightCols(nminus); }
  Mat f0() const { return f.leftCols(n0); }
  Mat fplus() const { return f.middleCols(n0, nplus); }
  Mat fminus() const { return f.rightCols(nminus); }
};

struct DarbouxReport {
  double ef_deviation = 0.0;  // max |omega(e_i, f_j) - delta_ij|
  double ee_deviation = 0.0;  // max |omega(e_i, e_j)|
  double ff_deviation = 0.0;  // max |omega(f_i, f_j)|

  double max() const;
};

/// W-side and W^omega-side of the totally real construction. For each pair,
/// {e_j, cos(theta_j) f_j} is orthonormal and omega(e_j, f_j) = 1.
struct TotallyRealDarboux {
  Mat e;
  Mat f;
  std::vector<double> angles;
  Mat complement_e;
  Mat complement_f;
  std::vector<double> complement_angles;

  /// Full Darboux basis of V with e+ from W and e- from W^omega.
  DarbouxBasis full() const;
};

struct KahlerBlock {
  Subspace v_theta;  // 4-dimensional, J-invariant
  Subspace w_theta;  // W intersect v_theta
  double theta = 0.0;
};

struct KahlerBlocks {
  Subspace v0;  // W0 + J W0
  Subspace vj;  // W+^J + W-^J
  std::vector<KahlerBlock> blocks;  // ascending theta
};

/// Projection distances between the spans produced by a relative Darboux
/// basis and the pieces of the splitting it was built from.
struct AdaptationReport {
  double e0_vs_w0 = 0.0;
  double f0_vs_w0dual = 0.0;
  double plus_vs_wplus = 0.0;
  double minus_vs_wminus = 0.0;

  double max() const;
};

enum class ConstructionMode { Coordinate, Randomized };

/// W+ = W0-perp in W, W- = W0-perp in W^omega, W^0 = J W0.
Splitting canonical_splitting(const Subspace& w, const Tolerances& tol = {});

DarbouxBasis relative_darboux_basis(const Subspace& w, const Splitting& s,
                                    const Tolerances& tol = {});

TotallyRealDarboux totally_real_darboux(const Subspace& w, const Tolerances& tol = {});

DarbouxBasis j_compatible_darboux(const Subspace& w, const Tolerances& tol = {});

KahlerBlocks kahler_block_decomposition(const Subspace& w, const Tolerances& tol = {});

Subspace construct_subspace_of_type(const SpacePtr& space, const TypeSignature& sig,
                                    ConstructionMode mode = ConstructionMode::Coordinate,
                                    std::uint64_t seed = 0, double sigma = 0.5);

DarbouxReport darboux_check(const DarbouxBasis& basis, const SymplecticSpace& space);

AdaptationReport adaptation_check(const Subspace& w, const Splitting& s,
                                  const DarbouxBasis& basis, const Tolerances& tol = {});

}  // namespace symflow
