#pragma once

// File formats: subspace JSON, Darboux basis JSON, trajectory CSV and
// oracle reports as JSON lines.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "symflow/darboux.hpp"
#include "symflow/energy_flow.hpp"
#include "symflow/oracles.hpp"

namespace symflow::io {

using nlohmann::json;

/// {"n": int, "k": int, "basis": [[...k doubles...] x 2n]} (row-major). A flat
/// array of 2n*k doubles is accepted on input. Throws Error(Parse) on
/// malformed input; a basis that is not orthonormal is rejected unless
/// `reorthonormalize` is set, in which case it is treated as a spanning set.
Subspace subspace_from_json(const json& doc, bool reorthonormalize = false);
json subspace_to_json(const Subspace& w);

Subspace read_subspace(const std::string& path, bool reorthonormalize = false);
void write_subspace(const std::string& path, const Subspace& w);

/// Blocks "e0", "eplus", "eminus", "f0", "fplus", "fminus" as row-major
/// matrices, plus "angles" sorted ascending in radians.
json darboux_to_json(const DarbouxBasis& basis, const std::vector<double>& angles = {});
DarbouxBasis darboux_from_json(const json& doc);

json matrix_to_json(const Mat& m);
Mat matrix_from_json(const json& rows, Eigen::Index expected_rows, Eigen::Index expected_cols);

inline constexpr const char* kTrajectoryHeader =
    "step,t,f,grad_norm,n0,nplus,nminus,min_angle,residual";

/// Header row then one row per sample; floats use 17 significant digits.
void write_trajectory_csv(std::ostream& out, const FlowTrajectory& traj);

json report_to_json(const OracleReport& report);

}  // namespace symflow::io
