#pragma once

// Named verification suites. Each returns one OracleReport per check; a
// suite passes when every report does.

#include <cstdint>
#include <string>
#include <vector>

#include "symflow/oracles.hpp"

namespace symflow {

struct SuiteOptions {
  std::uint64_t seed = 0;
  /// Overrides the default sample count of randomized suites when positive.
  long samples = 0;
  /// Largest n for sweeps over signatures; 0 keeps the suite default.
  int max_n = 0;
};

const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);

/// Throws InvalidArgument for an unknown name.
std::vector<OracleReport> run_suite(const std::string& name, const SuiteOptions& opts = {});

/// Worked example identities along t in {0, 0.25, ..., 3} and at t = 20.
std::vector<OracleReport> suite_example(const SuiteOptions& opts = {});
/// Closed-form directional derivatives against central differences.
std::vector<OracleReport> suite_gradient(const SuiteOptions& opts = {});
/// Closed-form Hessian against second differences at critical points.
std::vector<OracleReport> suite_hessian(const SuiteOptions& opts = {});
/// classify against the Gram-rank classifier on random and constructed subspaces.
std::vector<OracleReport> suite_classify(const SuiteOptions& opts = {});
/// The three Darboux constructions across all signatures.
std::vector<OracleReport> suite_darboux(const SuiteOptions& opts = {});
/// Energy decomposition, energy bounds and critical values.
std::vector<OracleReport> suite_bounds(const SuiteOptions& opts = {});
/// Stabilizer dimension formula against the nullspace oracle.
std::vector<OracleReport> suite_stabilizer(const SuiteOptions& opts = {});

bool all_pass(const std::vector<OracleReport>& reports);

}  // namespace symflow
