#pragma once

// Command-line front end: classify, flow, sweep, verify, sample.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or validation
// error, 3 numerical instability, 4 non-convergence.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "symflow/energy_flow.hpp"

namespace symflow::cli {

enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kUsage = 2,
  kUnstable = 3,
  kNotConverged = 4,
};

struct ExperimentConfig {
  int n = 2;
  std::optional<int> k;
  std::vector<TypeSignature> types;
  std::uint64_t seed = 0;
  FlowConfig flow;
  long samples = 1;
  std::string out;
  std::string input;
  std::optional<double> example_t;
  std::string suite;
  bool reorthonormalize = false;
  Tolerances tol;
};

/// "n0,n+,n-" -> signature; throws Error(Parse).
TypeSignature parse_type(const std::string& text);

/// Overlays the keys present in `doc` onto `cfg`. Throws Error(Parse) on
/// unknown keys or wrong value types.
void apply_config_json(ExperimentConfig& cfg, const nlohmann::json& doc);

/// Fills n from the first type when it was not given and rejects
/// signatures that do not fit n. Throws Error(InconsistentSignature).
void finalize_config(ExperimentConfig& cfg, bool n_given);

/// Entry point taking the full argument vector (argv[0] included).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_classify(const ExperimentConfig& cfg, std::ostream& out);
int cmd_flow(const ExperimentConfig& cfg, std::ostream& out);
int cmd_sweep(const ExperimentConfig& cfg, std::ostream& out);
int cmd_verify(const ExperimentConfig& cfg, std::ostream& out);
int cmd_sample(const ExperimentConfig& cfg, std::ostream& out);

/// Exit code for a library error.
int exit_code_for(const Error& e) noexcept;

}  // namespace symflow::cli
