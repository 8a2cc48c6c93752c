// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "symflow/darboux.hpp"
#include "symflow/energy_flow.hpp"
#include "symflow/suites.hpp"

using namespace symflow;

namespace {

constexpr std::uint64_t kSeed = 20240611;

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Picks reports by name from a suite run and summarizes them.
Outcome from_reports(const std::vector<OracleReport>& reports, const std::vector<std::string>& names) {
  Outcome o{true, {}};
  for (const std::string& name : names) {
    const OracleReport* found = nullptr;
    for (const OracleReport& r : reports)
      if (r.name == name) found = &r;
    char buf[256];
    if (!found) {
      o.pass = false;
      o.detail += name + " missing; ";
      continue;
    }
    std::snprintf(buf, sizeof buf, "%s: n=%ld abs=%.2e rel=%.2e%s; ", name.c_str(), found->samples,
                  found->max_abs_error, found->max_rel_error,
                  found->pass ? "" : (" FAILED (" + found->note + ")").c_str());
    o.detail += buf;
    o.pass = o.pass && found->pass;
  }
  return o;
}

struct FlowRun {
  TypeSignature start;
  FlowTrajectory traj;
  bool type_constant = true;
  std::string error;
};

std::vector<FlowRun> flow_runs() {
  std::vector<TypeSignature> pool;
  std::vector<int> pool_n;
  for (int n = 1; n <= 3; ++n)
    for (const TypeSignature& s : all_signatures(n)) {
      pool.push_back(s);
      pool_n.push_back(n);
    }
  std::vector<FlowRun> runs;
  FlowConfig cfg;
  cfg.max_steps = 100000;
  for (int i = 0; i < 50; ++i) {
    const std::size_t which = static_cast<std::size_t>(i) % pool.size();
    const TypeSignature sig = pool[which];
    const Subspace start = construct_subspace_of_type(make_standard_space(pool_n[which]), sig,
                                                      ConstructionMode::Randomized,
                                                      split_seed(kSeed, static_cast<std::uint64_t>(i)));
    FlowRun run{sig, flow_run(start, cfg), true, {}};
    try {
      validate_trajectory(run.traj);
    } catch (const std::exception& e) {
      run.error = e.what();
    }
    for (const FlowSample& s : run.traj.samples) run.type_constant = run.type_constant && s.type == sig;
    runs.push_back(std::move(run));
  }
  return runs;
}

}  // namespace

int main() {
  SuiteOptions opts;
  opts.seed = kSeed;
  const std::vector<OracleReport> example = suite_example(opts);
  const std::vector<OracleReport> gradient = suite_gradient(opts);
  const std::vector<OracleReport> bounds = suite_bounds(opts);
  const std::vector<OracleReport> hessian = suite_hessian(opts);
  const std::vector<OracleReport> darboux = suite_darboux(opts);
  const std::vector<OracleReport> stabilizer = suite_stabilizer(opts);
  const std::vector<FlowRun> runs = flow_runs();

  std::vector<std::pair<std::string, Outcome>> results;

  results.emplace_back("worked example identities and t=20 Lagrangian limit",
                       from_reports(example, {"example.energy", "example.commutator_square",
                                              "example.limit_lagrangian"}));
  results.emplace_back("gradient vs central differences (200 subspaces x 10 directions)",
                       from_reports(gradient, {"gradient.directional"}));
  results.emplace_back("critical values at coordinate J-compatible representatives, n <= 4",
                       from_reports(bounds, {"bounds.critical_values"}));

  {
    int converged = 0;
    Outcome o{true, {}};
    double worst_f = 0.0, worst_res = 0.0;
    for (const FlowRun& r : runs) {
      if (!r.type_constant || !r.error.empty()) o.pass = false;
      if (r.traj.converged) {
        ++converged;
        const FlowSample& last = r.traj.samples.back();
        worst_f = std::max(worst_f, std::abs(last.f - r.start.n0));
        worst_res = std::max(worst_res, last.residual);
      }
    }
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "%d/50 converged, worst |f - n0| = %.2e, worst residual = %.2e%s", converged,
                  worst_f, worst_res, o.pass ? "" : ", type or monotonicity violated");
    o.detail = buf;
    for (std::size_t i = 0; i < runs.size(); ++i)
      if (!runs[i].traj.converged) o.detail += "; run " + std::to_string(i) + " not converged";
    o.pass = o.pass && converged >= 48 && worst_f < 1e-6 && worst_res < 1e-6;
    results.emplace_back("flow: type preserved, limits critical, >= 48/50 converge", o);
  }

  results.emplace_back("energy decomposition f = n0 + sum 2 sin^2(theta)",
                       from_reports(bounds, {"bounds.energy_decomposition"}));
  results.emplace_back("energy bounds and strict upper bound",
                       from_reports(bounds, {"bounds.energy_bounds", "bounds.strict_upper"}));
  results.emplace_back("Hessian: finite differences, kernel dimension, complex line spectrum",
                       from_reports(hessian, {"hessian.fd_vs_closed_form", "hessian.kernel_dimension",
                                              "hessian.complex_line_r4"}));
  results.emplace_back(
      "Darboux constructions: pairing identities and adaptation, n <= 4",
      from_reports(darboux, {"darboux.relative.basis", "darboux.relative.adaptation",
                             "darboux.j_compatible.basis", "darboux.j_compatible.adaptation",
                             "darboux.totally_real.basis", "darboux.totally_real.adaptation"}));
  results.emplace_back("stabilizer dimension formula vs nullspace, n <= 4",
                       from_reports(stabilizer, {"stabilizer.coordinate", "stabilizer.randomized"}));

  {
    Outcome o{true, {}};
    int checked = 0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const FlowRun& r = runs[i];
      const int n0_limit = r.traj.samples.back().type.n0;
      ++checked;
      if (n0_limit < r.start.n0 || (r.traj.converged && n0_limit != r.start.n0)) {
        o.pass = false;
        o.detail += "run " + std::to_string(i) + " n0 " + std::to_string(r.start.n0) + " -> " +
                    std::to_string(n0_limit) + "; ";
      }
    }
    o.detail += std::to_string(checked) + " runs checked";
    results.emplace_back("orbit incidence n0(limit) >= n0(start), equal when converged", o);
  }

  bool all = true;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& [title, o] = results[i];
    std::printf("[%s] criterion %zu: %s -- %s\n", o.pass ? "PASS" : "FAIL", i + 1, title.c_str(),
                o.detail.c_str());
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
