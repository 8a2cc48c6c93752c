#include "symflow/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "symflow/darboux.hpp"
#include "symflow/io.hpp"
#include "symflow/oracles.hpp"
#include "symflow/suites.hpp"

namespace symflow::cli {

using nlohmann::json;

namespace {

json type_json(const TypeSignature& s) { return json::array({s.n0, s.nplus, s.nminus}); }

TypeSignature type_from_json(const json& v) {
  if (v.is_string()) return parse_type(v.get<std::string>());
  if (!v.is_array() || v.size() != 3)
    throw Error(ErrorKind::Parse, "a type must be [n0, n+, n-] or \"n0,n+,n-\"");
  for (const json& x : v)
    if (!x.is_number_integer()) throw Error(ErrorKind::Parse, "type entries must be integers");
  return {v[0].get<int>(), v[1].get<int>(), v[2].get<int>()};
}

std::string type_string(const TypeSignature& s) {
  return std::to_string(s.n0) + "," + std::to_string(s.nplus) + "," + std::to_string(s.nminus);
}

void ensure_parent(const std::filesystem::path& p) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
}

std::ofstream open_out(const std::filesystem::path& p) {
  ensure_parent(p);
  std::ofstream f(p);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + p.string());
  return f;
}

// The starting subspace of a flow: an input file, the worked example, or a
// randomized representative of the first requested type.
Subspace flow_start(const ExperimentConfig& cfg) {
  if (!cfg.input.empty()) return io::read_subspace(cfg.input, cfg.reorthonormalize);
  if (cfg.example_t) return worked_example_family(*cfg.example_t);
  if (cfg.types.empty())
    throw Error(ErrorKind::InvalidArgument, "flow needs --input, --example or --type");
  return construct_subspace_of_type(make_standard_space(cfg.n), cfg.types.front(),
                                    ConstructionMode::Randomized, split_seed(cfg.seed, 0));
}

json flow_summary(const FlowTrajectory& traj, const TypeSignature& start_type) {
  const FlowSample& last = traj.samples.back();
  return json{{"converged", traj.converged},
              {"steps", traj.steps},
              {"rejected", traj.rejected},
              {"f_start", traj.samples.front().f},
              {"f_limit", last.f},
              {"grad_norm", last.grad_norm},
              {"type", type_json(start_type)},
              {"limit_type", type_json(last.type)},
              {"limit_residual", last.residual}};
}

}  // namespace

TypeSignature parse_type(const std::string& text) {
  std::vector<int> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      parts.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Parse, "bad type \"" + text + "\"; expected n0,n+,n-");
    }
  }
  if (parts.size() != 3) throw Error(ErrorKind::Parse, "bad type \"" + text + "\"; expected n0,n+,n-");
  return {parts[0], parts[1], parts[2]};
}

void apply_config_json(ExperimentConfig& cfg, const json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::Parse, "config must be a JSON object");
  for (const auto& [key, v] : doc.items()) {
    try {
      if (key == "n") cfg.n = v.get<int>();
      else if (key == "k") cfg.k = v.get<int>();
      else if (key == "type") cfg.types = {type_from_json(v)};
      else if (key == "types") {
        cfg.types.clear();
        for (const json& t : v) cfg.types.push_back(type_from_json(t));
      } else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
      else if (key == "steps") cfg.flow.max_steps = v.get<long>();
      else if (key == "grad_tol") cfg.flow.grad_tol = v.get<double>();
      else if (key == "step") cfg.flow.step = v.get<double>();
      else if (key == "max_step") cfg.flow.max_step = v.get<double>();
      else if (key == "record_every") cfg.flow.record_every = v.get<long>();
      else if (key == "samples" || key == "count") cfg.samples = v.get<long>();
      else if (key == "out") cfg.out = v.get<std::string>();
      else if (key == "input") cfg.input = v.get<std::string>();
      else if (key == "example") cfg.example_t = v.get<double>();
      else if (key == "suite") cfg.suite = v.get<std::string>();
      else if (key == "reorthonormalize") cfg.reorthonormalize = v.get<bool>();
      else if (key == "rank_tol") cfg.tol.rank_tol = v.get<double>();
      else if (key == "cluster_tol") cfg.tol.cluster_tol = v.get<double>();
      else throw Error(ErrorKind::Parse, "unknown config key \"" + key + "\"");
    } catch (const json::exception& e) {
      throw Error(ErrorKind::Parse, "config key \"" + key + "\": " + e.what());
    }
  }
}

void finalize_config(ExperimentConfig& cfg, bool n_given) {
  if (!n_given && !cfg.types.empty()) cfg.n = cfg.types.front().n();
  if (cfg.n < 1) throw Error(ErrorKind::InvalidArgument, "n must be positive");
  for (const TypeSignature& t : cfg.types)
    if (!is_consistent(t, cfg.n))
      throw Error(ErrorKind::InconsistentSignature,
                  "type (" + type_string(t) + ") is impossible for n = " + std::to_string(cfg.n));
  if (cfg.k && (*cfg.k < 0 || *cfg.k > 2 * cfg.n))
    throw Error(ErrorKind::InvalidArgument, "k must lie in [0, 2n]");
  if (cfg.samples < 0) throw Error(ErrorKind::InvalidArgument, "sample count must be nonnegative");
  cfg.flow.tol = cfg.tol;
}

int exit_code_for(const Error& e) noexcept {
  switch (e.kind()) {
    case ErrorKind::ClassificationUnstable:
    case ErrorKind::SpectrumPairingFailure:
    case ErrorKind::DegeneratePairing:
      return kUnstable;
    default:
      return kUsage;
  }
}

int cmd_classify(const ExperimentConfig& cfg, std::ostream& out) {
  if (cfg.input.empty() && !cfg.example_t)
    throw Error(ErrorKind::InvalidArgument, "classify needs --input or --example");
  const Subspace w = cfg.input.empty() ? worked_example_family(*cfg.example_t)
                                       : io::read_subspace(cfg.input, cfg.reorthonormalize);
  const TypeSignature sig = classify(w, cfg.tol);
  const KahlerSpectrum spec = kahler_spectrum(w, cfg.tol);
  const CompatibilityReport compat = is_J_compatible(w, cfg.tol);
  const EnergyBounds b = energy_bounds(sig, w.k(), w.n());
  const json doc{{"n", w.n()},
                 {"k", w.k()},
                 {"type", type_json(sig)},
                 {"kahler_angles", spec.angles},
                 {"f", energy(w)},
                 {"bounds", {{"lower", b.lower}, {"upper", b.upper}, {"strict_upper", b.strict_upper}}},
                 {"is_J_compatible", compat.compatible},
                 {"residual", compat.residual}};
  out << doc.dump() << '\n';
  return kOk;
}

int cmd_flow(const ExperimentConfig& cfg, std::ostream& out) {
  const Subspace start = flow_start(cfg);
  const TypeSignature start_type = classify(start, cfg.tol);
  const FlowTrajectory traj = flow_run(start, cfg.flow);
  validate_trajectory(traj);
  const json summary = flow_summary(traj, start_type);
  if (!cfg.out.empty()) {
    const std::filesystem::path dir(cfg.out);
    std::filesystem::create_directories(dir);
    std::ofstream csv = open_out(dir / "trajectory.csv");
    io::write_trajectory_csv(csv, traj);
    open_out(dir / "summary.json") << summary.dump(2) << '\n';
  }
  out << summary.dump() << '\n';
  return traj.converged ? kOk : kNotConverged;
}

int cmd_sweep(const ExperimentConfig& cfg, std::ostream& out) {
  std::vector<TypeSignature> types = cfg.types;
  if (types.empty() && cfg.k)
    for (const TypeSignature& t : all_signatures(cfg.n))
      if (t.k() == *cfg.k) types.push_back(t);
  if (types.empty()) throw Error(ErrorKind::InvalidArgument, "sweep needs at least one signature");
  if (cfg.samples < 1) throw Error(ErrorKind::InvalidArgument, "sweep needs --samples >= 1");

  std::ostringstream rows;
  rows << "n0,nplus,nminus,sample,seed,converged,steps,f_limit,limit_n0,limit_nplus,limit_nminus,"
          "limit_residual,pass\n";
  json aggregate = json::array();
  bool any_failed = false;
  bool only_convergence = true;
  const SpacePtr space = make_standard_space(cfg.n);
  std::uint64_t counter = 0;
  for (const TypeSignature& t : types) {
    long passed = 0;
    for (long s = 0; s < cfg.samples; ++s) {
      const std::uint64_t seed = split_seed(cfg.seed, counter++);
      const Subspace start =
          construct_subspace_of_type(space, t, ConstructionMode::Randomized, seed);
      const FlowTrajectory traj = flow_run(start, cfg.flow);
      validate_trajectory(traj);
      const FlowSample& last = traj.samples.back();
      const bool limit_ok = std::abs(last.f - t.n0) < 1e-6 && last.type == t && last.residual < 1e-6;
      const bool ok = traj.converged && limit_ok;
      if (!ok) {
        any_failed = true;
        if (!limit_ok) only_convergence = false;
      }
      passed += ok;
      char fbuf[40], rbuf[40];
      std::snprintf(fbuf, sizeof fbuf, "%.17g", last.f);
      std::snprintf(rbuf, sizeof rbuf, "%.17g", last.residual);
      rows << t.n0 << ',' << t.nplus << ',' << t.nminus << ',' << s << ',' << seed << ','
           << traj.converged << ',' << traj.steps << ',' << fbuf << ',' << last.type.n0 << ','
           << last.type.nplus << ',' << last.type.nminus << ',' << rbuf << ',' << ok << '\n';
    }
    aggregate.push_back(json{{"type", type_json(t)},
                             {"expected_f", t.n0},
                             {"samples", cfg.samples},
                             {"passed", passed},
                             {"pass", passed == cfg.samples}});
  }
  if (!cfg.out.empty()) open_out(cfg.out) << rows.str();
  else out << rows.str();
  out << json{{"signatures", aggregate}, {"pass", !any_failed}}.dump() << '\n';
  if (!any_failed) return kOk;
  return only_convergence ? kNotConverged : kVerifyFailed;
}

int cmd_verify(const ExperimentConfig& cfg, std::ostream& out) {
  std::vector<std::string> names;
  if (cfg.suite == "all") names = suite_names();
  else if (is_suite(cfg.suite)) names = {cfg.suite};
  else throw Error(ErrorKind::InvalidArgument, "unknown suite \"" + cfg.suite + "\"");

  SuiteOptions opts;
  opts.seed = cfg.seed;
  std::ofstream file;
  if (!cfg.out.empty()) file = open_out(cfg.out);
  bool pass = true;
  for (const std::string& name : names) {
    for (const OracleReport& r : run_suite(name, opts)) {
      const std::string line = io::report_to_json(r).dump();
      out << line << '\n';
      if (file) file << line << '\n';
      pass = pass && r.pass;
    }
  }
  return pass ? kOk : kVerifyFailed;
}

int cmd_sample(const ExperimentConfig& cfg, std::ostream& out) {
  if (cfg.types.size() != 1) throw Error(ErrorKind::InvalidArgument, "sample needs one --type");
  const TypeSignature t = cfg.types.front();
  const SpacePtr space = make_standard_space(cfg.n);
  for (long i = 0; i < cfg.samples; ++i) {
    const Subspace w = construct_subspace_of_type(space, t, ConstructionMode::Randomized,
                                                  split_seed(cfg.seed, static_cast<std::uint64_t>(i)));
    if (!(classify(w, cfg.tol) == t))
      throw Error(ErrorKind::ClassificationUnstable, "sample " + std::to_string(i) +
                                                         " does not classify back to its type");
    if (cfg.out.empty()) {
      out << io::subspace_to_json(w).dump() << '\n';
    } else {
      std::ostringstream name;
      name << "sample_" << std::setw(4) << std::setfill('0') << i << ".json";
      const std::filesystem::path p = std::filesystem::path(cfg.out) / name.str();
      ensure_parent(p);
      io::write_subspace(p.string(), w);
      out << p.string() << '\n';
    }
  }
  return kOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Energy flow on Grassmannians of a symplectic vector space", "symflow"};
  app.require_subcommand(1);

  struct Raw {
    int n = 2;
    int k = 0;
    std::vector<std::string> types;
    std::uint64_t seed = 0;
    long steps = 0;
    double grad_tol = 0.0;
    double step = 0.0;
    long record_every = 1;
    long samples = 1;
    std::string out, input, config, suite;
    double example = 0.0;
    bool reorthonormalize = false;
    double rank_tol = 0.0, cluster_tol = 0.0;
  } raw;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--config", raw.config, "JSON config file; command-line flags override it");
    sub->add_option("--n", raw.n, "Half dimension of the symplectic space");
    sub->add_option("--seed", raw.seed, "Master seed");
    sub->add_option("--out", raw.out, "Output path");
    sub->add_option("--rank-tol", raw.rank_tol, "Rank cut for the restricted form");
    sub->add_option("--cluster-tol", raw.cluster_tol, "Eigenvalue clustering tolerance");
  };
  const auto start_opts = [&](CLI::App* sub) {
    sub->add_option("--input", raw.input, "Subspace JSON file");
    sub->add_option("--example", raw.example, "Use the worked example family at this t");
    sub->add_flag("--reorthonormalize", raw.reorthonormalize,
                  "Accept a non-orthonormal basis as a spanning set");
  };
  const auto flow_opts = [&](CLI::App* sub) {
    sub->add_option("--steps", raw.steps, "Maximum accepted flow steps");
    sub->add_option("--grad-tol", raw.grad_tol, "Stop when the gradient norm drops below this");
    sub->add_option("--step", raw.step, "Initial step size");
    sub->add_option("--record-every", raw.record_every, "Record every m-th step");
  };

  CLI::App* classify_cmd = app.add_subcommand("classify", "Classify a subspace");
  common(classify_cmd);
  start_opts(classify_cmd);

  CLI::App* flow_cmd = app.add_subcommand("flow", "Run the gradient flow from one start");
  common(flow_cmd);
  start_opts(flow_cmd);
  flow_opts(flow_cmd);
  flow_cmd->add_option("--type", raw.types, "Start from a random subspace of type n0,n+,n-");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Flow many random starts per signature");
  common(sweep_cmd);
  flow_opts(sweep_cmd);
  sweep_cmd->add_option("--type", raw.types, "Signature n0,n+,n- (repeatable)");
  sweep_cmd->add_option("--k", raw.k, "Sweep every signature of this dimension");
  sweep_cmd->add_option("--samples", raw.samples, "Starts per signature");

  CLI::App* verify_cmd = app.add_subcommand("verify", "Run a verification suite");
  common(verify_cmd);
  verify_cmd->add_option("--suite", raw.suite, "gradient, hessian, classify, darboux, bounds, "
                                               "stabilizer, example or all");

  CLI::App* sample_cmd = app.add_subcommand("sample", "Write random subspaces of a given type");
  common(sample_cmd);
  sample_cmd->add_option("--type", raw.types, "Signature n0,n+,n-");
  sample_cmd->add_option("--count,--samples", raw.samples, "Number of subspaces");

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const auto given = [&](const char* flag) { return sub->get_option_no_throw(flag) && sub->count(flag) > 0; };

  try {
    ExperimentConfig cfg;
    bool n_given = false;
    if (given("--config")) {
      std::ifstream in(raw.config);
      if (!in) throw Error(ErrorKind::Parse, "cannot open " + raw.config);
      json doc;
      try {
        in >> doc;
      } catch (const json::exception& e) {
        throw Error(ErrorKind::Parse, raw.config + ": " + e.what());
      }
      apply_config_json(cfg, doc);
      n_given = doc.contains("n");
    }
    if (given("--n")) cfg.n = raw.n, n_given = true;
    if (given("--k")) cfg.k = raw.k;
    if (given("--type")) {
      cfg.types.clear();
      for (const std::string& t : raw.types) cfg.types.push_back(parse_type(t));
    }
    if (given("--seed")) cfg.seed = raw.seed;
    if (given("--steps")) cfg.flow.max_steps = raw.steps;
    if (given("--grad-tol")) cfg.flow.grad_tol = raw.grad_tol;
    if (given("--step")) cfg.flow.step = raw.step;
    if (given("--record-every")) cfg.flow.record_every = raw.record_every;
    if (given("--samples") || given("--count")) cfg.samples = raw.samples;
    if (given("--out")) cfg.out = raw.out;
    if (given("--input")) cfg.input = raw.input;
    if (given("--example")) cfg.example_t = raw.example;
    if (given("--reorthonormalize")) cfg.reorthonormalize = raw.reorthonormalize;
    if (given("--suite")) cfg.suite = raw.suite;
    if (given("--rank-tol")) cfg.tol.rank_tol = raw.rank_tol;
    if (given("--cluster-tol")) cfg.tol.cluster_tol = raw.cluster_tol;
    finalize_config(cfg, n_given);

    const std::string name = sub->get_name();
    if (name == "classify") return cmd_classify(cfg, out);
    if (name == "flow") return cmd_flow(cfg, out);
    if (name == "sweep") return cmd_sweep(cfg, out);
    if (name == "verify") return cmd_verify(cfg, out);
    return cmd_sample(cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace symflow::cli
