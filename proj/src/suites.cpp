#include "symflow/suites.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "symflow/darboux.hpp"
#include "symflow/energy_flow.hpp"

namespace symflow {

namespace {

// Collects per-sample errors into one report. A sample fails when the chosen
// error exceeds the tolerance or when it threw.
class Check {
 public:
  enum class Measure { Absolute, Relative };

  Check(std::string name, std::uint64_t seed, double tolerance, Measure measure)
      : measure_(measure) {
    r_.name = std::move(name);
    r_.seed = seed;
    r_.tolerance = tolerance;
  }

  void add(double abs_err, double rel_err, const std::string& where = {}) {
    ++r_.samples;
    r_.max_abs_error = std::max(r_.max_abs_error, abs_err);
    r_.max_rel_error = std::max(r_.max_rel_error, rel_err);
    const double e = measure_ == Measure::Absolute ? abs_err : rel_err;
    if (!(e <= r_.tolerance)) note_failure(where + " error " + std::to_string(e));
  }

  void add_abs(double err, const std::string& where = {}) { add(err, 0.0, where); }

  /// Discrete comparison; the error is |expected - actual|.
  void add_count(long expected, long actual, const std::string& where = {}) {
    const double e = static_cast<double>(std::abs(expected - actual));
    ++r_.samples;
    r_.max_abs_error = std::max(r_.max_abs_error, e);
    if (e != 0.0)
      note_failure(where + " expected " + std::to_string(expected) + " got " +
                   std::to_string(actual));
  }

  void add_error(const std::string& where, const std::exception& ex) {
    ++r_.samples;
    note_failure(where + " threw: " + ex.what());
  }

  /// Runs `body`, recording any exception as a failed sample.
  template <class F>
  void guard(const std::string& where, F&& body) {
    try {
      body();
    } catch (const std::exception& ex) {
      add_error(where, ex);
    }
  }

  OracleReport done() {
    const double e = measure_ == Measure::Absolute ? r_.max_abs_error : r_.max_rel_error;
    r_.pass = r_.failures == 0 && r_.samples > 0 && e <= r_.tolerance;
    return r_;
  }

 private:
  void note_failure(const std::string& msg) {
    if (r_.failures++ == 0) r_.note = msg;
  }

  OracleReport r_;
  Measure measure_;
};

using M = Check::Measure;

std::string sig_str(const TypeSignature& s) {
  std::ostringstream os;
  os << '(' << s.n0 << ',' << s.nplus << ',' << s.nminus << ')';
  return os.str();
}

long samples_or(const SuiteOptions& o, long fallback) { return o.samples > 0 ? o.samples : fallback; }
int max_n_or(const SuiteOptions& o, int fallback) { return o.max_n > 0 ? o.max_n : fallback; }

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// The grid t = 0, 0.25, ..., 3.
std::vector<double> example_grid() {
  std::vector<double> ts;
  for (int i = 0; i <= 12; ++i) ts.push_back(0.25 * i);
  return ts;
}

// Express a Hessian from frame `from` in frame `to` (both orthonormal bases
// of the same tangent space).
Mat change_frame(const Mat& h, const std::vector<Mat>& from, const std::vector<Mat>& to) {
  const auto m = static_cast<Eigen::Index>(from.size());
  Mat c(m, m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b)
      c(a, b) = trace_inner(from[static_cast<std::size_t>(a)], to[static_cast<std::size_t>(b)]);
  return c.transpose() * h * c;
}

std::vector<double> nonzero_eigenvalues(const Mat& h, double threshold) {
  std::vector<double> out;
  if (h.size() == 0) return out;
  const Vec ev = Eigen::SelfAdjointEigenSolver<Mat>(0.5 * (h + h.transpose())).eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) >= threshold) out.push_back(ev(i));
  return out;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"gradient", "hessian",    "classify", "darboux",
                                              "bounds",   "stabilizer", "example"};
  return names;
}

bool is_suite(const std::string& name) {
  const auto& n = suite_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

bool all_pass(const std::vector<OracleReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const OracleReport& r) { return r.pass; });
}

std::vector<OracleReport> run_suite(const std::string& name, const SuiteOptions& opts) {
  static const std::map<std::string, std::function<std::vector<OracleReport>(const SuiteOptions&)>>
      table{{"gradient", suite_gradient}, {"hessian", suite_hessian},
            {"classify", suite_classify}, {"darboux", suite_darboux},
            {"bounds", suite_bounds},     {"stabilizer", suite_stabilizer},
            {"example", suite_example}};
  const auto it = table.find(name);
  if (it == table.end()) throw Error(ErrorKind::InvalidArgument, "unknown suite \"" + name + "\"");
  return it->second(opts);
}

std::vector<OracleReport> suite_example(const SuiteOptions& opts) {
  const std::uint64_t seed = opts.seed;
  Check energy_check("example.energy", seed, 1e-10, M::Absolute);
  Check square_check("example.commutator_square", seed, 1e-10, M::Absolute);
  Check proj_check("example.projection", seed, 1e-12, M::Absolute);
  const Mat id4 = Mat::Identity(4, 4);
  for (double t : example_grid()) {
    const std::string where = "t=" + std::to_string(t);
    const Subspace w = worked_example_family(t);
    energy_check.add_abs(std::abs(energy(w) - worked_example_energy(t)), where);
    const Mat c = commutator(w.projection(), w.space().J());
    const double th = std::tanh(2.0 * t);
    square_check.add_abs(max_abs(c * c - th * th * id4), where);
    proj_check.add_abs(max_abs(w.projection() - worked_example_projection(t)), where);
  }

  Check value_check("example.energy_at_1", seed, 1e-12, M::Absolute);
  value_check.add_abs(std::abs(energy(worked_example_family(1.0)) - 2.0 * std::pow(std::tanh(2.0), 2)),
                      "t=1");

  Check type_check("example.type_at_1", seed, 0.0, M::Absolute);
  type_check.guard("t=1", [&] {
    const Subspace w = worked_example_family(1.0);
    const TypeSignature expected{0, 1, 1};
    type_check.add_count(1, classify(w) == expected, "classify");
    type_check.add_count(1, pairing_rank_classifier(w, seed) == expected, "pairing classifier");
  });

  Check limit_check("example.limit_lagrangian", seed, 1e-10, M::Absolute);
  limit_check.guard("t=20", [&] {
    const Subspace w = worked_example_family(20.0);
    limit_check.add_abs(std::abs(energy(w) - 2.0), "energy");
    limit_check.add_count(2, isotropic_kernel(w).k(), "isotropic kernel rank");
    limit_check.add_count(1, classify(w) == TypeSignature{2, 0, 0}, "classify");
  });

  Check grad_check("example.fd_gradient", seed, 1e-6, M::Relative);
  grad_check.guard("t=1", [&] {
    const Subspace w = worked_example_family(1.0);
    const Mat g = riemannian_gradient(w).matrix;
    const double err = (fd_gradient(w, 1e-5) - g).norm();
    grad_check.add(err, err / g.norm(), "t=1");
  });

  return {energy_check.done(), square_check.done(), proj_check.done(), value_check.done(),
          type_check.done(),   limit_check.done(),  grad_check.done()};
}

std::vector<OracleReport> suite_gradient(const SuiteOptions& opts) {
  // Errors are relative to |grad| (directions have unit norm). Lines and
  // hyperplanes are always critical, so the scale is floored.
  constexpr double kGradientFloor = 1e-3;
  const std::uint64_t seed = opts.seed;
  const long count = samples_or(opts, 200);
  constexpr int kDirections = 10;
  Check directional("gradient.directional", seed, 1e-6, M::Relative);
  Check frame("gradient.fd_frame", seed, 1e-6, M::Relative);
  Check trace_form("gradient.trace_form", seed, 1e-12, M::Absolute);
  Check generator("gradient.generator_field", seed, 1e-12, M::Absolute);

  for (long i = 0; i < count; ++i) {
    Rng rng(split_seed(seed, static_cast<std::uint64_t>(i)));
    const int n = uniform_int(rng, 2, 4);
    const int k = uniform_int(rng, 1, 2 * n - 1);
    const std::string where = "sample " + std::to_string(i) + " n=" + std::to_string(n) +
                              " k=" + std::to_string(k);
    directional.guard(where, [&] {
      const Subspace w = random_subspace(make_standard_space(n), k, rng);
      const Mat g = riemannian_gradient(w).matrix;
      const double gnorm = g.norm();
      for (int d = 0; d < kDirections; ++d) {
        const Mat y = random_tangent(w, rng);
        const double exact = trace_inner(g, y);
        const double fd = fd_directional_derivative(w, y, 1e-5);
        const double err = std::abs(exact - fd);
        directional.add(err, err / std::max({std::abs(exact), gnorm, kGradientFloor}), where);
      }
      trace_form.add_abs(std::abs(energy(w) - energy_trace_form(w)), where);
      const Mat field = fundamental_field(symmetry_generator(w), w).matrix;
      generator.add_abs(max_abs(field + g), where);
      if (i < 20) {
        const double err = (fd_gradient(w, 1e-5) - g).norm();
        frame.add(err, err / std::max(gnorm, kGradientFloor), where);
      }
    });
  }
  return {directional.done(), frame.done(), trace_form.done(), generator.done()};
}

std::vector<OracleReport> suite_hessian(const SuiteOptions& opts) {
  const std::uint64_t seed = opts.seed;
  const int max_n = max_n_or(opts, 3);
  Check fd_check("hessian.fd_vs_closed_form", seed, 1e-5, M::Relative);
  Check kernel_check("hessian.kernel_dimension", seed, 0.0, M::Absolute);
  Check block_check("hessian.block_formula", seed, 1e-10, M::Absolute);
  Check symmetry_check("hessian.symmetry", seed, 1e-12, M::Absolute);
  Check spectrum_check("hessian.nonzero_spectrum", seed, 1e-10, M::Absolute);
  Check unitary_check("hessian.unitary_orbit", seed, 0.0, M::Absolute);

  std::uint64_t counter = 0;
  for (int n = 1; n <= max_n; ++n) {
    const SpacePtr space = make_standard_space(n);
    for (const TypeSignature& sig : all_signatures(n)) {
      const std::string where = "n=" + std::to_string(n) + " " + sig_str(sig);
      const Subspace w = construct_subspace_of_type(space, sig);
      fd_check.guard(where, [&] {
        const std::vector<Mat> frame = tangent_frame(w);
        const Mat h = hessian_matrix(w);
        const FdHessian fd = fd_hessian(w, 1e-4);
        const Mat fd_in_frame = change_frame(fd.matrix, fd.frame, frame);
        const double err = (fd_in_frame - h).norm();
        fd_check.add(err, err / std::max(h.norm(), 1.0), where);
      });
      kernel_check.guard(where, [&] {
        const HessianReport rep = hessian_report(w);
        kernel_check.add_count(expected_kernel_dim(sig), rep.kernel_dim, where);
        symmetry_check.add_abs(rep.asymmetry, where);
        // Nonzero eigenvalues are -4 on the W0 block and +4 on the complex block.
        for (double ev : rep.eigenvalues)
          if (std::abs(ev) >= 1e-8) spectrum_check.add_abs(std::abs(std::abs(ev) - 4.0), where);
      });
      block_check.guard(where, [&] {
        for (const Mat& e : tangent_frame(w)) {
          const TangentVector y{w, e};
          block_check.add_abs(
              max_abs(hessian_at_critical(w, y).matrix - hessian_block_formula(w, y).matrix),
              where);
        }
      });
      // Critical points along the unitary orbit have the same kernel dimension.
      unitary_check.guard(where, [&] {
        Rng rng(split_seed(seed, counter++));
        const Subspace moved = transform(random_unitary(n, rng), w);
        unitary_check.add_count(expected_kernel_dim(sig), hessian_report(moved).kernel_dim, where);
      });
    }
  }

  Check line_check("hessian.complex_line_r4", seed, 1e-4, M::Absolute);
  line_check.guard("n=2 (0,1,1)", [&] {
    const Subspace w = construct_subspace_of_type(make_standard_space(2), {0, 1, 1});
    const Mat h = hessian_matrix(w);
    const FdHessian fd = fd_hessian(w, 1e-4);
    for (const Mat* m : {&h, &fd.matrix}) {
      const std::vector<double> nz = nonzero_eigenvalues(*m, 1e-3);
      line_check.add_count(2, static_cast<long>(nz.size()), "nonzero eigenvalue count");
      for (double ev : nz) line_check.add_abs(std::abs(ev - 4.0), "eigenvalue");
    }
  });

  return {fd_check.done(),       kernel_check.done(), block_check.done(), symmetry_check.done(),
          spectrum_check.done(), unitary_check.done(), line_check.done()};
}

std::vector<OracleReport> suite_classify(const SuiteOptions& opts) {
  const std::uint64_t seed = opts.seed;
  const long count = samples_or(opts, 300);
  const int max_n = max_n_or(opts, 4);
  Check random_check("classify.random_agreement", seed, 0.0, M::Absolute);
  for (long i = 0; i < count; ++i) {
    Rng rng(split_seed(seed, static_cast<std::uint64_t>(i)));
    const int n = uniform_int(rng, 1, max_n);
    const int k = uniform_int(rng, 0, 2 * n);
    const std::string where = "sample " + std::to_string(i);
    random_check.guard(where, [&] {
      const Subspace w = random_subspace(make_standard_space(n), k, rng);
      const std::uint64_t sub = split_seed(seed ^ 0x5bd1e995ULL, static_cast<std::uint64_t>(i));
      random_check.add_count(1, classify(w) == pairing_rank_classifier(w, sub), where);
    });
  }

  Check constructed_check("classify.constructed_types", seed, 0.0, M::Absolute);
  Check spectrum_check("classify.spectrum_counts", seed, 0.0, M::Absolute);
  std::uint64_t counter = 0;
  for (int n = 1; n <= max_n; ++n) {
    const SpacePtr space = make_standard_space(n);
    for (const TypeSignature& sig : all_signatures(n)) {
      for (int rep = 0; rep < 3; ++rep) {
        const std::uint64_t s = split_seed(seed, 1000000 + counter++);
        const std::string where = "n=" + std::to_string(n) + " " + sig_str(sig);
        constructed_check.guard(where, [&] {
          const Subspace w = construct_subspace_of_type(space, sig, ConstructionMode::Randomized, s);
          constructed_check.add_count(1, classify(w) == sig, where + " classify");
          constructed_check.add_count(1, pairing_rank_classifier(w, s) == sig, where + " pairing");
          const KahlerSpectrum spec = kahler_spectrum(w);
          spectrum_check.add_count(sig.n0, spec.n0, where + " n0");
          spectrum_check.add_count(sig.nplus, spec.nJ + spec.ntheta, where + " n+");
        });
      }
    }
  }
  return {random_check.done(), constructed_check.done(), spectrum_check.done()};
}

std::vector<OracleReport> suite_darboux(const SuiteOptions& opts) {
  const std::uint64_t seed = opts.seed;
  const int max_n = max_n_or(opts, 4);
  Check rel_basis("darboux.relative.basis", seed, 1e-10, M::Absolute);
  Check rel_adapt("darboux.relative.adaptation", seed, 1e-9, M::Absolute);
  Check jc_basis("darboux.j_compatible.basis", seed, 1e-10, M::Absolute);
  Check jc_adapt("darboux.j_compatible.adaptation", seed, 1e-9, M::Absolute);
  Check tr_basis("darboux.totally_real.basis", seed, 1e-10, M::Absolute);
  Check tr_adapt("darboux.totally_real.adaptation", seed, 1e-9, M::Absolute);
  Check blocks("darboux.kahler_blocks", seed, 1e-9, M::Absolute);

  std::uint64_t counter = 0;
  for (int n = 1; n <= max_n; ++n) {
    const SpacePtr space = make_standard_space(n);
    for (const TypeSignature& sig : all_signatures(n)) {
      const std::string where = "n=" + std::to_string(n) + " " + sig_str(sig);
      const Subspace coord = construct_subspace_of_type(space, sig);
      const std::uint64_t s = split_seed(seed, counter++);
      const Subspace randomized =
          construct_subspace_of_type(space, sig, ConstructionMode::Randomized, s);

      for (const Subspace* w : {&coord, &randomized}) {
        rel_basis.guard(where, [&] {
          const Splitting split = canonical_splitting(*w);
          const DarbouxBasis b = relative_darboux_basis(*w, split);
          rel_basis.add_abs(darboux_check(b, *space).max(), where);
          rel_adapt.add_abs(adaptation_check(*w, split, b).max(), where);
        });
      }

      Rng rng(s);
      const Subspace unitary_moved = transform(random_unitary(n, rng), coord);
      for (const Subspace* w : {&coord, &unitary_moved}) {
        jc_basis.guard(where, [&] {
          const DarbouxBasis b = j_compatible_darboux(*w);
          jc_basis.add_abs(darboux_check(b, *space).max(), where);
          jc_adapt.add_abs(adaptation_check(*w, canonical_splitting(*w), b).max(), where);
        });
      }

      blocks.guard(where, [&] {
        const KahlerBlocks kb = kahler_block_decomposition(randomized);
        const Mat& j = space->J();
        double err = max_abs(j * kb.v0.projection() * j.transpose() - kb.v0.projection());
        err = std::max(err, max_abs(j * kb.vj.projection() * j.transpose() - kb.vj.projection()));
        for (const KahlerBlock& blk : kb.blocks) {
          const Mat& p = blk.v_theta.projection();
          err = std::max(err, max_abs(j * p * j.transpose() - p));
          // W_theta lies in W and in V_theta.
          err = std::max(err, max_abs(randomized.projection() * blk.w_theta.basis() -
                                      blk.w_theta.basis()));
          err = std::max(err, max_abs(p * blk.w_theta.basis() - blk.w_theta.basis()));
        }
        blocks.add_abs(err, where);
      });

      // Half-dimensional symplectic subspaces: generic representatives are
      // totally real.
      if (sig.n0 == 0 && 2 * sig.nplus == n && n % 2 == 0) {
        for (int rep = 0; rep < 3; ++rep) {
          tr_basis.guard(where, [&] {
            const Subspace w = construct_subspace_of_type(
                space, sig, ConstructionMode::Randomized, split_seed(s, 7 + rep));
            const TotallyRealDarboux trd = totally_real_darboux(w);
            const DarbouxBasis b = trd.full();
            tr_basis.add_abs(darboux_check(b, *space).max(), where);
            tr_adapt.add_abs(adaptation_check(w, canonical_splitting(w), b).max(), where);
          });
        }
      }
    }
  }
  return {rel_basis.done(), rel_adapt.done(), jc_basis.done(), jc_adapt.done(),
          tr_basis.done(),  tr_adapt.done(),  blocks.done()};
}

std::vector<OracleReport> suite_bounds(const SuiteOptions& opts) {
  const std::uint64_t seed = opts.seed;
  const long count = samples_or(opts, 100);
  const int max_n = max_n_or(opts, 4);
  Check decomposition("bounds.energy_decomposition", seed, 1e-9, M::Absolute);
  Check bounds("bounds.energy_bounds", seed, 0.0, M::Absolute);
  Check strict("bounds.strict_upper", seed, 0.0, M::Absolute);

  const auto examine = [&](const Subspace& w, const std::string& where) {
    const TypeSignature sig = classify(w);
    const KahlerSpectrum spec = kahler_spectrum(w);
    const double f = energy(w);
    double predicted = spec.n0;
    for (double th : spec.angles) predicted += 2.0 * std::sin(th) * std::sin(th);
    decomposition.add_abs(std::abs(f - predicted), where);

    const EnergyBounds b = energy_bounds(sig, w.k(), w.n());
    const double violation = std::max({0.0, (b.lower - 1e-12) - f, f - (b.upper + 1e-12)});
    bounds.add_abs(violation, where);
    if (sig.nplus > std::max(0, w.k() - w.n()))
      strict.add_abs(f < b.upper ? 0.0 : f - b.upper + 1.0, where);
  };

  for (long i = 0; i < count; ++i) {
    Rng rng(split_seed(seed, static_cast<std::uint64_t>(i)));
    const int n = uniform_int(rng, 1, max_n);
    const int k = uniform_int(rng, 0, 2 * n);
    const std::string where = "sample " + std::to_string(i);
    decomposition.guard(where, [&] { examine(random_subspace(make_standard_space(n), k, rng), where); });
  }
  std::uint64_t counter = 0;
  for (int n = 1; n <= max_n; ++n) {
    const SpacePtr space = make_standard_space(n);
    for (const TypeSignature& sig : all_signatures(n)) {
      const std::string where = "n=" + std::to_string(n) + " " + sig_str(sig);
      decomposition.guard(where, [&] {
        examine(construct_subspace_of_type(space, sig, ConstructionMode::Randomized,
                                           split_seed(seed, 1000000 + counter++)),
                where);
      });
    }
  }

  Check critical("bounds.critical_values", seed, 1e-12, M::Absolute);
  for (int n = 1; n <= max_n; ++n) {
    const SpacePtr space = make_standard_space(n);
    for (const TypeSignature& sig : all_signatures(n)) {
      const std::string where = "n=" + std::to_string(n) + " " + sig_str(sig);
      critical.guard(where, [&] {
        const Subspace w = construct_subspace_of_type(space, sig);
        critical.add_abs(std::abs(energy(w) - sig.n0), where + " energy");
        critical.add_abs(riemannian_gradient(w).matrix.norm(), where + " gradient");
      });
    }
  }
  return {decomposition.done(), bounds.done(), strict.done(), critical.done()};
}

std::vector<OracleReport> suite_stabilizer(const SuiteOptions& opts) {
  const std::uint64_t seed = opts.seed;
  const int max_n = max_n_or(opts, 4);
  Check coordinate("stabilizer.coordinate", seed, 0.0, M::Absolute);
  Check randomized("stabilizer.randomized", seed, 0.0, M::Absolute);
  std::uint64_t counter = 0;
  for (int n = 1; n <= max_n; ++n) {
    const SpacePtr space = make_standard_space(n);
    for (const TypeSignature& sig : all_signatures(n)) {
      const std::string where = "n=" + std::to_string(n) + " " + sig_str(sig);
      const int expected = stabilizer_dimensions(sig).dim_total;
      coordinate.guard(where, [&] {
        coordinate.add_count(expected,
                             stabilizer_dimension_oracle(construct_subspace_of_type(space, sig)),
                             where);
      });
      randomized.guard(where, [&] {
        const Subspace w = construct_subspace_of_type(space, sig, ConstructionMode::Randomized,
                                                      split_seed(seed, counter++));
        randomized.add_count(expected, stabilizer_dimension_oracle(w), where);
      });
    }
  }
  return {coordinate.done(), randomized.done()};
}

}  // namespace symflow
