#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>

#include "helpers.hpp"
#include "symflow/darboux.hpp"
#include "symflow/energy_flow.hpp"
#include "symflow/oracles.hpp"
#include "symflow/random.hpp"

using namespace symflow;
using namespace testing;

namespace {

bool throws_kind(ErrorKind kind, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

Mat random_symmetric(int d, Rng& rng) {
  const Mat a = gaussian_matrix(d, d, rng);
  return 0.5 * (a + a.transpose());
}

double tangency_defect(const Subspace& w, const Mat& x) {
  const Mat r = 2.0 * w.projection() - Mat::Identity(x.rows(), x.cols());
  return max_abs(r * x + x * r);
}

}  // namespace

TEST_CASE("energy values") {
  for (int n = 1; n <= 4; ++n) {
    const auto space = make_standard_space(n);
    CHECK(energy(construct_subspace_of_type(space, {n, 0, 0})) == doctest::Approx(n).epsilon(1e-14));
    CHECK(energy(construct_subspace_of_type(space, {0, n / 2, n - n / 2})) == 0.0);
  }
  CHECK(energy(worked_example_family(1.0)) == doctest::Approx(2.0 * std::pow(std::tanh(2.0), 2)).epsilon(1e-12));
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 4;
    const Subspace w = random_subspace(make_standard_space(n), trial % (2 * n + 1), rng);
    CHECK(std::abs(energy(w) - energy_trace_form(w)) < 1e-12);
    CHECK(energy(w) >= 0.0);
  }
}

TEST_CASE("tangent projection") {
  Rng rng(4);
  const Subspace w = random_subspace(make_standard_space(3), 2, rng);
  const Mat a = random_symmetric(6, rng);
  const Mat x = project_to_tangent(w, a).matrix;
  CHECK(tangency_defect(w, x) < 1e-10);
  CHECK(max_abs(project_to_tangent(w, x).matrix - x) < 1e-12);
  CHECK(max_abs(project_to_tangent(w, w.projection()).matrix) < 1e-14);
  // Kernel: anything commuting with P.
  const Mat c = w.projection() * a * w.projection();
  CHECK(max_abs(project_to_tangent(w, 0.5 * (c + c.transpose())).matrix) < 1e-12);
  CHECK(throws_kind(ErrorKind::NonSymmetricInput, [&] { project_to_tangent(w, gaussian_matrix(6, 6, rng)); }));
}

TEST_CASE("gradient") {
  for (int n = 1; n <= 3; ++n)
    for (const TypeSignature& sig : all_signatures(n))
      CHECK(riemannian_gradient(construct_subspace_of_type(make_standard_space(n), sig)).matrix.norm() < 1e-12);

  const Subspace w1 = worked_example_family(1.0);
  const Mat g = riemannian_gradient(w1).matrix;
  CHECK(g.norm() > 0.1);
  CHECK(tangency_defect(w1, g) < 1e-10);
  CHECK(max_abs(g - g.transpose()) < 1e-12);
}

TEST_CASE("symmetry generator and fundamental fields") {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 3;
    const Subspace w = random_subspace(make_standard_space(n), 1 + trial % (2 * n - 1), rng);
    const LieAlgebraElement z = symmetry_generator(w);
    const Mat& j = w.space().J();
    CHECK(max_abs(z.matrix - z.matrix.transpose()) < 1e-12);
    CHECK(max_abs(z.matrix * j + j * z.matrix) < 1e-12);
    CHECK_NOTHROW(check_flavor(z, w.space()));
    CHECK(max_abs(fundamental_field(z, w).matrix + riemannian_gradient(w).matrix) < 1e-12);
  }

  const Subspace jc = construct_subspace_of_type(make_standard_space(3), {1, 1, 1});
  const LieAlgebraElement z = symmetry_generator(jc);
  CHECK(max_abs(commutator(jc.projection(), z.matrix)) < 1e-14);
  CHECK(max_abs(fundamental_field(z, jc).matrix) < 1e-14);

  const Subspace w = random_subspace(make_standard_space(2), 2, rng);
  const Mat& j = w.space().J();
  // Skew element of u(V): commutes with J.
  Mat s = gaussian_matrix(4, 4, rng);
  s = s - s.transpose().eval();
  const Mat u = 0.5 * (s + j * s * j.transpose());
  const LieAlgebraElement xi_u{u, Flavor::Both};
  CHECK_NOTHROW(check_flavor(xi_u, w.space()));
  CHECK(max_abs(fundamental_field(xi_u, w).matrix + commutator(w.projection(), u)) < 1e-14);
  // Symmetric element of p: anticommutes with J.
  const Mat a = random_symmetric(4, rng);
  const Mat pm = 0.5 * (a - j * a * j.transpose());
  const LieAlgebraElement xi_p{pm, Flavor::Symplectic};
  CHECK_NOTHROW(check_flavor(xi_p, w.space()));
  CHECK(max_abs(fundamental_field(xi_p, w).matrix -
                commutator(w.projection(), commutator(w.projection(), pm))) < 1e-13);
  const LieAlgebraElement bad{gaussian_matrix(4, 4, rng), Flavor::Symplectic};
  CHECK(throws_kind(ErrorKind::FlavorViolation, [&] { fundamental_field(bad, w); }));
  const LieAlgebraElement bad_skew{pm, Flavor::Orthogonal};
  CHECK(throws_kind(ErrorKind::FlavorViolation, [&] { check_flavor(bad_skew, w.space()); }));
}

TEST_CASE("Hessian at critical points") {
  const Subspace line = construct_subspace_of_type(make_standard_space(1), {1, 0, 0});
  const HessianReport lr = hessian_report(line);
  REQUIRE(lr.eigenvalues.size() == 1);
  CHECK(std::abs(lr.eigenvalues[0]) < 1e-12);

  const Subspace complex_line = construct_subspace_of_type(make_standard_space(2), {0, 1, 1});
  const HessianReport cr = hessian_report(complex_line);
  REQUIRE(cr.eigenvalues.size() == 4);
  CHECK(std::abs(cr.eigenvalues[0]) < 1e-12);
  CHECK(std::abs(cr.eigenvalues[1]) < 1e-12);
  CHECK(cr.eigenvalues[2] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(cr.eigenvalues[3] == doctest::Approx(4.0).epsilon(1e-12));

  const HessianReport plane = hessian_report(construct_subspace_of_type(make_standard_space(2), {2, 0, 0}));
  CHECK(plane.kernel_dim == 3);
  CHECK(plane.expected_kernel_dim == 3);

  CHECK(expected_kernel_dim({2, 0, 0}) == 3);
  CHECK(expected_kernel_dim({0, 1, 1}) == 2);
  CHECK(expected_kernel_dim({1, 1, 1}) == 7);

  CHECK(throws_kind(ErrorKind::NotCritical, [] { hessian_report(worked_example_family(1.0)); }));

  // Symmetric operator, block formula agreement, along the unitary orbit.
  Rng rng(8);
  for (const TypeSignature& sig : all_signatures(3)) {
    const Subspace w = transform(random_unitary(3, rng), construct_subspace_of_type(make_standard_space(3), sig));
    const HessianReport r = hessian_report(w);
    CHECK(r.kernel_dim == r.expected_kernel_dim);
    CHECK(r.asymmetry < 1e-10);
    for (int i = 0; i < 3; ++i) {
      const TangentVector y{w, random_tangent(w, rng)};
      CHECK(max_abs(hessian_at_critical(w, y).matrix - hessian_block_formula(w, y).matrix) < 1e-10);
    }
  }
}

TEST_CASE("flow step") {
  const Subspace jc = construct_subspace_of_type(make_standard_space(2), {1, 0, 1});
  const StepResult still = flow_step(jc, 0.3);
  CHECK(projection_distance(still.next, jc) < 1e-14);

  const Subspace w1 = worked_example_family(1.0);
  const StepResult s = flow_step(w1, 0.01);
  CHECK(s.accepted);
  CHECK(s.f_after < s.f_before);
  CHECK(classify(s.next) == TypeSignature{0, 1, 1});

  // First order: (P(h) - P) / h + grad = O(h).
  const Mat g = riemannian_gradient(w1).matrix;
  const auto defect = [&](double h) {
    return ((flow_step(w1, h).next.projection() - w1.projection()) / h + g).norm();
  };
  const double d1 = defect(1e-3), d2 = defect(5e-4);
  CHECK(d1 < 1e-2);
  CHECK(d1 / d2 == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("flow run") {
  const Subspace jc = construct_subspace_of_type(make_standard_space(3), {1, 1, 1});
  const FlowTrajectory fixed = flow_run(jc);
  CHECK(fixed.converged);
  CHECK(fixed.steps == 0);
  CHECK(fixed.samples.size() == 1);

  const FlowTrajectory t1 = flow_run(worked_example_family(1.0));
  CHECK(t1.converged);
  CHECK(t1.samples.back().f < 1e-8);
  CHECK_NOTHROW(validate_trajectory(t1));
  for (const FlowSample& s : t1.samples) CHECK(s.type == TypeSignature{0, 1, 1});
  for (std::size_t i = 1; i < t1.samples.size(); ++i) CHECK(t1.samples[i].f <= t1.samples[i - 1].f + 1e-12);

  const Subspace r = construct_subspace_of_type(make_standard_space(3), {1, 1, 1}, ConstructionMode::Randomized, 12);
  const FlowTrajectory tr = flow_run(r);
  CHECK(tr.converged);
  CHECK(std::abs(tr.samples.back().f - 1.0) < 1e-6);
  CHECK(is_J_compatible(tr.limit).compatible);

  FlowConfig sparse;
  sparse.record_every = 7;
  const FlowTrajectory ts = flow_run(worked_example_family(1.0), sparse);
  CHECK(ts.samples.back().step == ts.steps);
  for (std::size_t i = 1; i + 1 < ts.samples.size(); ++i) CHECK(ts.samples[i].step % 7 == 0);

  FlowConfig short_run;
  short_run.max_steps = 3;
  const FlowTrajectory cut = flow_run(worked_example_family(1.0), short_run);
  CHECK_FALSE(cut.converged);
  CHECK(cut.steps == 3);

  FlowConfig bad;
  bad.step = -1.0;
  CHECK(throws_kind(ErrorKind::InvalidArgument, [&] { flow_run(jc, bad); }));
}

TEST_CASE("trajectory validation rejects violations") {
  FlowTrajectory t = flow_run(worked_example_family(0.5));
  REQUIRE(t.samples.size() > 2);
  FlowTrajectory up = t;
  up.samples[1].f = up.samples[0].f + 1.0;
  CHECK(throws_kind(ErrorKind::InvalidArgument, [&] { validate_trajectory(up); }));
  FlowTrajectory retyped = t;
  retyped.samples[1].type = TypeSignature{2, 0, 0};
  CHECK(throws_kind(ErrorKind::InvalidArgument, [&] { validate_trajectory(retyped); }));
}

TEST_CASE("critical points are exactly the J-compatible subspaces") {
  Rng rng(14);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 3;
    const auto sigs = all_signatures(n);
    const TypeSignature sig = sigs[static_cast<std::size_t>(trial) % sigs.size()];
    const Subspace crit = transform(random_unitary(n, rng), construct_subspace_of_type(make_standard_space(n), sig));
    CHECK(riemannian_gradient(crit).matrix.norm() < 1e-10);
    CHECK(is_J_compatible(crit).residual < 1e-8);
    const Subspace generic = construct_subspace_of_type(make_standard_space(n), sig, ConstructionMode::Randomized, 50 + trial);
    const bool critical = riemannian_gradient(generic).matrix.norm() < 1e-10;
    CHECK(critical == (is_J_compatible(generic).residual < 1e-8));
  }
}

TEST_CASE("energy bounds") {
  const EnergyBounds lag = energy_bounds({3, 0, 0}, 3, 3);
  CHECK(lag.lower == 3.0);
  CHECK(lag.upper == 3.0);
  CHECK_FALSE(lag.strict_upper);
  const EnergyBounds line = energy_bounds({0, 1, 1}, 2, 2);
  CHECK(line.lower == 0.0);
  CHECK(line.upper == 2.0);
  CHECK(line.strict_upper);
  const EnergyBounds mixed = energy_bounds({1, 1, 1});
  CHECK(mixed.lower == 1.0);
  CHECK(mixed.upper == 3.0);
  CHECK(mixed.strict_upper);
}

TEST_CASE("stabilizer dimensions") {
  const StabilizerDimensions sym = stabilizer_dimensions({0, 1, 2});
  CHECK(sym.dim_H == 0);
  const StabilizerDimensions lag = stabilizer_dimensions({2, 0, 0});
  CHECK(lag.dim_H == 3);
  CHECK(lag.dim_total == 7);
  CHECK(stabilizer_dimensions({1, 1, 1}).dim_H == 5);
  CHECK(stabilizer_dimensions({1, 1, 1}).dim_unitary_stab == 2);

  const auto space = make_standard_space(2);
  CHECK(stabilizer_dimension_oracle(construct_subspace_of_type(space, {2, 0, 0})) == 7);
  CHECK(stabilizer_dimension_oracle(construct_subspace_of_type(space, {0, 1, 1})) == 6);
  for (int n = 1; n <= 3; ++n)
    CHECK(stabilizer_dimension_oracle(Subspace(make_standard_space(n), Mat::Identity(2 * n, 2 * n))) ==
          n * (2 * n + 1));
}
