#include <doctest.h>

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

// Independent complement: nullspace of the pairings against a basis of W.
Subspace complement_by_nullspace(const Subspace& w) {
  const SymplecticSpace& s = w.space();
  // Row i applied to v gives omega(v, w_i).
  const Mat rows = w.basis().transpose() * s.omega();
  return subspace_from_spanning(w.space_ptr(), Eigen::FullPivLU<Mat>(rows).kernel());
}

}  // namespace

TEST_CASE("standard model") {
  const auto s1 = make_standard_space(1);
  Mat omega1(2, 2);
  omega1 << 0, -1, 1, 0;
  CHECK(s1->omega() == omega1);
  const auto s2 = make_standard_space(2);
  CHECK(s2->J() * s2->J() == -Mat::Identity(4, 4));
  CHECK(s2->J().transpose() == -s2->J());
  CHECK(make_standard_space(3)->metric() == Mat::Identity(6, 6));
  CHECK(throws_kind(ErrorKind::InvalidArgument, [] { make_standard_space(0); }));

  // g(u, v) = omega(u, J v) is the dot product.
  Rng rng(1);
  const Vec u = gaussian_matrix(4, 1, rng), v = gaussian_matrix(4, 1, rng);
  CHECK(s2->inner(u, v) == doctest::Approx(u.dot(v)).epsilon(1e-14));
  // omega(e1, f1) = 1 with omega(u, v) = v^T omega u.
  CHECK(s2->form(e(2, 0), f(2, 0)) == 1.0);
}

TEST_CASE("subspace_from_spanning") {
  const auto space = make_standard_space(2);
  const Subspace w = subspace_from_spanning(space, Mat::Identity(4, 2));
  CHECK(max_abs(w.basis() - Mat::Identity(4, 2)) == 0.0);
  CHECK(throws_kind(ErrorKind::RankDeficient, [&] {
    subspace_from_spanning(space, columns({e(2, 0), e(2, 0)}));
  }));
  Rng rng(7);
  const Subspace r = subspace_from_spanning(space, gaussian_matrix(4, 3, rng));
  CHECK(max_abs(r.basis().transpose() * r.basis() - Mat::Identity(3, 3)) < 1e-12);
  const Mat& p = r.projection();
  CHECK(max_abs(p * p - p) < 1e-10);
  CHECK(p.trace() == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(throws_kind(ErrorKind::InvalidArgument, [&] { Subspace(space, 2.0 * Mat::Identity(4, 1)); }));
}

TEST_CASE("symplectic complement") {
  CHECK(same_subspace(symplectic_complement(span(2, {e(2, 0), e(2, 1)})), span(2, {e(2, 0), e(2, 1)})));
  CHECK(same_subspace(symplectic_complement(span(2, {e(2, 0)})),
                      span(2, {e(2, 0), e(2, 1), f(2, 1)})));
  CHECK(same_subspace(symplectic_complement(span(2, {e(2, 0), f(2, 0)})), span(2, {e(2, 1), f(2, 1)})));

  Rng rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 4;
    const int k = trial % (2 * n + 1);
    const Subspace w = random_subspace(make_standard_space(n), k, rng);
    const Subspace c = symplectic_complement(w);
    CHECK(c.k() == 2 * n - k);
    CHECK(max_abs(w.space().pairing(c.basis(), w.basis())) < 1e-10);
    if (k > 0 && k < 2 * n) CHECK(same_subspace(c, complement_by_nullspace(w), 1e-9));
    CHECK(projection_distance(symplectic_complement(c), w) < 1e-9);
  }
}

TEST_CASE("intersect") {
  const Subspace w = span(2, {e(2, 0), f(2, 1)});
  CHECK(same_subspace(intersect(w, w), w));
  CHECK(same_subspace(intersect(span(2, {e(2, 0), e(2, 1)}), span(2, {e(2, 1), f(2, 0)})),
                      span(2, {e(2, 1)})));
  CHECK(intersect(span(2, {e(2, 0), e(2, 1)}), span(2, {f(2, 0), f(2, 1)})).k() == 0);
}

TEST_CASE("isotropic kernel and maximal complex subspace") {
  const Subspace lag = span(2, {e(2, 0), e(2, 1)});
  const Subspace line = span(2, {e(2, 0), f(2, 0)});
  const Subspace w1 = worked_example_family(1.0);
  CHECK(same_subspace(isotropic_kernel(lag), lag));
  CHECK(isotropic_kernel(line).k() == 0);
  CHECK(isotropic_kernel(w1).k() == 0);
  CHECK(same_subspace(max_complex_subspace(line), line));
  CHECK(max_complex_subspace(lag).k() == 0);
  CHECK(max_complex_subspace(w1).k() == 0);

  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 3;
    const TypeSignature sig = all_signatures(n)[static_cast<std::size_t>(trial) % all_signatures(n).size()];
    const Subspace w = construct_subspace_of_type(make_standard_space(n), sig,
                                                  ConstructionMode::Randomized, 100 + trial);
    const Subspace w0 = isotropic_kernel(w);
    CHECK(w0.k() == sig.n0);
    CHECK(max_abs(w.space().pairing(w0.basis(), w0.basis())) < 1e-10);
    // Oracle: W0 = W cap W^omega via the generic intersection.
    CHECK(same_subspace(w0, intersect(w, symplectic_complement(w)), 1e-8));
    const Subspace wj = max_complex_subspace(w);
    const Mat& j = w.space().J();
    const Mat id = Mat::Identity(2 * n, 2 * n);
    CHECK(max_abs((id - wj.projection()) * j * wj.projection()) < 1e-9);
    CHECK(same_subspace(wj, intersect(w, apply_j(w)), 1e-8));
  }
}

TEST_CASE("classify") {
  CHECK(classify(span(2, {e(2, 0), e(2, 1)})) == TypeSignature{2, 0, 0});
  CHECK(classify(span(2, {e(2, 0), f(2, 0)})) == TypeSignature{0, 1, 1});
  CHECK(classify(worked_example_family(1.0)) == TypeSignature{0, 1, 1});
  CHECK(classify(Subspace(make_standard_space(3), Mat(6, 0))) == TypeSignature{0, 0, 3});

  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 4;
    const int k = trial % (2 * n + 1);
    const auto space = make_standard_space(n);
    const Subspace w = random_subspace(space, k, rng);
    const TypeSignature sig = classify(w);
    CHECK(sig.n() == n);
    CHECK(sig.k() == k);
    // Right multiplication by an orthogonal k x k matrix leaves the type alone.
    if (k > 0) {
      const Mat q = orthonormalize(gaussian_matrix(k, k, rng));
      CHECK(classify(Subspace(space, w.basis() * q, 1e-11)) == sig);
    }
    // Orbit invariance under Sp(V).
    CHECK(classify(transform(random_symplectic(n, rng), w)) == sig);
    CHECK(kahler_spectrum(w).n0 == sig.n0);
  }
}

TEST_CASE("classification instability is surfaced") {
  // A plane whose restricted form has singular value ~1e-9 sits on the cut.
  const double eps = 1e-9;
  const Subspace w = span(2, {e(2, 0), std::sqrt(1 - eps * eps) * e(2, 1) + eps * f(2, 0)});
  CHECK(throws_kind(ErrorKind::ClassificationUnstable, [&] { classify(w); }));
}

TEST_CASE("Kahler spectrum") {
  const KahlerSpectrum plane = kahler_spectrum(span(2, {e(2, 0), f(2, 0)}));
  CHECK(plane.n0 == 0);
  CHECK(plane.nJ == 1);
  CHECK(plane.angles.empty());

  for (double theta : {0.3, 0.7, 1.2}) {
    const Vec v = std::cos(theta) * f(2, 0) + std::sin(theta) * f(2, 1);
    const Subspace w = span(2, {e(2, 0), v});
    const KahlerSpectrum spec = kahler_spectrum(w);
    REQUIRE(spec.angles.size() == 1);
    // Definition: cos(theta) = |omega(u, v)| on an orthonormal pair.
    CHECK(spec.angles[0] == doctest::Approx(std::acos(std::abs(w.space().form(e(2, 0), v)))).epsilon(1e-12));
    CHECK(spec.ntheta == 1);
  }

  const KahlerSpectrum w1 = kahler_spectrum(worked_example_family(1.0));
  REQUIRE(w1.angles.size() == 1);
  const double s = std::sin(w1.angles[0]);
  CHECK(s * s == doctest::Approx(std::pow(std::tanh(2.0), 2)).epsilon(1e-12));

  // k = n0 + 2 nJ + 2 ntheta, and nJ + ntheta = n+.
  Rng rng(19);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 4;
    const int k = trial % (2 * n + 1);
    const Subspace w = random_subspace(make_standard_space(n), k, rng);
    const KahlerSpectrum spec = kahler_spectrum(w);
    const TypeSignature sig = classify(w);
    CHECK(spec.n0 + 2 * spec.nJ + 2 * spec.ntheta == k);
    CHECK(spec.nJ + spec.ntheta == sig.nplus);
    for (double th : spec.angles) {
      CHECK(th > 0.0);
      CHECK(th < M_PI / 2);
    }
    // Totally real pair counts of W and W^omega agree.
    CHECK(kahler_spectrum(symplectic_complement(w)).ntheta == spec.ntheta);
  }
}

TEST_CASE("J-compatibility") {
  CHECK(is_J_compatible(span(3, {e(3, 0), e(3, 1)})).compatible);
  CHECK(is_J_compatible(span(3, {e(3, 0) + f(3, 1), e(3, 2)})).compatible);
  const CompatibilityReport w1 = is_J_compatible(worked_example_family(1.0));
  CHECK_FALSE(w1.compatible);
  CHECK(w1.residual > 0.1);
  const CompatibilityReport complex = is_J_compatible(span(2, {e(2, 0), f(2, 0)}));
  CHECK(complex.compatible);
  CHECK(complex.residual == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("minimal complex subspace of coisotropic subspaces") {
  const auto whole = Subspace(make_standard_space(2), Mat::Identity(4, 4));
  CHECK(min_complex_check(whole));
  CHECK(kahler_spectrum(whole).nJ == 2);
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const Subspace w = random_subspace(make_standard_space(2), 3, rng);
    CHECK(min_complex_check(w));
    CHECK(kahler_spectrum(w).nJ >= 1);
  }
  CHECK(throws_kind(ErrorKind::NotApplicable,
                    [] { min_complex_check(span(2, {e(2, 0), e(2, 1)})); }));
}

TEST_CASE("signatures") {
  CHECK(all_signatures(1).size() == 3);
  CHECK(all_signatures(3).size() == 10);
  CHECK(is_consistent({1, 1, 1}, 3));
  CHECK_FALSE(is_consistent({4, 0, 0}, 2));
  CHECK_FALSE(is_consistent({-1, 2, 1}, 2));
  const auto sigs = all_signatures(2);
  for (std::size_t i = 1; i < sigs.size(); ++i) CHECK(sigs[i - 1].k() <= sigs[i].k());
}
