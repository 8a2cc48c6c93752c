#include "symflow/darboux.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "symflow/random.hpp"

namespace symflow {

namespace {

struct AnglePair {
  Vec e;
  Vec f;
  double theta = 0.0;
};

// Unit vector of span(q) with the largest component along the lowest-index
// coordinate axis that span(q) sees at all; the maximizer is the normalized
// projection of that axis.
Vec preferred_unit_vector(const Mat& q) {
  for (Eigen::Index i = 0; i < q.rows(); ++i) {
    if (q.row(i).norm() > 1e-6) {
      const Vec v = q * q.row(i).transpose();
      return v / v.norm();
    }
  }
  throw Error(ErrorKind::InvalidArgument, "cannot choose a vector in an empty span");
}

// Remove span(extra) from the orthonormal coordinate frame u.
Mat drop_span(const Mat& u, const Mat& extra) {
  const Mat coords = orthonormalize(u.transpose() * extra);
  return u * orthogonal_complement(coords);
}

// Orthonormal basis of the span of the columns of m; m may be rank deficient
// only through roundoff.
Mat span_basis(const Mat& m) { return orthonormalize(m); }

// Totally real pairs (e_j, f_j = sec^2(theta_j) P J e_j) from the
// intermediate eigenspaces of S = -T^2, ascending in theta.
std::vector<AnglePair> angle_pairs(const Subspace& w, const Tolerances& tol) {
  std::vector<AnglePair> pairs;
  if (w.k() == 0) return pairs;
  const Mat t = w.restricted_j();
  const Mat s = t.transpose() * t;
  Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (s + s.transpose()));
  const Vec& values = eig.eigenvalues();

  std::vector<Eigen::Index> middle;
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (values(i) >= tol.cluster_tol && values(i) <= 1.0 - tol.cluster_tol) middle.push_back(i);

  // Clusters of (numerically) equal eigenvalues, processed from the largest
  // eigenvalue (smallest angle) down.
  std::vector<std::vector<Eigen::Index>> clusters;
  for (auto it = middle.rbegin(); it != middle.rend(); ++it) {
    if (!clusters.empty() && values(clusters.back().back()) - values(*it) <= tol.cluster_tol)
      clusters.back().push_back(*it);
    else
      clusters.push_back({*it});
  }

  for (const auto& cluster : clusters) {
    if (cluster.size() % 2 != 0)
      throw Error(ErrorKind::SpectrumPairingFailure,
                  "eigenvalue cluster near " + std::to_string(values(cluster.front())) +
                      " has odd multiplicity");
    Mat u(w.k(), static_cast<Eigen::Index>(cluster.size()));
    for (std::size_t c = 0; c < cluster.size(); ++c)
      u.col(static_cast<Eigen::Index>(c)) = eig.eigenvectors().col(cluster[c]);

    while (u.cols() > 0) {
      const Vec e = preferred_unit_vector(w.basis() * u);
      const Vec coords = w.basis().transpose() * e;
      const Vec tu = t * coords;
      const double lambda = tu.squaredNorm();
      AnglePair pair;
      pair.e = e;
      pair.f = w.basis() * (tu / lambda);
      pair.theta = std::acos(std::sqrt(std::clamp(lambda, 0.0, 1.0)));
      pairs.push_back(std::move(pair));
      Mat used(w.k(), 2);
      used.col(0) = coords;
      used.col(1) = tu / std::sqrt(lambda);
      u = drop_span(u, used);
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const AnglePair& a, const AnglePair& b) { return a.theta < b.theta; });
  return pairs;
}

// Symplectic Gram-Schmidt on a symplectic subspace, pivoting on the largest
// |omega| pairing at every step.
void symplectic_gram_schmidt(const Subspace& u, const Tolerances& tol, Mat& e_out,
                             Mat& f_out) {
  const SymplecticSpace& space = u.space();
  const int m = u.k() / 2;
  if (u.k() % 2 != 0)
    throw Error(ErrorKind::DegeneratePairing, "odd-dimensional subspace is not symplectic");
  e_out.resize(space.dim(), m);
  f_out.resize(space.dim(), m);
  Mat rest = u.basis();
  for (int step = 0; step < m; ++step) {
    const Mat omega = space.pairing(rest, rest);
    Eigen::Index a = 0, b = 0;
    const double best = omega.cwiseAbs().maxCoeff(&a, &b);
    if (best < tol.rank_tol * tol.unstable_factor)
      throw Error(ErrorKind::DegeneratePairing, "subspace is not symplectic");
    const Vec e = rest.col(a);
    const Vec f = rest.col(b) / omega(a, b);
    e_out.col(step) = e;
    f_out.col(step) = f;

    Mat next(rest.rows(), rest.cols() - 2);
    Eigen::Index c = 0;
    for (Eigen::Index j = 0; j < rest.cols(); ++j) {
      if (j == a || j == b) continue;
      const Vec v = rest.col(j);
      next.col(c++) = v + space.form(f, v) * e - space.form(e, v) * f;
    }
    rest = next.cols() > 0 ? orthonormalize(next) : next;
  }
}

// Orthonormal (e, J e) basis of a J-invariant subspace given by orthonormal q.
Mat complex_frame(const Mat& q, const Mat& j) {
  const Eigen::Index m = q.cols() / 2;
  Mat e(q.rows(), m);
  Mat rest = q;
  for (Eigen::Index step = 0; step < m; ++step) {
    const Vec v = preferred_unit_vector(rest);
    e.col(step) = v;
    Mat used(q.rows(), 2);
    used.col(0) = v;
    used.col(1) = j * v;
    rest = drop_span(rest, used);
  }
  return e;
}

}  // namespace

double DarbouxReport::max() const { return std::max({ef_deviation, ee_deviation, ff_deviation}); }

double AdaptationReport::max() const {
  return std::max({e0_vs_w0, f0_vs_w0dual, plus_vs_wplus, minus_vs_wminus});
}

DarbouxBasis TotallyRealDarboux::full() const {
  DarbouxBasis out;
  out.n0 = 0;
  out.nplus = static_cast<int>(e.cols());
  out.nminus = static_cast<int>(complement_e.cols());
  out.e.resize(e.rows(), out.nplus + out.nminus);
  out.f.resize(e.rows(), out.nplus + out.nminus);
  out.e << e, complement_e;
  out.f << f, complement_f;
  return out;
}

Splitting canonical_splitting(const Subspace& w, const Tolerances& tol) {
  const Subspace w0 = isotropic_kernel(w, tol);
  const Subspace womega = symplectic_complement(w);
  return Splitting{complement_within(w, w0), complement_within(womega, w0), apply_j(w0)};
}

DarbouxBasis relative_darboux_basis(const Subspace& w, const Splitting& s, const Tolerances& tol) {
  const SymplecticSpace& space = w.space();
  const Subspace w0 = isotropic_kernel(w, tol);
  const int n0 = w0.k();
  if (s.wplus.k() + n0 != w.k() || s.wminus.k() + n0 != 2 * w.n() - w.k() ||
      s.w0dual.k() != n0)
    throw Error(ErrorKind::InvalidArgument, "splitting dimensions do not match the type of W");

  DarbouxBasis out;
  out.n0 = n0;
  out.nplus = s.wplus.k() / 2;
  out.nminus = s.wminus.k() / 2;

  const Mat e0 = w0.basis();
  Mat f0(space.dim(), n0);
  if (n0 > 0) {
    const Mat gram = space.pairing(e0, s.w0dual.basis());
    const Vec sigma = gram.jacobiSvd().singularValues();
    if (sigma(sigma.size() - 1) < tol.rank_tol * tol.unstable_factor)
      throw Error(ErrorKind::DegeneratePairing,
                  "W0 and W^0 are not paired by omega (smallest singular value " +
                      std::to_string(sigma(sigma.size() - 1)) + ")");
    f0 = s.w0dual.basis() * gram.partialPivLu().inverse();
  }

  Mat eplus, fplus, eminus, fminus;
  symplectic_gram_schmidt(s.wplus, tol, eplus, fplus);
  symplectic_gram_schmidt(s.wminus, tol, eminus, fminus);

  const int n = w.n();
  out.e.resize(space.dim(), n);
  out.f.resize(space.dim(), n);
  out.e << e0, eplus, eminus;
  out.f << f0, fplus, fminus;
  return out;
}

TotallyRealDarboux totally_real_darboux(const Subspace& w, const Tolerances& tol) {
  if (w.k() != w.n() || w.n() % 2 != 0)
    throw Error(ErrorKind::NotHalfDimensional,
                "needs dim W = n with 2n divisible by 4 (n = " + std::to_string(w.n()) +
                    ", k = " + std::to_string(w.k()) + ")");
  const KahlerSpectrum spec = kahler_spectrum(w, tol);
  if (spec.nJ > 0) throw Error(ErrorKind::NotTotallyReal, "W contains a complex line");
  if (spec.n0 > 0) throw Error(ErrorKind::NotSymplectic, "W has a nonzero isotropic kernel");

  const Subspace womega = symplectic_complement(w);
  const KahlerSpectrum cspec = kahler_spectrum(womega, tol);
  if (cspec.nJ > 0 || cspec.n0 > 0)
    throw Error(ErrorKind::NotTotallyReal, "W^omega is not totally real symplectic");

  TotallyRealDarboux out;
  const auto fill = [&](const Subspace& sub, Mat& e, Mat& f, std::vector<double>& angles) {
    const std::vector<AnglePair> pairs = angle_pairs(sub, tol);
    e.resize(sub.space().dim(), static_cast<Eigen::Index>(pairs.size()));
    f.resize(sub.space().dim(), static_cast<Eigen::Index>(pairs.size()));
    for (std::size_t j = 0; j < pairs.size(); ++j) {
      e.col(static_cast<Eigen::Index>(j)) = pairs[j].e;
      f.col(static_cast<Eigen::Index>(j)) = pairs[j].f;
      angles.push_back(pairs[j].theta);
    }
  };
  fill(w, out.e, out.f, out.angles);
  fill(womega, out.complement_e, out.complement_f, out.complement_angles);
  return out;
}

DarbouxBasis j_compatible_darboux(const Subspace& w, const Tolerances& tol) {
  if (!is_J_compatible(w, tol).compatible)
    throw Error(ErrorKind::NotJCompatible, "W is not the sum of its isotropic kernel and W^J");
  const SymplecticSpace& space = w.space();
  const Mat& j = space.J();

  const Mat e0 = isotropic_kernel(w, tol).basis();
  const Mat wj = max_complex_subspace(w, tol).basis();
  const Mat eplus = complex_frame(wj, j);

  Mat taken(space.dim(), 2 * e0.cols() + wj.cols());
  taken << e0, j * e0, wj;
  const Mat rest = taken.cols() > 0 ? orthogonal_complement(span_basis(taken))
                                    : Mat(Mat::Identity(space.dim(), space.dim()));
  const Mat eminus = complex_frame(rest, j);

  DarbouxBasis out;
  out.n0 = static_cast<int>(e0.cols());
  out.nplus = static_cast<int>(eplus.cols());
  out.nminus = static_cast<int>(eminus.cols());
  out.e.resize(space.dim(), space.n());
  out.e << e0, eplus, eminus;
  out.f = j * out.e;
  return out;
}

KahlerBlocks kahler_block_decomposition(const Subspace& w, const Tolerances& tol) {
  const SymplecticSpace& space = w.space();
  const Mat& j = space.J();
  const SpacePtr& ptr = w.space_ptr();

  const Mat e0 = isotropic_kernel(w, tol).basis();
  Mat v0(space.dim(), 2 * e0.cols());
  v0 << e0, j * e0;

  const Mat wplus_j = max_complex_subspace(w, tol).basis();
  const Mat wminus_j = max_complex_subspace(symplectic_complement(w), tol).basis();
  Mat vj(space.dim(), wplus_j.cols() + wminus_j.cols());
  vj << wplus_j, wminus_j;

  KahlerBlocks out{Subspace(ptr, span_basis(v0)), Subspace(ptr, span_basis(vj)), {}};
  for (const AnglePair& pair : angle_pairs(w, tol)) {
    Mat plane(space.dim(), 2);
    plane << pair.e, pair.f;
    Mat block(space.dim(), 4);
    block << plane, j * plane;
    out.blocks.push_back(
        KahlerBlock{Subspace(ptr, span_basis(block)), Subspace(ptr, span_basis(plane)), pair.theta});
  }
  const int total = out.v0.k() + out.vj.k() + 4 * static_cast<int>(out.blocks.size());
  if (total != space.dim())
    throw Error(ErrorKind::SpectrumPairingFailure,
                "Kahler blocks cover dimension " + std::to_string(total) + " of " +
                    std::to_string(space.dim()));
  return out;
}

Subspace construct_subspace_of_type(const SpacePtr& space, const TypeSignature& sig,
                                    ConstructionMode mode, std::uint64_t seed, double sigma) {
  if (!is_consistent(sig, space->n()))
    throw Error(ErrorKind::InconsistentSignature,
                "signature (" + std::to_string(sig.n0) + "," + std::to_string(sig.nplus) + "," +
                    std::to_string(sig.nminus) + ") does not fit n = " +
                    std::to_string(space->n()));
  const int n = space->n();
  std::vector<int> indices;
  for (int i = 0; i < sig.n0 + sig.nplus; ++i) indices.push_back(i);
  for (int i = sig.n0; i < sig.n0 + sig.nplus; ++i) indices.push_back(n + i);
  const Subspace coordinate = coordinate_subspace(space, indices);
  if (mode == ConstructionMode::Coordinate) return coordinate;

  Rng rng(seed);
  return transform(random_symplectic(n, rng, sigma), coordinate);
}

DarbouxReport darboux_check(const DarbouxBasis& basis, const SymplecticSpace& space) {
  DarbouxReport out;
  const Eigen::Index m = basis.e.cols();
  out.ef_deviation = max_abs(space.pairing(basis.e, basis.f) - Mat::Identity(m, m));
  out.ee_deviation = max_abs(space.pairing(basis.e, basis.e));
  out.ff_deviation = max_abs(space.pairing(basis.f, basis.f));
  return out;
}

AdaptationReport adaptation_check(const Subspace& w, const Splitting& s, const DarbouxBasis& basis,
                                  const Tolerances& tol) {
  const SpacePtr& ptr = w.space_ptr();
  const auto span = [&](const Mat& a, const Mat& b) {
    Mat m(a.rows(), a.cols() + b.cols());
    m << a, b;
    return Subspace(ptr, span_basis(m));
  };
  const Mat none(w.space().dim(), 0);
  AdaptationReport out;
  out.e0_vs_w0 = projection_distance(span(basis.e0(), none), isotropic_kernel(w, tol));
  out.f0_vs_w0dual = projection_distance(span(basis.f0(), none), s.w0dual);
  out.plus_vs_wplus = projection_distance(span(basis.eplus(), basis.fplus()), s.wplus);
  out.minus_vs_wminus = projection_distance(span(basis.eminus(), basis.fminus()), s.wminus);
  return out;
}

}  // namespace symflow
