#include "symflow/energy_flow.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "symflow/darboux.hpp"

namespace symflow {

namespace {

double scale_of(const Mat& m) { return std::max(1.0, max_abs(m)); }

Mat ad2(const Mat& p, const Mat& a) { return commutator(p, commutator(p, a)); }

// Ambient gradient [J, [P, J]] of f on symmetric matrices.
Mat ambient_gradient(const Mat& p, const Mat& j) { return commutator(j, commutator(p, j)); }

}  // namespace

void check_flavor(const LieAlgebraElement& xi, const SymplecticSpace& space, double tol) {
  const Mat& m = xi.matrix;
  if (m.rows() != space.dim() || m.cols() != space.dim())
    throw Error(ErrorKind::FlavorViolation, "Lie algebra element has the wrong shape");
  const double bound = tol * scale_of(m);
  const Mat& j = space.J();
  const bool symplectic = max_abs(m * j + j * m.transpose()) <= bound;
  const bool skew = max_abs(m + m.transpose()) <= bound;
  switch (xi.flavor) {
    case Flavor::Symplectic:
      if (!symplectic) throw Error(ErrorKind::FlavorViolation, "xi J + J xi^T != 0");
      break;
    case Flavor::Orthogonal:
      if (!skew) throw Error(ErrorKind::FlavorViolation, "xi is not skew-symmetric");
      break;
    case Flavor::Both:
      if (!symplectic || !skew)
        throw Error(ErrorKind::FlavorViolation, "xi is not in u(V, J)");
      break;
  }
}

double energy(const Subspace& w) {
  const Mat c = commutator(w.projection(), w.space().J());
  return 0.5 * (c * c).trace();
}

double energy_trace_form(const Subspace& w) {
  const Mat& p = w.projection();
  const Mat& j = w.space().J();
  return static_cast<double>(w.k()) + (p * j * p * j).trace();
}

TangentVector project_to_tangent(const Subspace& w, const Mat& a) {
  if (a.rows() != w.space().dim() || a.cols() != w.space().dim())
    throw Error(ErrorKind::InvalidArgument, "ambient matrix has the wrong shape");
  if (max_abs(a - a.transpose()) > 1e-12 * scale_of(a))
    throw Error(ErrorKind::NonSymmetricInput, "tangent projection needs a symmetric matrix");
  return TangentVector{w, ad2(w.projection(), a)};
}

TangentVector riemannian_gradient(const Subspace& w) {
  const Mat& p = w.projection();
  return TangentVector{w, ad2(p, ambient_gradient(p, w.space().J()))};
}

LieAlgebraElement symmetry_generator(const Subspace& w) {
  return LieAlgebraElement{-ambient_gradient(w.projection(), w.space().J()), Flavor::Symplectic};
}

TangentVector fundamental_field(const LieAlgebraElement& xi, const Subspace& w) {
  check_flavor(xi, w.space());
  const Mat& p = w.projection();
  const Mat& m = xi.matrix;
  const Mat field =
      -0.5 * commutator(p, m - m.transpose()) + 0.5 * ad2(p, m + m.transpose());
  return TangentVector{w, field};
}

TangentVector hessian_at_critical(const Subspace& w, const TangentVector& y, double grad_tol,
                                  const Tolerances& tol) {
  const double gnorm = riemannian_gradient(w).matrix.norm();
  if (gnorm >= grad_tol)
    throw Error(ErrorKind::NotCritical, "gradient norm " + std::to_string(gnorm) +
                                            " exceeds " + std::to_string(grad_tol));
  if (!is_J_compatible(w, tol).compatible)
    throw Error(ErrorKind::NotCritical, "W is not J-compatible");
  const Mat& p = w.projection();
  const Mat& j = w.space().J();
  const Mat& ym = y.matrix;
  const Mat first = ad2(p, commutator(j, commutator(ym, j)));
  const Mat second = commutator(p, commutator(ym, ambient_gradient(p, j)));
  return TangentVector{w, first + second};
}

TangentVector hessian_block_formula(const Subspace& w, const TangentVector& y,
                                    const Tolerances& tol) {
  const DarbouxBasis basis = j_compatible_darboux(w, tol);
  const Mat& j = w.space().J();
  const int n0 = basis.n0, np = basis.nplus, nm = basis.nminus;
  const int k = n0 + 2 * np;
  const int dim = w.space().dim();

  // Ordered orthonormal basis W0 | W+^J | J W0 | W-^J.
  Mat q(dim, dim);
  q << basis.e0(), basis.eplus(), j * basis.eplus(), j * basis.e0(), basis.eminus(),
      j * basis.eminus();
  const Mat yhat = q.transpose() * y.matrix * q;

  const Mat a = yhat.block(k, 0, n0, n0);
  const Mat d = yhat.block(k + n0, n0, 2 * nm, 2 * np);
  const Mat jplus = q.middleCols(n0, 2 * np).transpose() * j * q.middleCols(n0, 2 * np);
  const Mat jminus = q.rightCols(2 * nm).transpose() * j * q.rightCols(2 * nm);

  const Mat ha = 2.0 * (a.transpose() - a);
  const Mat hd = 2.0 * (d + jminus * d * jplus);
  Mat hhat = Mat::Zero(dim, dim);
  hhat.block(k, 0, n0, n0) = ha;
  hhat.block(0, k, n0, n0) = ha.transpose();
  hhat.block(k + n0, n0, 2 * nm, 2 * np) = hd;
  hhat.block(n0, k + n0, 2 * np, 2 * nm) = hd.transpose();
  return TangentVector{w, q * hhat * q.transpose()};
}

std::vector<Mat> tangent_frame(const Subspace& w) {
  const Mat& b = w.basis();
  const Mat perp = orthogonal_complement(b);
  std::vector<Mat> frame;
  frame.reserve(static_cast<std::size_t>(b.cols() * perp.cols()));
  const double s = 1.0 / std::sqrt(2.0);
  for (Eigen::Index j = 0; j < b.cols(); ++j)
    for (Eigen::Index i = 0; i < perp.cols(); ++i) {
      const Mat outer = perp.col(i) * b.col(j).transpose();
      frame.push_back(s * (outer + outer.transpose()));
    }
  return frame;
}

Mat hessian_matrix(const Subspace& w, double grad_tol, const Tolerances& tol) {
  const std::vector<Mat> frame = tangent_frame(w);
  const auto m = static_cast<Eigen::Index>(frame.size());
  Mat h(m, m);
  for (Eigen::Index b = 0; b < m; ++b) {
    const Mat image =
        hessian_at_critical(w, TangentVector{w, frame[static_cast<std::size_t>(b)]}, grad_tol, tol)
            .matrix;
    for (Eigen::Index a = 0; a < m; ++a) h(a, b) = trace_inner(frame[static_cast<std::size_t>(a)], image);
  }
  return h;
}

int expected_kernel_dim(const TypeSignature& sig) {
  const int n = sig.n();
  return n * n - sig.n0 * (sig.n0 - 1) / 2 - sig.nplus * sig.nplus - sig.nminus * sig.nminus;
}

HessianReport hessian_report(const Subspace& w, double grad_tol, double kernel_threshold,
                             const Tolerances& tol) {
  HessianReport out;
  const Mat h = hessian_matrix(w, grad_tol, tol);
  out.asymmetry = max_abs(h - h.transpose());
  if (h.rows() > 0) {
    Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (h + h.transpose()), Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
      out.eigenvalues.push_back(eig.eigenvalues()(i));
      if (std::abs(eig.eigenvalues()(i)) < kernel_threshold) ++out.kernel_dim;
    }
  }
  out.expected_kernel_dim = expected_kernel_dim(classify(w, tol));
  return out;
}

StepResult flow_step(const Subspace& w, double h) {
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "step size must be positive");
  const Mat g = expm(h * symmetry_generator(w).matrix);
  Subspace next(w.space_ptr(), orthonormalize(g * w.basis()));
  StepResult out{std::move(next), energy(w), 0.0, false};
  out.f_after = energy(out.next);
  out.accepted = out.f_after <= out.f_before;
  return out;
}

namespace {

FlowSample make_sample(long step, double t, const Subspace& w, double f, double gnorm,
                       const Tolerances& tol) {
  FlowSample s;
  s.step = step;
  s.t = t;
  s.basis = w.basis();
  s.f = f;
  s.grad_norm = gnorm;
  s.type = classify(w, tol);
  const KahlerSpectrum spec = kahler_spectrum(w, tol);
  s.min_angle = spec.angles.empty() ? 0.0 : spec.angles.front();
  s.residual = is_J_compatible(w, tol).residual;
  return s;
}

}  // namespace

FlowTrajectory flow_run(const Subspace& start, const FlowConfig& cfg) {
  if (!(cfg.step > 0.0) || !(cfg.grad_tol > 0.0) || cfg.max_steps <= 0 || !(cfg.shrink > 0.0) ||
      !(cfg.shrink < 1.0) || cfg.record_every <= 0 || cfg.grow_after <= 0 || !(cfg.max_step > 0.0))
    throw Error(ErrorKind::InvalidArgument, "flow configuration values must be positive");

  FlowTrajectory traj{{}, start, false, 0, 0};
  Subspace current = start;
  double f = energy(current);
  double gnorm = riemannian_gradient(current).matrix.norm();
  double t = 0.0;
  double h = std::min(cfg.step, cfg.max_step);
  int streak = 0;
  traj.samples.push_back(make_sample(0, t, current, f, gnorm, cfg.tol));

  // Rejections are bounded too, so a stalled step size cannot loop forever.
  const long max_iterations = 4 * cfg.max_steps + 64;
  for (long iter = 0; iter < max_iterations && traj.steps < cfg.max_steps; ++iter) {
    if (gnorm < cfg.grad_tol) break;
    StepResult step = flow_step(current, h);
    const double next_gnorm = riemannian_gradient(step.next).matrix.norm();
    // Below the roundoff floor of f the energy cannot rank the two points,
    // so the gradient norm decides.
    const double noise = 1e-14 * std::max(1.0, std::abs(f));
    const double change = step.f_after - f;
    const bool accept = change < -noise || (std::abs(change) <= noise && next_gnorm < gnorm);
    if (!accept) {
      ++traj.rejected;
      streak = 0;
      h *= cfg.shrink;
      if (h < 1e-14) break;
      continue;
    }
    current = std::move(step.next);
    f = step.f_after;
    gnorm = next_gnorm;
    t += h;
    ++traj.steps;
    if (++streak >= cfg.grow_after) {
      h = std::min(2.0 * h, cfg.max_step);
      streak = 0;
    }
    if (traj.steps % cfg.record_every == 0)
      traj.samples.push_back(make_sample(traj.steps, t, current, f, gnorm, cfg.tol));
  }
  traj.converged = gnorm < cfg.grad_tol;
  if (traj.samples.back().step != traj.steps)
    traj.samples.push_back(make_sample(traj.steps, t, current, f, gnorm, cfg.tol));
  traj.limit = current;
  return traj;
}

void validate_trajectory(const FlowTrajectory& traj) {
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    const FlowSample& prev = traj.samples[i - 1];
    const FlowSample& cur = traj.samples[i];
    if (cur.f > prev.f + 1e-12)
      throw Error(ErrorKind::InvalidArgument,
                  "energy increased at step " + std::to_string(cur.step));
    if (!(cur.type == prev.type))
      throw Error(ErrorKind::InvalidArgument,
                  "type signature changed at step " + std::to_string(cur.step));
  }
}

EnergyBounds energy_bounds(const TypeSignature& sig) {
  const int k = sig.k(), n = sig.n();
  return EnergyBounds{static_cast<double>(sig.n0), static_cast<double>(std::min(k, 2 * n - k)),
                      sig.nplus > std::max(0, k - n)};
}

EnergyBounds energy_bounds(const TypeSignature& sig, int k, int n) {
  if (!is_consistent(sig, n) || sig.k() != k)
    throw Error(ErrorKind::InconsistentSignature, "signature does not match (k, n)");
  return energy_bounds(sig);
}

StabilizerDimensions stabilizer_dimensions(const TypeSignature& sig) {
  StabilizerDimensions d;
  const int n0 = sig.n0, np = sig.nplus, nm = sig.nminus;
  d.dim_H = 2 * n0 * (np + nm) + n0 * (n0 + 1) / 2;
  d.dim_Levi = n0 * n0 + np * (2 * np + 1) + nm * (2 * nm + 1);
  d.dim_total = d.dim_H + d.dim_Levi;
  d.dim_unitary_stab = n0 * (n0 - 1) / 2 + np * np + nm * nm;
  return d;
}

int stabilizer_dimension_oracle(const Subspace& w, const Tolerances& tol) {
  const int dim = w.space().dim();
  const Mat& j = w.space().J();
  const Mat& p = w.projection();
  const Mat perp = Mat::Identity(dim, dim) - p;
  const int unknowns = dim * dim;

  Mat system(2 * unknowns, unknowns);
  for (int c = 0; c < unknowns; ++c) {
    Mat xi = Mat::Zero(dim, dim);
    xi(c % dim, c / dim) = 1.0;
    const Mat sym = xi * j + j * xi.transpose();
    const Mat stab = perp * xi * p;
    system.col(c) << sym.reshaped(), stab.reshaped();
  }
  const Vec sigma = system.jacobiSvd().singularValues();
  const double cut = tol.rank_tol * sigma(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cut / tol.unstable_factor && sigma(i) < cut * tol.unstable_factor)
      throw Error(ErrorKind::ClassificationUnstable,
                  "stabilizer system has a singular value near the rank cut");
    if (sigma(i) > cut) ++rank;
  }
  return unknowns - rank;
}

}  // namespace symflow
