#include "kcayley/boundary.hpp"

#include "kcayley/clifford.hpp"
#include "kcayley/vandaele.hpp"

#include <cmath>

namespace kc {

namespace {

constexpr double kPoleWindow = 1e-12;

Mat sign_of(const Mat& H, const Tolerance& tol) {
  return mat_func_hermitian(H, [](double v) { return v > 0 ? 1.0 : -1.0; }, {0.0}, tol);
}

void require_odd_hermitian(const Mat& x, const Grading& g, const char* op, const Tolerance& tol) {
  double scale = std::max(1.0, maxabs(x));
  double herm = maxabs(x - x.adjoint());
  double odd = maxabs(g.G * x * g.G + x);
  if (herm > tol.eq_tol * scale || odd > tol.eq_tol * scale)
    throw Error(ErrorKind::Structural, std::string(op) + ": lift must be odd and Hermitian", std::max(herm, odd));
}

void require_contraction(const Mat& x, const char* op, const Tolerance& tol) {
  double n = opnorm(x);
  if (n > 1 + tol.eq_tol) throw Error(ErrorKind::Normalization, std::string(op) + ": |x| exceeds 1", n);
}

}  // namespace

Mat HalfSpaceModel::left_indicator() const {
  Mat P = Mat::Zero(dim(), dim());
  for (Eigen::Index i = 0; i < dim(); ++i)
    if (cell_of(i) < L / 2) P(i, i) = 1.0;
  return P;
}

BoolMat edge_mask(int L, Eigen::Index cell_dim, int w) {
  Eigen::Index n = L * cell_dim;
  std::vector<bool> edge(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    int c = static_cast<int>(i / cell_dim);
    edge[static_cast<size_t>(i)] = c < w || c >= L - w;
  }
  BoolMat m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = edge[static_cast<size_t>(i)] || edge[static_cast<size_t>(j)];
  return m;
}

double leakage(const Mat& M, const BoolMat& mask) {
  if (mask.rows() == 0 || M.rows() % mask.rows() != 0)
    throw Error(ErrorKind::Composition, "leakage: matrix size is not a multiple of the mask size");
  Eigen::Index inner = M.rows() / mask.rows();
  double worst = 0;
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j)
      if (!mask(i / inner, j / inner)) worst = std::max(worst, std::abs(M(i, j)));
  return worst;
}

std::vector<double> leakage_profile(const Mat& M, int L, Eigen::Index cell_dim, Eigen::Index inner) {
  Eigen::Index rows = cell_dim * inner;
  if (M.rows() != L * rows) throw Error(ErrorKind::Composition, "leakage_profile: size mismatch");
  std::vector<double> prof(static_cast<size_t>(L), 0.0);
  for (int c = 0; c < L; ++c) prof[static_cast<size_t>(c)] = M.middleRows(c * rows, rows).cwiseAbs().maxCoeff();
  return prof;
}

std::pair<double, double> bulk_gap(const std::function<Mat(double)>& bulk, int nk) {
  double best = INFINITY, at = 0;
  for (int j = 0; j < nk; ++j) {
    double k = 2 * M_PI * j / nk;
    double g = eig_hermitian(bulk(k)).values.cwiseAbs().minCoeff();
    if (g < best) {
      best = g;
      at = k;
    }
  }
  return {best, at};
}

GapLift lift_flattened(const HalfSpaceModel& m, double delta, double margin, const Tolerance& tol) {
  if (delta <= 0) throw Error(ErrorKind::Domain, "lift_flattened: delta must be positive");
  auto [gap, k] = bulk_gap(m.bulk);
  if (gap < delta * (1 - 1e-9))
    throw Error(ErrorKind::Gapless, "lift_flattened: bulk gap " + std::to_string(gap) + " below delta at k = " +
                                        std::to_string(k),
                gap);
  GapLift out;
  out.delta = delta;
  out.t_delta = M_PI / delta;
  out.margin = margin;
  auto ev = eig_hermitian(m.halfspace, tol);
  Eigen::Index n = ev.values.size();
  RVec f(n);
  std::vector<Eigen::Index> in;
  for (Eigen::Index i = 0; i < n; ++i) {
    double E = ev.values(i);
    f(i) = std::abs(E) < delta ? E / delta : (E > 0 ? 1.0 : -1.0);
    if (std::abs(E) < delta * (1 - margin)) {
      in.push_back(i);
      out.in_gap.push_back(E);
    }
  }
  out.a = ev.vectors * f.cast<cplx>().asDiagonal() * ev.vectors.adjoint();
  Mat W(n, in.size());
  for (size_t j = 0; j < in.size(); ++j) W.col(j) = ev.vectors.col(in[j]);
  out.P_delta = W * W.adjoint();
  out.leakage = leakage(out.a - sign_of(m.ring, tol), m.ideal_mask);
  return out;
}

Mat vd_base(const Grading& g) { return graded_tensor(eye(g.dim()), g, sigma1(), cl1_grading()); }

Osu vd_boundary(const Mat& x, const Grading& g, const std::optional<RealStructure>& r, const Tolerance& tol) {
  require_odd_hermitian(x, g, "vd_boundary", tol);
  require_contraction(x, "vd_boundary", tol);
  Mat X = graded_tensor(x, g, sigma1(), cl1_grading());
  Mat H = -I * X;
  H = 0.5 * (H + H.adjoint());
  Mat E = mat_func_hermitian_c(H, [](double v) { return std::exp(I * (M_PI * v)); }, {}, tol);
  Mat Y = -E * vd_base(g);
  std::optional<RealStructure> rt;
  if (r) rt = tensor(*r, RealStructure::conjugation(2));
  return make_osu(Y, tensor(g, cl1_grading()), rt, tol);
}

FiniteKasparovCycle boundary_cycle_unbounded(const Mat& x, const Grading& g, const BoolMat* mask,
                                             const Tolerance& tol, BoundaryDiagnostics* diag) {
  require_odd_hermitian(x, g, "boundary_cycle_unbounded", tol);
  require_contraction(x, "boundary_cycle_unbounded", tol);
  Mat xs = 0.5 * (x + x.adjoint());
  auto ev = eig_hermitian(xs, tol);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < ev.values.size(); ++i) {
    double d = std::abs(1.0 - std::abs(ev.values(i)));
    if (d <= kPoleWindow) continue;
    if (d < tol.kernel_tol)
      throw Error(ErrorKind::Singularity,
                  "boundary_cycle_unbounded: eigenvalue " + std::to_string(ev.values(i)) + " at a tan pole",
                  ev.values(i));
    keep.push_back(i);
  }
  FiniteKasparovCycle c;
  Eigen::Index m = static_cast<Eigen::Index>(keep.size());
  c.Q = Mat(x.rows(), m);
  RVec lam(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    c.Q.col(j) = ev.vectors.col(keep[static_cast<size_t>(j)]);
    lam(j) = ev.values(keep[static_cast<size_t>(j)]);
  }
  RVec t = lam.unaryExpr([](double v) { return std::tan(M_PI * v / 2); });
  c.op = t.cast<cplx>().asDiagonal();
  c.grading = compress(g, c.Q);
  c.ambient_grading = g;
  c.degenerate = m == 0;
  if (c.degenerate) c.note = "empty module";
  if (diag) {
    BoundaryDiagnostics d;
    if (m > 0) {
      Mat xm = lam.cast<cplx>().asDiagonal();
      Grading gm = c.grading;
      Mat Xm = graded_tensor(xm, gm, sigma1(), cl1_grading());
      Mat Hm = -I * Xm;
      Hm = 0.5 * (Hm + Hm.adjoint());
      Mat tanH = mat_func_hermitian(Hm, [](double v) { return std::tan(M_PI * v / 2); }, {1.0, -1.0}, tol);
      Mat lhs = -vd_base(gm) * (I * tanH);
      d.tanh_residual = maxabs(lhs - kron(c.op, eye(2)));
    }
    if (mask && m > 0) {
      double in = 0;
      for (Eigen::Index i = 0; i < c.Q.rows(); ++i)
        if ((*mask)(i, i)) in += c.Q.row(i).squaredNorm();
      d.ideal_weight = in / static_cast<double>(m);
    }
    *diag = d;
  }
  return c;
}

FiniteKasparovCycle boundary_cycle_bounded(const Mat& x, const Grading& g, const Tolerance& tol,
                                           BoundaryDiagnostics* diag) {
  require_odd_hermitian(x, g, "boundary_cycle_bounded", tol);
  require_contraction(x, "boundary_cycle_bounded", tol);
  FiniteKasparovCycle c;
  c.Q = eye(x.rows());
  c.op = x;
  c.grading = g;
  c.ambient_grading = g;
  if (diag) {
    Mat xs = 0.5 * (x + x.adjoint());
    Mat B = mat_func_hermitian(xs, [](double v) { return std::sin(M_PI * v / 2); }, {}, tol);
    double worst = 0;
    for (int i = 0; i <= 16; ++i) {
      double s = i / 16.0;
      Mat F = (1 - s) * x + s * B;
      worst = std::max({worst, maxabs(F - F.adjoint()), maxabs(g.G * F * g.G + F),
                        std::max(0.0, opnorm(F) - 1.0)});
    }
    BoundaryDiagnostics d;
    d.homotopy_residual = worst;
    *diag = d;
  }
  return c;
}

EdgeInvariants edge_invariants(const HalfSpaceModel& m, std::optional<double> delta, double margin,
                               const Tolerance& tol) {
  EdgeInvariants out;
  out.margin = margin;
  out.delta = delta ? *delta : bulk_gap(m.bulk).first;
  if (out.delta <= tol.kernel_tol) throw Error(ErrorKind::Gapless, "edge_invariants: bulk is gapless", out.delta);
  auto ev = eig_hermitian(m.halfspace, tol);
  std::vector<Eigen::Index> in;
  for (Eigen::Index i = 0; i < ev.values.size(); ++i)
    if (std::abs(ev.values(i)) < out.delta * (1 - margin)) {
      in.push_back(i);
      out.in_gap.push_back(ev.values(i));
    }
  out.p_delta_rank = static_cast<int>(in.size());
  if (m.grading) {
    out.chiral = true;
    Mat W(m.dim(), in.size());
    for (size_t j = 0; j < in.size(); ++j) W.col(j) = ev.vectors.col(in[j]);
    Mat left = m.left_indicator();
    Mat GW = m.grading->G * W;
    auto tr = [&](const Mat& chi) { return static_cast<int>(std::lround((W.adjoint() * chi * GW).trace().real())); };
    out.signed_left = tr(left);
    out.signed_right = tr(eye(m.dim()) - left);
    out.signed_total = tr(eye(m.dim()));
  }
  return out;
}

CycleEdgeCount cycle_edge_count(const FiniteKasparovCycle& c, const Grading& ambient, const Mat& left,
                                double threshold) {
  CycleEdgeCount out;
  if (c.dim() == 0) return out;
  Mat T = 0.5 * (c.op + c.op.adjoint());
  auto ev = eig_hermitian(T);
  std::vector<Eigen::Index> small;
  for (Eigen::Index i = 0; i < ev.values.size(); ++i)
    if (std::abs(ev.values(i)) < threshold) small.push_back(i);
  out.small = static_cast<int>(small.size());
  Mat W(c.Q.rows(), small.size());
  for (size_t j = 0; j < small.size(); ++j) W.col(j) = c.Q * ev.vectors.col(small[j]);
  Mat GW = ambient.G * W;
  auto tr = [&](const Mat& chi) { return static_cast<int>(std::lround((W.adjoint() * chi * GW).trace().real())); };
  out.left = tr(left);
  out.right = tr(eye(left.rows()) - left);
  out.total = tr(eye(left.rows()));
  return out;
}

FiniteKasparovCycle boundary_from_cycle(const FiniteKasparovCycle& cycle, const LiftRule& lift, const Grading& g,
                                        const BoolMat* mask, const Tolerance& tol, BoundaryDiagnostics* diag) {
  DkClass mod = kk_to_dk(cycle, tol);
  Mat bulk = embed_in_ambient(mod, cycle).x().U;
  Mat x = lift(bulk);
  if (x.rows() != g.dim()) throw Error(ErrorKind::Structural, "boundary_from_cycle: lift has the wrong size");
  require_odd_hermitian(x, g, "boundary_from_cycle", tol);
  return boundary_cycle_unbounded(0.5 * (x + x.adjoint()), g, mask, tol, diag);
}

}  // namespace kc
