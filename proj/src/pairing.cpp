#include "kcayley/pairing.hpp"

#include "kcayley/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kc {

namespace {

int negatives(const Mat& H, const Tolerance& tol) {
  auto ev = eig_hermitian(H, tol);
  return static_cast<int>((ev.values.array() < 0).count());
}

double min_abs_eig(const Mat& H, const Tolerance& tol) {
  return eig_hermitian(H, tol).values.cwiseAbs().minCoeff();
}

Mat restrict_indices(const Mat& M, const std::vector<Eigen::Index>& J) {
  Mat R(J.size(), J.size());
  for (size_t a = 0; a < J.size(); ++a)
    for (size_t b = 0; b < J.size(); ++b) R(a, b) = M(J[a], J[b]);
  return R;
}

// Number of directions of span(A) (embedded centrally) that persist in span(B) with overlap > 0.9.
int stable_count(const Mat& A, const Mat& B) {
  if (A.cols() == 0 || B.cols() == 0) return 0;
  Eigen::Index off = (B.rows() - A.rows()) / 2;
  Mat E = Mat::Zero(B.rows(), A.cols());
  E.middleRows(off, A.rows()) = A;
  RVec s = svd(B.adjoint() * E).s;
  return static_cast<int>((s.array() > 0.9).count());
}

struct NearKernel {
  Mat right, left;
};

NearKernel near_kernel(const Mat& B, double near_tol) {
  Svd d = svd(B);
  double cut = near_tol * std::max(1.0, d.s.size() ? d.s(0) : 0.0);
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < d.s.size(); ++i)
    if (d.s(i) < cut) idx.push_back(i);
  NearKernel k{Mat(B.cols(), idx.size()), Mat(B.rows(), idx.size())};
  for (size_t j = 0; j < idx.size(); ++j) {
    k.right.col(j) = d.V.col(idx[j]);
    k.left.col(j) = d.U.col(idx[j]);
  }
  return k;
}

Mat index_operator(const Mat& u, const Mat& D) {
  Mat Id = eye(u.rows());
  return I * (u + Id) + I * D * (u - Id);
}

double edge_mass(const Vec& v, const RVec& theta) {
  double total = v.squaredNorm(), edge = 0;
  for (Eigen::Index j = 0; j < v.size(); ++j)
    if (theta(j) < 0.05 * 2 * M_PI || theta(j) > 0.95 * 2 * M_PI) edge += std::norm(v(j));
  return total > 0 ? edge / total : 0.0;
}

void sf_bisect(const std::function<Mat(double)>& f, double a, double b, const Mat& Ha, const Mat& Hb, int na, int nb,
               int depth, int max_depth, const Tolerance& tol, SpectralFlow& out) {
  int d = na - nb;
  bool ambiguous = std::abs(d) > 1;
  if (!ambiguous && d == 0) {
    // A zero touch within the step is possible only if some eigenvalue moved farther than its distance to 0.
    auto ea = eig_hermitian(Ha, tol), eb = eig_hermitian(Hb, tol);
    RVec step = (ea.values - eb.values).cwiseAbs();
    for (Eigen::Index i = 0; i < step.size(); ++i)
      if (step(i) > std::min(std::abs(ea.values(i)), std::abs(eb.values(i))) && ea.values(i) * eb.values(i) > 0)
        ambiguous = depth < 6;
  }
  if (!ambiguous) {
    if (d > 0) out.up += d;
    if (d < 0) out.down -= d;
    return;
  }
  if (depth >= max_depth) {
    std::ostringstream msg;
    msg << "spectral_flow: unresolved crossing in [" << a << ", " << b << "]";
    throw Error(ErrorKind::Refinement, msg.str());
  }
  ++out.refinements;
  double m = 0.5 * (a + b);
  Mat Hm = f(m);
  int nm = negatives(Hm, tol);
  sf_bisect(f, a, m, Ha, Hm, na, nm, depth + 1, max_depth, tol, out);
  sf_bisect(f, m, b, Hm, Hb, nm, nb, depth + 1, max_depth, tol, out);
}

}  // namespace

int winding_number(const UnitaryLoop& loop, const Tolerance& tol) {
  size_t n = loop.samples.size();
  if (n < 2) throw Error(ErrorKind::Domain, "winding_number: need at least two samples");
  std::vector<cplx> d(n);
  for (size_t j = 0; j < n; ++j) {
    auto c = is_unitary(loop.samples[j], tol);
    if (!c.ok) throw Error(ErrorKind::Structural, "winding_number: sample " + std::to_string(j) + " not unitary", c.residual);
    d[j] = loop.samples[j].determinant();
  }
  double total = 0;
  for (size_t j = 0; j < n; ++j) {
    double step = std::arg(d[(j + 1) % n] / d[j]);
    if (std::abs(step) > M_PI / 2) {
      std::ostringstream msg;
      msg << "winding_number: det phase step " << step << " between samples " << j << " and " << (j + 1) % n
          << " exceeds the π/2 guard";
      throw Error(ErrorKind::Refinement, msg.str(), std::abs(step));
    }
    total += step;
  }
  return static_cast<int>(std::lround(total / (2 * M_PI)));
}

int winding_number(const std::function<Mat(double)>& f, int n, int max_doublings, const Tolerance& tol) {
  for (int attempt = 0;; ++attempt, n *= 2) {
    UnitaryLoop loop;
    for (int j = 0; j < n; ++j) {
      double k = 2 * M_PI * j / n;
      loop.grid.push_back(k);
      loop.samples.push_back(f(k));
    }
    try {
      return winding_number(loop, tol);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Refinement || attempt >= max_doublings) throw;
    }
  }
}

SpectralFlow spectral_flow(const HermitianPath& path, const Tolerance& tol) {
  size_t n = path.samples.size();
  if (n < 2) throw Error(ErrorKind::Domain, "spectral_flow: need at least two samples");
  for (size_t j : {size_t{0}, n - 1})
    if (min_abs_eig(path.samples[j], tol) < tol.kernel_tol)
      throw Error(ErrorKind::Singularity, "spectral_flow: degenerate endpoint");
  SpectralFlow out;
  int prev = negatives(path.samples[0], tol);
  for (size_t j = 1; j < n; ++j) {
    int cur = negatives(path.samples[j], tol);
    int d = prev - cur;
    if (std::abs(d) > 1) {
      std::ostringstream msg;
      msg << "spectral_flow: " << std::abs(d) << " eigenvalues cross between samples " << j - 1 << " and " << j;
      throw Error(ErrorKind::Refinement, msg.str());
    }
    if (d > 0) ++out.up;
    if (d < 0) ++out.down;
    prev = cur;
  }
  out.value = out.up - out.down;
  return out;
}

SpectralFlow spectral_flow(const std::function<Mat(double)>& f, int n, int max_depth, const Tolerance& tol) {
  if (n < 1) throw Error(ErrorKind::Domain, "spectral_flow: need at least one step");
  Mat H0 = f(0.0), H1 = f(1.0);
  if (min_abs_eig(H0, tol) < tol.kernel_tol || min_abs_eig(H1, tol) < tol.kernel_tol)
    throw Error(ErrorKind::Singularity, "spectral_flow: degenerate endpoint");
  SpectralFlow out;
  Mat Ha = H0;
  int na = negatives(Ha, tol);
  for (int j = 1; j <= n; ++j) {
    double a = static_cast<double>(j - 1) / n, b = static_cast<double>(j) / n;
    Mat Hb = j == n ? H1 : f(b);
    int nb = negatives(Hb, tol);
    sf_bisect(f, a, b, Ha, Hb, na, nb, 0, max_depth, tol, out);
    Ha = Hb;
    na = nb;
  }
  out.value = out.up - out.down;
  return out;
}

std::vector<Eigen::Index> interior_indices(const Mat& u, double tol) {
  Mat uu = u * u.adjoint();
  std::vector<Eigen::Index> J;
  for (Eigen::Index i = 0; i < u.rows(); ++i)
    if (std::abs(uu(i, i) - 1.0) < tol) J.push_back(i);
  return J;
}

SfIndex index_pairing_sf(const Mat& u, const Mat& D, const Tolerance& tol) {
  auto ev = eig_hermitian(D, tol);
  double largest_negative = -INFINITY;
  for (Eigen::Index i = 0; i < ev.values.size(); ++i)
    if (ev.values(i) < -tol.kernel_tol) largest_negative = std::max(largest_negative, ev.values(i));
  SfIndex r;
  r.shift = std::isinf(largest_negative) ? 0.5 : -0.5 * largest_negative;
  Mat Ds = D + r.shift * eye(D.rows());
  Mat Dt = u * Ds * u.adjoint();
  auto J = interior_indices(u);
  r.interior = static_cast<Eigen::Index>(J.size());
  Mat A = restrict_indices(Ds, J), B = restrict_indices(Dt, J);
  A = 0.5 * (A + A.adjoint());
  B = 0.5 * (B + B.adjoint());
  r.value = spectral_flow([&](double t) { return Mat((1 - t) * A + t * B); }, 16, 30, tol).value;
  return r;
}

KernelIndex index_pairing_kernel(const PairFamily& fam, int N, double near_tol) {
  auto [u1, D1] = fam(N);
  auto [u2, D2] = fam(2 * N);
  NearKernel k1 = near_kernel(index_operator(u1, D1), near_tol);
  NearKernel k2 = near_kernel(index_operator(u2, D2), near_tol);
  KernelIndex r;
  r.raw_kernel = static_cast<int>(k1.right.cols());
  r.raw_cokernel = static_cast<int>(k1.left.cols());
  r.kernel = stable_count(k1.right, k2.right);
  r.cokernel = stable_count(k1.left, k2.left);
  return r;
}

IndexPairing index_pairing(const PairFamily& fam, int N, const Tolerance& tol) {
  auto [u, D] = fam(N);
  IndexPairing r;
  r.sf = index_pairing_sf(u, D, tol).value;
  r.kernel = index_pairing_kernel(fam, N);
  r.agree = r.sf == r.kernel.value();
  if (!r.agree) {
    std::ostringstream msg;
    msg << "index_pairing: spectral flow gives " << r.sf << " but the kernel method gives " << r.kernel.value();
    throw Error(ErrorKind::Inconsistency, msg.str());
  }
  r.value = r.sf;
  return r;
}

ProductRep kasparov_product_rep(const Mat& u, const Mat& D, const Tolerance& tol) {
  auto cu = is_unitary(u, tol);
  if (!cu.ok) throw Error(ErrorKind::Structural, "kasparov_product_rep: u not unitary", cu.residual);
  ProductRep r;
  r.commutator_norm = opnorm(D * u - u * D);
  if (r.commutator_norm >= 2.0) {
    std::ostringstream msg;
    msg << "kasparov_product_rep: |[D,u]| = " << r.commutator_norm << " is not below 2; rescale D";
    throw Error(ErrorKind::Precondition, msg.str(), r.commutator_norm);
  }
  auto ci = cayley_inv(u, tol);
  Eigen::Index m = ci.rank();
  Mat Dt = ci.compress(D);
  Mat X = kron(sigma1(), ci.op);
  Mat Y = kron(sigma2(), Dt);
  FiniteKasparovCycle& c = r.cycle;
  c.Q = kron(eye(2), ci.Q);
  c.op = X + Y;
  c.grading = Grading::inner(kron(sigma3(), eye(m)));
  c.ambient_grading = Grading::inner(kron(sigma3(), eye(u.rows())));
  c.degenerate = m == 0;
  r.hermitian_residual = maxabs(c.op - c.op.adjoint());
  if (m == 0) return r;
  Mat A = X * c.op + c.op * X;
  A = 0.5 * (A + A.adjoint());
  r.anticommutator_min = eig_hermitian(A, tol).values.minCoeff();
  r.positivity_min = 0.5 * (r.anticommutator_min + 2.0);
  return r;
}

Vec approx_unit_closed_form(int n, const RVec& theta) {
  Vec out(theta.size());
  double inv = 1.0 / n;
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    double t = theta(j);
    double rho = 2 - 2 * std::cos(t);
    double one_minus_v = inv / (rho + inv);
    cplx ph = std::exp(I * (t / 2));
    double bracket = std::sin(t) / (1 - std::cos(t) + 0.5 * inv) - std::cos(t / 2) / std::sin(t / 2);
    out(j) = 2 * one_minus_v * bracket * ph * std::sin(t / 2) + 2 * one_minus_v * ph * std::cos(t / 2);
  }
  return out;
}

Vec approx_unit_direct(int n, const RVec& theta) {
  Vec out(theta.size());
  double inv = 1.0 / n;
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    double t = theta(j);
    double rho = 2 - 2 * std::cos(t);
    double dv = inv * 2 * std::sin(t) / ((rho + inv) * (rho + inv));
    out(j) = -I * dv * (std::exp(I * t) - 1.0);
  }
  return out;
}

ApproxUnitReport approx_unit_check(const std::vector<int>& n_values, int grid) {
  if (grid < 16) throw Error(ErrorKind::Domain, "approx_unit_check: grid too coarse");
  RVec theta(grid - 1);
  double h = 2 * M_PI / grid;
  for (int j = 0; j < grid - 1; ++j) theta(j) = (j + 1) * h;
  std::vector<std::pair<std::string, std::function<cplx(double)>>> vecs = {
      {"constant", [](double) { return cplx(1.0); }},
      {"smooth", [](double t) { return cplx(1.0 + 0.5 * std::sin(t)); }},
      {"bump-away-from-0", [](double t) { return cplx(std::exp(-4.0 * (t - M_PI) * (t - M_PI))); }},
  };
  ApproxUnitReport r;
  r.n_values = n_values;
  for (const auto& [name, f] : vecs) {
    r.vectors.push_back(name);
    std::vector<double> norms;
    for (int n : n_values) {
      Vec E = approx_unit_closed_form(n, theta);
      double s = 0;
      for (Eigen::Index j = 0; j < theta.size(); ++j) s += std::norm(E(j) * f(theta(j)));
      norms.push_back(std::sqrt(s * h));
    }
    bool dec = true;
    for (size_t i = 1; i < norms.size(); ++i) dec = dec && norms[i] < norms[i - 1];
    r.norms.push_back(norms);
    r.decreasing.push_back(dec);
  }
  return r;
}

int family_winding(const std::vector<Mat>& xs, const Grading& g, const Tolerance& tol) {
  Mat Bp = kernel_basis(g.G - eye(g.dim()), tol);
  Mat Bm = kernel_basis(g.G + eye(g.dim()), tol);
  if (Bp.cols() != Bm.cols()) throw Error(ErrorKind::Structural, "family_winding: grading is not balanced");
  UnitaryLoop loop;
  for (size_t j = 0; j < xs.size(); ++j) {
    loop.samples.push_back(Bm.adjoint() * xs[j] * Bp);
    loop.grid.push_back(2 * M_PI * j / xs.size());
  }
  return winding_number(loop, tol);
}

int signature_invariant(const DkClass& c, const Mat& coeff, const Tolerance& tol) {
  Mat x = c.x().U, y = c.y().U;
  if (x.rows() != coeff.rows() || y.rows() != coeff.rows())
    throw Error(ErrorKind::Composition, "signature_invariant: size mismatch");
  double comm = std::max(maxabs(x * coeff - coeff * x), maxabs(y * coeff - coeff * y));
  if (comm > tol.eq_tol)
    throw Error(ErrorKind::Precondition, "signature_invariant: representatives must commute with the coefficient", comm);
  auto sig = [&](const Mat& M) {
    Mat H = 0.5 * (M + M.adjoint());
    auto ev = eig_hermitian(H, tol);
    return static_cast<int>((ev.values.array() > 0).count()) - static_cast<int>((ev.values.array() < 0).count());
  };
  int d = sig(y * coeff) - sig(x * coeff);
  if (d % 4 != 0) throw Error(ErrorKind::Inconsistency, "signature_invariant: signature difference not divisible by 4");
  return d / 4;
}

CotIndexReport cot_index_report(const std::vector<int>& M) {
  if (M.size() < 2) throw Error(ErrorKind::Domain, "cot_index_report: need at least two resolutions");
  CotIndexReport r;
  r.M = M;
  std::vector<RVec> tail_s;
  for (int m : M) {
    CotOperator c = cot_product_operator(m);
    Svd d = svd(c.D);
    Eigen::Index last = d.s.size() - 1;
    r.smin.push_back(d.s(last));
    r.second.push_back(d.s(last - 1));
    r.kernel_edge_mass.push_back(edge_mass(d.V.col(last), c.theta));
    r.adj_edge_mass.push_back(edge_mass(d.U.col(last), c.theta));
    r.adj_smin.push_back(svd(c.D_adj).s(last));
    r.candidate_residual.push_back(c.candidate_residual);
  }
  bool decays = true, second_bounded = true;
  for (size_t i = 1; i < M.size(); ++i) {
    decays = decays && r.smin[i] < 0.5 * r.smin[i - 1];
    second_bounded = second_bounded && r.second[i] > 0.5 * r.second[i - 1];
  }
  if (decays && second_bounded) {
    r.kernel_dim = r.kernel_edge_mass.back() < 0.1 ? 1 : 0;
    r.cokernel_dim = r.adj_edge_mass.back() < 0.1 ? 1 : 0;
  }
  return r;
}

}  // namespace kc
