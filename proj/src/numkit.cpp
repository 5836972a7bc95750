#include "kcayley/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace kc {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::Structural: return "structural";
    case ErrorKind::Singularity: return "singularity";
    case ErrorKind::Conditioning: return "conditioning";
    case ErrorKind::Capacity: return "capacity";
    case ErrorKind::Parity: return "parity";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Composition: return "composition";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Gapless: return "gapless";
    case ErrorKind::Refinement: return "refinement";
    case ErrorKind::Inconsistency: return "inconsistency";
    case ErrorKind::Normalization: return "normalization";
    case ErrorKind::Verification: return "verification";
    case ErrorKind::InvalidInput: return "invalid-input";
  }
  return "unknown";
}

void Tolerance::validate() const {
  if (!(eq_tol > 0 && rank_tol > 0 && kernel_tol > 0))
    throw Error(ErrorKind::InvalidInput, "tolerances must be strictly positive");
}

Mat eye(Eigen::Index n) { return Mat::Identity(n, n); }

double opnorm(const Mat& M) {
  if (M.size() == 0) return 0.0;
  Eigen::BDCSVD<Mat> s(M);
  return s.singularValues()(0);
}

double maxabs(const Mat& M) { return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff(); }

Mat dagger(const Mat& M) { return M.adjoint(); }

Mat kron(const Mat& A, const Mat& B) {
  Mat R(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      R.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return R;
}

Mat direct_sum(const Mat& A, const Mat& B) {
  Mat R = Mat::Zero(A.rows() + B.rows(), A.cols() + B.cols());
  R.topLeftCorner(A.rows(), A.cols()) = A;
  R.bottomRightCorner(B.rows(), B.cols()) = B;
  return R;
}

Mat block2(const Mat& a, const Mat& b, const Mat& c, const Mat& d) {
  Mat R(a.rows() + c.rows(), a.cols() + b.cols());
  R << a, b, c, d;
  return R;
}

Mat sigma1() {
  Mat s(2, 2);
  s << 0, 1, 1, 0;
  return s;
}

Mat sigma2() {
  Mat s(2, 2);
  s << 0, -I, I, 0;
  return s;
}

Mat sigma3() {
  Mat s(2, 2);
  s << 1, 0, 0, -1;
  return s;
}

static void require_square(const Mat& M, const char* op) {
  if (M.rows() != M.cols()) {
    std::ostringstream os;
    os << op << ": matrix is not square (" << M.rows() << "x" << M.cols() << ")";
    throw Error(ErrorKind::Structural, os.str());
  }
}

Check is_hermitian(const Mat& M, const Tolerance& tol) {
  if (M.rows() != M.cols()) return {false, INFINITY};
  double r = maxabs(M - M.adjoint());
  return {r < tol.eq_tol, r};
}

Check is_unitary(const Mat& M, const Tolerance& tol) {
  if (M.rows() != M.cols()) return {false, INFINITY};
  double r = std::max(maxabs(M * M.adjoint() - eye(M.rows())), maxabs(M.adjoint() * M - eye(M.rows())));
  return {r < tol.eq_tol, r};
}

Check is_projection(const Mat& M, const Tolerance& tol) {
  if (M.rows() != M.cols()) return {false, INFINITY};
  double r = std::max(maxabs(M * M - M), maxabs(M - M.adjoint()));
  return {r < tol.eq_tol, r};
}

HermitianEig eig_hermitian(const Mat& M, const Tolerance& tol) {
  require_square(M, "eig_hermitian");
  auto h = is_hermitian(M, Tolerance{tol.eq_tol * std::max(1.0, maxabs(M)), tol.rank_tol, tol.kernel_tol});
  if (!h.ok)
    throw Error(ErrorKind::Structural,
                "eig_hermitian: input not Hermitian (residual " + std::to_string(h.residual) + ")", h.residual);
  if (M.size() == 0) return {RVec(0), Mat(0, 0)};
  Mat S = 0.5 * (M + M.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(S);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::Conditioning, "eig_hermitian: solver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

static void check_poles(const RVec& ev, const std::vector<double>& poles, const Tolerance& tol) {
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    for (double p : poles)
      if (std::abs(ev(i) - p) < tol.kernel_tol) {
        std::ostringstream os;
        os << "matrix function: eigenvalue " << ev(i) << " within kernel_tol of singular point " << p;
        throw Error(ErrorKind::Singularity, os.str(), ev(i));
      }
}

Mat mat_func_hermitian(const Mat& M, const std::function<double(double)>& f, const std::vector<double>& poles,
                       const Tolerance& tol) {
  return mat_func_hermitian_c(M, [&](double x) { return cplx(f(x), 0.0); }, poles, tol);
}

Mat mat_func_hermitian_c(const Mat& M, const std::function<cplx(double)>& f, const std::vector<double>& poles,
                         const Tolerance& tol) {
  auto e = eig_hermitian(M, tol);
  check_poles(e.values, poles, tol);
  Vec fv(e.values.size());
  for (Eigen::Index i = 0; i < fv.size(); ++i) fv(i) = f(e.values(i));
  return e.vectors * fv.asDiagonal() * e.vectors.adjoint();
}

Svd svd(const Mat& M) {
  if (M.size() == 0) return {Mat(M.rows(), 0), RVec(0), Mat(M.cols(), 0)};
  if (M.rows() == M.cols() && maxabs(M - M.adjoint()) <= 1e-14 * std::max(1.0, maxabs(M))) {
    // Hermitian input: M = V·diag(λ)·V*, so s = |λ| and U = V·sign(λ).
    Eigen::SelfAdjointEigenSolver<Mat> es(Mat(0.5 * (M + M.adjoint())));
    const RVec& lam = es.eigenvalues();
    std::vector<Eigen::Index> order(static_cast<size_t>(lam.size()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return std::abs(lam(a)) > std::abs(lam(b)); });
    Svd out{Mat(M.rows(), M.rows()), RVec(lam.size()), Mat(M.rows(), M.rows())};
    for (size_t i = 0; i < order.size(); ++i) {
      Eigen::Index j = order[i], c = static_cast<Eigen::Index>(i);
      out.s(c) = std::abs(lam(j));
      out.V.col(c) = es.eigenvectors().col(j);
      out.U.col(c) = lam(j) < 0 ? Vec(-es.eigenvectors().col(j)) : Vec(es.eigenvectors().col(j));
    }
    return out;
  }
  Eigen::BDCSVD<Mat> s(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Svd out{s.matrixU(), s.singularValues(), s.matrixV()};
  // BDCSVD can return inaccurate or non-finite singular vectors for highly degenerate spectra; Jacobi is the fallback.
  Eigen::Index k = out.s.size();
  Mat rec = out.U.leftCols(k) * out.s.cast<cplx>().asDiagonal() * out.V.leftCols(k).adjoint();
  bool finite = out.U.allFinite() && out.V.allFinite() && out.s.allFinite();
  if (!finite || !(maxabs(rec - M) <= 1e-12 * std::max(1.0, k ? out.s(0) : 0.0))) {
    Eigen::JacobiSVD<Mat> j(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    out = {j.matrixU(), j.singularValues(), j.matrixV()};
  }
  return out;
}

Mat polar_phase(const Mat& M, const Tolerance& tol) {
  require_square(M, "polar_phase");
  auto s = svd(M);
  if (s.s.size() == 0) return M;
  double smax = s.s(0), smin = s.s(s.s.size() - 1);
  if (!(smin > tol.rank_tol * smax)) {
    std::ostringstream os;
    os << "polar_phase: near-singular input (smallest/largest singular value " << smin << "/" << smax << ")";
    throw Error(ErrorKind::Conditioning, os.str(), smin);
  }
  return s.U * s.V.adjoint();
}

int kernel_dim(const Mat& M, double kernel_tol) {
  if (M.cols() == 0) return 0;
  auto s = svd(M);
  double scale = std::max(1.0, s.s.size() ? s.s(0) : 0.0);
  int n = 0;
  for (Eigen::Index i = 0; i < s.s.size(); ++i)
    if (s.s(i) < kernel_tol * scale) ++n;
  return n + static_cast<int>(std::max<Eigen::Index>(0, M.cols() - s.s.size()));
}

int kernel_dim(const Mat& M, const Tolerance& tol) { return kernel_dim(M, tol.kernel_tol); }

int numerical_rank(const Mat& M, const Tolerance& tol) {
  if (M.size() == 0) return 0;
  auto s = svd(M);
  double scale = std::max(1.0, s.s(0));
  int r = 0;
  for (Eigen::Index i = 0; i < s.s.size(); ++i)
    if (s.s(i) > tol.rank_tol * scale) ++r;
  return r;
}

Mat range_basis(const Mat& M, const Tolerance& tol) {
  int r = numerical_rank(M, tol);
  if (r == 0) return Mat(M.rows(), 0);
  auto s = svd(M);
  return s.U.leftCols(r);
}

Mat kernel_basis(const Mat& M, const Tolerance& tol) {
  auto s = svd(M);
  double scale = std::max(1.0, s.s.size() ? s.s(0) : 0.0);
  Eigen::Index r = 0;
  while (r < s.s.size() && s.s(r) >= tol.kernel_tol * scale) ++r;
  return s.V.rightCols(M.cols() - r);
}

Mat pinv(const Mat& M, const Tolerance& tol) {
  if (M.size() == 0) return Mat(M.cols(), M.rows());
  auto s = svd(M);
  Mat R = Mat::Zero(M.cols(), M.rows());
  double scale = std::max(1.0, s.s.size() ? s.s(0) : 0.0);
  for (Eigen::Index i = 0; i < s.s.size(); ++i)
    if (s.s(i) > tol.rank_tol * scale) R += (1.0 / s.s(i)) * s.V.col(i) * s.U.col(i).adjoint();
  return R;
}

Mat projector(const Mat& Q) { return Q * Q.adjoint(); }

}  // namespace kc
