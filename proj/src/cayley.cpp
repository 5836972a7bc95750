#include "kcayley/cayley.hpp"

#include <algorithm>

namespace kc {

namespace {

Mat solve_right(const Mat& A, const Mat& B) {
  // A·B^{-1}
  return B.transpose().partialPivLu().solve(A.transpose()).transpose();
}

void require_hermitian(const Mat& T, const char* op, const Tolerance& tol) {
  auto h = is_hermitian(T, Tolerance{tol.eq_tol * std::max(1.0, maxabs(T))});
  if (!h.ok) throw Error(ErrorKind::Structural, std::string(op) + ": input not Hermitian", h.residual);
}

}  // namespace

Mat cayley(const Mat& T, const Tolerance& tol, CayleyDiagnostics* diag) {
  require_hermitian(T, "cayley", tol);
  Mat Id = eye(T.rows());
  Mat Tm = T - I * Id;
  Mat C = solve_right(T + I * Id, Tm);
  if (diag) {
    Mat inv = Tm.partialPivLu().solve(Id);
    diag->identity_residual = maxabs(C - Id - 2.0 * I * inv);
    diag->unitary_residual = is_unitary(C, tol).residual;
  }
  return C;
}

RestrictedOperator cayley_inv(const Mat& V, const Tolerance& tol, CayleyDiagnostics* diag) {
  auto u = is_unitary(V, tol);
  if (!u.ok) throw Error(ErrorKind::Structural, "cayley_inv: input not unitary", u.residual);
  Mat Id = eye(V.rows());
  Mat Vm = V - Id;
  RestrictedOperator r;
  r.Q = range_basis(Vm, tol);
  r.empty = r.Q.cols() == 0;
  if (r.empty) {
    r.op = Mat(0, 0);
    return r;
  }
  Mat amb = I * (V + Id) * pinv(Vm, tol);
  r.op = r.compress(amb);
  if (diag) {
    diag->hermitian_residual = r.hermitian_residual();
    Mat k = eye(r.rank());
    Mat Vc = r.compress(V);
    Mat lhs = k + r.op * r.op;
    Mat VmC = Vc - k;
    Mat rhs = 4.0 * (VmC * VmC.adjoint()).partialPivLu().solve(k);
    diag->identity_residual = maxabs(lhs - rhs);
  }
  return r;
}

static void check_admissible(const Mat& T, const Osu& e, const Tolerance& tol) {
  double scale = std::max(1.0, maxabs(T));
  require_hermitian(T, "graded_cayley", tol);
  double ac = maxabs(T * e.U + e.U * T);
  if (!(ac < tol.eq_tol * scale))
    throw Error(ErrorKind::Precondition,
                "graded_cayley: T does not anti-commute with e (residual " + std::to_string(ac) +
                    "); apply perturbation_average first",
                ac);
  double od = maxabs(e.grading.G * T * e.grading.G + T);
  if (!(od < tol.eq_tol * scale))
    throw Error(ErrorKind::Parity, "graded_cayley: T is not odd (residual " + std::to_string(od) + ")", od);
}

Osu graded_cayley(const Mat& T, const Osu& e, const Tolerance& tol, CayleyDiagnostics* diag) {
  check_admissible(T, e, tol);
  Mat Tm = T - e.U;
  Mat C = e.U * solve_right(T + e.U, Tm);
  std::optional<RealStructure> real;
  CayleyDiagnostics d;
  if (e.real) {
    d.real_checked = true;
    d.real_residual = maxabs(e.real->apply(T) - T);
    d.real_compatible = d.real_residual < tol.eq_tol * std::max(1.0, maxabs(T));
    if (d.real_compatible) real = e.real;
  }
  Osu out{C, e.grading, real};
  auto chk = check_osu(out, tol);
  if (!chk.pass)
    throw Error(ErrorKind::Verification, "graded_cayley: output fails OSU axioms: " + chk.failing(tol.eq_tol),
                chk.worst());
  if (diag) {
    Mat inv = Tm.partialPivLu().solve(eye(T.rows()));
    d.identity_residual = maxabs(C - e.U - 2.0 * inv);
    d.hermitian_residual = chk.hermitian;
    d.anticommutator_residual = maxabs(T * e.U + e.U * T);
    *diag = d;
  }
  return out;
}

RestrictedOperator graded_cayley_inv(const Osu& U, const Osu& e, const Tolerance& tol, CayleyDiagnostics* diag) {
  auto cu = check_osu(U, tol);
  auto ce = check_osu(e, tol);
  if (!cu.pass || !ce.pass)
    throw Error(ErrorKind::Precondition, "graded_cayley_inv: inputs must be OSUs (" + cu.failing(tol.eq_tol) +
                                             (ce.pass ? "" : "; base: " + ce.failing(tol.eq_tol)) + ")");
  if (U.dim() != e.dim()) throw Error(ErrorKind::Composition, "graded_cayley_inv: dimension mismatch");
  Mat D = U.U - e.U;
  RestrictedOperator r;
  r.Q = range_basis(D, tol);
  r.empty = r.Q.cols() == 0;
  if (r.empty) {
    r.op = Mat(0, 0);
    return r;
  }
  Mat amb = e.U * (U.U + e.U) * pinv(D, tol);
  r.op = r.compress(amb);
  if (diag) {
    Mat k = eye(r.rank());
    Mat Dc = r.compress(D);
    Mat ec = r.compress(e.U);
    diag->hermitian_residual = r.hermitian_residual();
    diag->anticommutator_residual = maxabs(r.op * ec + ec * r.op);
    Mat Dinv = Dc.partialPivLu().solve(k);
    diag->identity_residual = maxabs(k + r.op * r.op - 4.0 * Dinv * Dinv);
    if (e.real) {
      diag->real_checked = true;
      Mat a = r.ambient();
      diag->real_residual = maxabs(e.real->apply(a) - a);
      diag->real_compatible = diag->real_residual < tol.eq_tol * std::max(1.0, maxabs(a));
    }
  }
  return r;
}

Mat skew_cayley(const Mat& Tp, const Tolerance& tol) {
  double sk = maxabs(Tp + Tp.adjoint());
  if (!(sk < tol.eq_tol * std::max(1.0, maxabs(Tp))))
    throw Error(ErrorKind::Structural, "skew_cayley: input not skew-Hermitian", sk);
  Mat Id = eye(Tp.rows());
  return solve_right(Tp + Id, Tp - Id);
}

Mat skew_cayley_inv(const Mat& U, const Tolerance& tol) {
  auto u = is_unitary(U, tol);
  if (!u.ok) throw Error(ErrorKind::Structural, "skew_cayley_inv: input not unitary", u.residual);
  Mat Id = eye(U.rows());
  Mat Um = U - Id;
  if (kernel_dim(Um, tol) > 0)
    throw Error(ErrorKind::Singularity, "skew_cayley_inv: 1 lies in the spectrum of U");
  return solve_right(U + Id, Um);
}

}  // namespace kc
