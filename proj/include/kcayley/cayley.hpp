#pragma once

#include "kcayley/graded.hpp"

namespace kc {

// An operator living on a subspace range(P) of an ambient space.
struct RestrictedOperator {
  Mat Q;        // orthonormal basis of the subspace (ambient rows × rank)
  Mat op;       // compressed operator Q*·A·Q
  bool empty = false;

  Eigen::Index ambient_dim() const { return Q.rows(); }
  Eigen::Index rank() const { return Q.cols(); }
  Mat projector() const { return Q * Q.adjoint(); }
  Mat ambient() const { return Q * op * Q.adjoint(); }
  Mat compress(const Mat& A) const { return Q.adjoint() * A * Q; }
  double hermitian_residual() const { return maxabs(op - op.adjoint()); }
};

struct CayleyDiagnostics {
  double identity_residual = 0;  // forward: |C - base - 2(T - base)^{-1}|; inverse: |1 + Ci^2 - 4(U-e)^{-2}|
  double hermitian_residual = 0;
  double unitary_residual = 0;
  double anticommutator_residual = 0;
  bool real_checked = false;
  bool real_compatible = true;
  double real_residual = 0;
};

Mat cayley(const Mat& T, const Tolerance& tol = {}, CayleyDiagnostics* diag = nullptr);
RestrictedOperator cayley_inv(const Mat& V, const Tolerance& tol = {}, CayleyDiagnostics* diag = nullptr);

Osu graded_cayley(const Mat& T, const Osu& e, const Tolerance& tol = {}, CayleyDiagnostics* diag = nullptr);
RestrictedOperator graded_cayley_inv(const Osu& U, const Osu& e, const Tolerance& tol = {},
                                     CayleyDiagnostics* diag = nullptr);

Mat skew_cayley(const Mat& Tp, const Tolerance& tol = {});
Mat skew_cayley_inv(const Mat& U, const Tolerance& tol = {});

}  // namespace kc
