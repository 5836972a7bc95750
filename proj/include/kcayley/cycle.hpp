#pragma once

#include "kcayley/graded.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kc {

// A finite Kasparov cycle: a module given as the span of the orthonormal columns of Q inside an
// ambient space, left Clifford generators, a grading and an odd self-adjoint operator, all
// expressed in module coordinates.
struct FiniteKasparovCycle {
  Mat Q;
  std::vector<Mat> left_gens;
  Mat op;
  Grading grading;
  std::optional<RealStructure> real;  // ambient real structure, when present
  Mat ambient_base;                   // ambient base OSU used to re-embed classes (may be empty)
  Grading ambient_grading;
  bool degenerate = false;
  std::string note;

  Eigen::Index dim() const { return Q.cols(); }
  Eigen::Index ambient_dim() const { return Q.rows(); }
  Mat projector() const { return Q * Q.adjoint(); }
  Mat ambient_op() const { return Q * op * Q.adjoint(); }
};

struct CycleDiagnostics {
  double op_hermitian = 0;
  double op_odd = 0;
  double anticommutator = 0;    // worst |T g + g T| over left generators
  double generator_square = 0;  // worst |g^2 ∓ 1| over left generators
  bool pass = false;
};

CycleDiagnostics check_cycle(const FiniteKasparovCycle& c, const Tolerance& tol = {});
FiniteKasparovCycle direct_sum(const FiniteKasparovCycle& a, const FiniteKasparovCycle& b);

}  // namespace kc
