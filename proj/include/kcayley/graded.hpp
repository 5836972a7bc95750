#pragma once

#include "kcayley/numkit.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kc {

struct Grading {
  Mat G;
  bool trivial = false;

  static Grading inner(const Mat& G);
  static Grading none(Eigen::Index n);
  Eigen::Index dim() const { return G.rows(); }
  Mat pi_plus() const;
  Mat pi_minus() const;
  Check verify(const Tolerance& tol = {}) const;
};

Grading tensor(const Grading& a, const Grading& b);
Grading direct_sum(const Grading& a, const Grading& b);
// Grading restricted to the span of orthonormal columns Q (Q must span a Γ-invariant subspace).
Grading compress(const Grading& g, const Mat& Q);

// Antiunitary a ↦ S·conj(a)·S*, with S·conj(S) = sign·1.
struct RealStructure {
  Mat S;
  int sign = 1;

  static RealStructure conjugation(Eigen::Index n);
  static RealStructure from_unitary(const Mat& S, const Tolerance& tol = {});
  Eigen::Index dim() const { return S.rows(); }
  Mat apply(const Mat& a) const;
  Vec apply_vec(const Vec& v) const;
  Check verify(const Tolerance& tol = {}) const;
};

RealStructure tensor(const RealStructure& a, const RealStructure& b);
RealStructure direct_sum(const RealStructure& a, const RealStructure& b);

struct Osu {
  Mat U;
  Grading grading;
  std::optional<RealStructure> real;

  Eigen::Index dim() const { return U.rows(); }
};

struct OsuDiagnostics {
  double hermitian = 0, unitary = 0, square_one = 0, odd = 0, real = 0;
  bool has_real = false;
  bool pass = false;

  double worst() const;
  std::string failing(double eq_tol) const;
};

OsuDiagnostics check_osu(const Mat& U, const Grading& g, const RealStructure* r = nullptr,
                         const Tolerance& tol = {});
OsuDiagnostics check_osu(const Osu& u, const Tolerance& tol = {});

// Builds an Osu and throws a verification error naming the failed axioms.
Osu make_osu(const Mat& U, const Grading& g, std::optional<RealStructure> r = std::nullopt,
             const Tolerance& tol = {});

std::pair<Mat, Mat> parity_decompose(const Mat& M, const Grading& g);
// 0 for even, 1 for odd; throws a parity error for inhomogeneous M.
int parity(const Mat& M, const Grading& g, const Tolerance& tol = {});
Mat graded_commutator(const Mat& S, const Mat& T, const Grading& g, const Tolerance& tol = {});

Osu direct_sum(const std::vector<Osu>& osus);
Osu negate(const Osu& u);
Mat perturbation_average(const Mat& T, const Mat& e);

// The path (cos t)e + (sin t)U, an OSU path whenever e and U anti-commute.
Mat rotation_path(const Mat& e, const Mat& U, double t);

}  // namespace kc
