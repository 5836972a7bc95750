#pragma once

#include "kcayley/graded.hpp"

#include <cmath>
#include <random>

namespace kc::testing {

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(unsigned long long seed = 12345) : gen(seed) {}

  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen); }
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(gen); }

  Mat gaussian(Eigen::Index r, Eigen::Index c) {
    Mat M(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < c; ++j) M(i, j) = cplx(normal(), normal()) / std::sqrt(2.0);
    return M;
  }

  Mat hermitian(Eigen::Index n) {
    Mat A = gaussian(n, n);
    return 0.5 * (A + A.adjoint());
  }

  Mat unitary(Eigen::Index n) {
    Eigen::HouseholderQR<Mat> qr(gaussian(n, n));
    Mat Q = qr.householderQ();
    Mat R = qr.matrixQR();
    for (Eigen::Index j = 0; j < n; ++j) {
      cplx d = R(j, j);
      if (std::abs(d) > 0) Q.col(j) *= d / std::abs(d);
    }
    return Q;
  }

  // Unitary with every eigenvalue at angular distance ≥ gap from 1.
  Mat unitary_away_from_one(Eigen::Index n, double gap) {
    Mat W = unitary(n);
    Vec ph(n);
    for (Eigen::Index i = 0; i < n; ++i) ph(i) = std::exp(I * uniform(gap, 2 * M_PI - gap));
    return W * ph.asDiagonal() * W.adjoint();
  }
};

// Grading diag(1,..,1,-1,..,-1) with n_plus positive entries.
inline Grading block_grading(Eigen::Index n_plus, Eigen::Index n_minus) {
  Mat G = Mat::Zero(n_plus + n_minus, n_plus + n_minus);
  for (Eigen::Index i = 0; i < n_plus + n_minus; ++i) G(i, i) = i < n_plus ? 1.0 : -1.0;
  return Grading::inner(G);
}

// Odd self-adjoint unitary for a balanced block grading: offdiag(v*, v) with v unitary.
inline Mat offdiag_osu(const Mat& v) {
  Eigen::Index m = v.rows();
  Mat Z = Mat::Zero(m, m);
  Mat out(2 * m, 2 * m);
  out << Z, v.adjoint(), v, Z;
  return out;
}

inline Mat offdiag(const Mat& lower) {
  Eigen::Index m = lower.rows();
  Mat Z = Mat::Zero(m, m);
  Mat out(2 * m, 2 * m);
  out << Z, lower.adjoint(), lower, Z;
  return out;
}

}  // namespace kc::testing
