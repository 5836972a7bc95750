#pragma once

#include "kcayley/boundary.hpp"
#include "kcayley/kasparov.hpp"
#include "kcayley/pairing.hpp"

#include <map>
#include <string>
#include <vector>

namespace kc {

// Hopping block at offset m couples cell i to cell i+m; bloch(k) = Σ_m H_m e^{ikm}.
struct TightBindingModel {
  std::string name;
  Eigen::Index cell_dim = 0;
  std::map<int, Mat> hoppings;
  std::optional<Mat> cell_grading;
  std::optional<Mat> cell_real;  // S with h^r = S·conj(h)·S* cellwise
  std::optional<Mat> cell_base;  // base OSU e for chiral models
  bool trs = false, phs = false, chiral = false;
  std::map<std::string, double> params;

  Check hermiticity(const Tolerance& tol = {}) const;
  SymmetryData symmetry(int L) const;
};

Mat bloch(const TightBindingModel& m, double k);
Mat ring_matrix(const TightBindingModel& m, int L);
Mat open_chain(const TightBindingModel& m, int L);

TightBindingModel ssh_model(double t1, double t2);
TightBindingModel kitaev_chain(double mu, double t, double delta);
// w defaults to L/4.
HalfSpaceModel halfspace(const TightBindingModel& m, int L, int w = -1);

struct CircleTriple {
  Mat D;                   // diag(k), k = -N..N
  Mat u;                   // e^{-iθ}: (u f)_k = f_{k+1}
  std::vector<bool> edge;  // rows where the truncated shift fails to be isometric
  int N = 0;
};

// sign = -1 gives u = e^{-iθ}, sign = +1 gives e^{+iθ}.
CircleTriple circle_spectral_triple(int N, int sign = -1);

struct CotOperator {
  Mat D;          // forward difference d/dθ - cot(θ/2) on θ_j = jh, j = 1..M-1, Dirichlet at 2π
  Mat D_adj;      // -d/dθ - cot(θ/2), backward difference, Dirichlet at 0
  Vec candidate;  // sin²(θ_j/2)
  RVec theta;
  double h = 0;
  double candidate_residual = 0;  // |D·candidate| / |candidate|
};

CotOperator cot_product_operator(int M);

// Samples of u(x) = -exp(-2i·arctan x) at x = cutoff·tan(s/2), s = -π + 2πj/n.
UnitaryLoop real_line_generator(int n, double cutoff = 1.0);
std::vector<double> real_line_points(int n, double cutoff = 1.0);

struct BottSample {
  double x = 0, y = 0;
  Mat T;  // offdiag(x - iy, x + iy), grading σ3
};

std::vector<BottSample> bott_plane(int n, double R);

// Determinant-phase loop k ↦ Π₊ e h̄(k) Π₊ over an nk-point grid.
UnitaryLoop chiral_loop(const TightBindingModel& m, int nk, const Tolerance& tol = {});

}  // namespace kc
