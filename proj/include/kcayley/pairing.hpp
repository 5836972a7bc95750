#pragma once

#include "kcayley/cayley.hpp"
#include "kcayley/cycle.hpp"
#include "kcayley/vandaele.hpp"

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace kc {

struct UnitaryLoop {
  std::vector<Mat> samples;
  std::vector<double> grid;  // sorted angles in [0, 2π)
};

struct HermitianPath {
  std::vector<Mat> samples;
  std::vector<double> grid;  // sorted parameters in [0, 1]
};

// (1/2π)·accumulated phase of det u(k) around the closed loop; det steps must stay below π.
int winding_number(const UnitaryLoop& loop, const Tolerance& tol = {});
// Samples f on an n-point grid, doubling n until the step guard holds (at most `max_doublings` times).
int winding_number(const std::function<Mat(double)>& f, int n = 64, int max_doublings = 8,
                   const Tolerance& tol = {});

struct SpectralFlow {
  int value = 0;
  int up = 0, down = 0;  // individual crossings
  int refinements = 0;
};

// Signed zero crossings of sorted eigenvalue curves; a step whose negative count jumps by more than one
// is a refinement error.
SpectralFlow spectral_flow(const HermitianPath& path, const Tolerance& tol = {});
// Bisects offending steps of t ↦ f(t) on [0,1] until every step changes the negative count by at most one.
SpectralFlow spectral_flow(const std::function<Mat(double)>& f, int n = 32, int max_depth = 20,
                           const Tolerance& tol = {});

// Rows where u is isometric (|(uu*)_ii - 1| small); edge rows of truncated shifts fail this.
std::vector<Eigen::Index> interior_indices(const Mat& u, double tol = 1e-9);

struct SfIndex {
  int value = 0;
  double shift = 0;  // D is shifted by this amount, keeping its nonnegative spectral projection
  Eigen::Index interior = 0;
};

// Spectral flow of the linear path D → uDu* compressed to the interior indices.
SfIndex index_pairing_sf(const Mat& u, const Mat& D, const Tolerance& tol = {});

struct KernelIndex {
  int kernel = 0, cokernel = 0;
  int raw_kernel = 0, raw_cokernel = 0;  // near-kernel counts at the coarse resolution
  int value() const { return kernel - cokernel; }
};

using PairFamily = std::function<std::pair<Mat, Mat>(int N)>;

// Near-kernel vectors of B = i(u+1) + iD(u-1) ≅ (Ci(u)+iD)(u-1) and of B*, kept only when they persist
// (overlap > 0.9 under centered embedding) between truncations N and 2N.
KernelIndex index_pairing_kernel(const PairFamily& fam, int N, double near_tol = 1e-6);

struct IndexPairing {
  int sf = 0;
  KernelIndex kernel;
  bool agree = false;
  int value = 0;
};

// Both methods at truncation N; disagreement is an inconsistency error carrying both values.
IndexPairing index_pairing(const PairFamily& fam, int N, const Tolerance& tol = {});

struct ProductRep {
  FiniteKasparovCycle cycle;  // doubled module over range(u-1), operator offdiag(Ci - iD̃, Ci + iD̃)
  double commutator_norm = 0;
  double positivity_min = 0;     // min eig of ({X, X+Y} + 2)/2 with X = Ci⊗σ1, Y = D̃⊗σ2
  double anticommutator_min = 0; // min eig of {X, X+Y}
  double hermitian_residual = 0;
};

ProductRep kasparov_product_rep(const Mat& u, const Mat& D, const Tolerance& tol = {});

struct ApproxUnitReport {
  std::vector<int> n_values;
  std::vector<std::string> vectors;
  std::vector<std::vector<double>> norms;  // norms[vector][n index]
  std::vector<bool> decreasing;
};

// E_n(θ) = 2(1-v_n)(sin θ/(1-cos θ+1/2n) - cot(θ/2)) e^{iθ/2} sin(θ/2) + 2(1-v_n) e^{iθ/2} cos(θ/2), as written.
Vec approx_unit_closed_form(int n, const RVec& theta);
// [1/i d/dθ, v_n](z-1) = -i v_n'(θ)(z-1), evaluated exactly.
Vec approx_unit_direct(int n, const RVec& theta);
ApproxUnitReport approx_unit_check(const std::vector<int>& n_values, int grid = 4096);

// Winding of the odd block Π₋ x Π₊ (in bases of the grading eigenspaces) along a family of OSUs.
int family_winding(const std::vector<Mat>& xs, const Grading& g, const Tolerance& tol = {});

// Rank-type invariant (sig(y c) - sig(x c))/4 for classes commuting with a coefficient generator c.
int signature_invariant(const DkClass& c, const Mat& coeff, const Tolerance& tol = {});

struct CotIndexReport {
  std::vector<int> M;
  std::vector<double> smin, second, adj_smin, adj_edge_mass, kernel_edge_mass, candidate_residual;
  int kernel_dim = 0, cokernel_dim = 0;
  int index() const { return kernel_dim - cokernel_dim; }
};

// Classifies singular values of the cot operator and its adjoint across the resolutions in M:
// a direction counts when its singular value decays (ratio < 0.5 per doubling) and its vector keeps
// less than 10% of its weight within 5% of the endpoints.
CotIndexReport cot_index_report(const std::vector<int>& M);

}  // namespace kc
