#pragma once

#include "kcayley/cycle.hpp"
#include "kcayley/graded.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace kc {

using BoolMat = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

// Open chain of L cells obtained by Toeplitz compression of a translation-invariant bulk.
struct HalfSpaceModel {
  std::function<Mat(double)> bulk;  // Bloch symbol k ↦ h(k)
  Mat ring;                         // periodic bulk matrix on the same L cells
  Mat halfspace;                    // h̃
  BoolMat ideal_mask;               // entries touching a cell within w of either edge
  int L = 0;
  int w = 0;
  Eigen::Index cell_dim = 0;
  std::optional<Grading> grading;
  std::optional<RealStructure> real;

  Eigen::Index dim() const { return halfspace.rows(); }
  int cell_of(Eigen::Index i) const { return static_cast<int>(i / cell_dim); }
  // Real-space indicator of the left half (cells < L/2).
  Mat left_indicator() const;
};

BoolMat edge_mask(int L, Eigen::Index cell_dim, int w);
// Largest |M_ij| over entries outside the mask.
double leakage(const Mat& M, const BoolMat& mask);
// For each cell, the largest |M_ij| over rows in that cell, for a matrix of size L·cell_dim·inner.
std::vector<double> leakage_profile(const Mat& M, int L, Eigen::Index cell_dim, Eigen::Index inner = 1);

// Smallest |eigenvalue| of the Bloch symbol over an nk-point grid, with the minimizing k.
std::pair<double, double> bulk_gap(const std::function<Mat(double)>& bulk, int nk = 256);

struct GapLift {
  Mat a;               // ã
  double delta = 0;
  double t_delta = 0;  // π/δ
  Mat P_delta;         // in-gap projection, |E| < δ(1 - margin)
  double margin = 0.05;
  double leakage = 0;  // ã against the flattened ring outside the ideal mask
  std::vector<double> in_gap;
};

GapLift lift_flattened(const HalfSpaceModel& m, double delta, double margin = 0.05, const Tolerance& tol = {});

// Y = -exp(π x̃⊗̂ρ)(1⊗̂ρ) over the graded tensor with Cl₁ (ρ = σ1, grading σ3).
Osu vd_boundary(const Mat& x, const Grading& g, const std::optional<RealStructure>& r = std::nullopt,
                const Tolerance& tol = {});
// The base point 1⊗̂ρ of the boundary map.
Mat vd_base(const Grading& g);

struct BoundaryDiagnostics {
  double tanh_residual = 0;  // |-(1⊗̂ρ)tanh(π x̃⊗̂ρ/2) - tan(π x̃/2)⊗1| on the module
  double ideal_weight = 1;   // fraction of module weight inside the ideal mask rows
  double homotopy_residual = 0;
};

// (C, range cos(π x̃/2), tan(π x̃/2)); eigenvalues within 1e-12 of ±1 are outside the module.
FiniteKasparovCycle boundary_cycle_unbounded(const Mat& x, const Grading& g, const BoolMat* mask = nullptr,
                                             const Tolerance& tol = {}, BoundaryDiagnostics* diag = nullptr);
// (C, I^n, x̃) together with the 16-step straight-line homotopy to sin(π x̃/2).
FiniteKasparovCycle boundary_cycle_bounded(const Mat& x, const Grading& g, const Tolerance& tol = {},
                                           BoundaryDiagnostics* diag = nullptr);

struct EdgeInvariants {
  std::vector<double> in_gap;
  int p_delta_rank = 0;
  bool chiral = false;
  int signed_left = 0;   // dim ker∩X₊ - dim ker∩X₋ restricted to the left half
  int signed_right = 0;
  int signed_total = 0;
  double margin = 0.05;
  double delta = 0;
};

EdgeInvariants edge_invariants(const HalfSpaceModel& m, std::optional<double> delta = std::nullopt,
                               double margin = 0.05, const Tolerance& tol = {});

struct CycleEdgeCount {
  int left = 0, right = 0, total = 0;
  int small = 0;  // eigenvalues of the operator below the threshold
};

// Signed counts of operator eigenvectors with |λ| < threshold, split by the left/right indicator.
CycleEdgeCount cycle_edge_count(const FiniteKasparovCycle& c, const Grading& ambient, const Mat& left,
                                double threshold);

using LiftRule = std::function<Mat(const Mat& bulk_osu)>;

// Cayley transform of a normalized cycle, lifted by `lift`, then sent through boundary_cycle_unbounded.
FiniteKasparovCycle boundary_from_cycle(const FiniteKasparovCycle& cycle, const LiftRule& lift, const Grading& g,
                                        const BoolMat* mask = nullptr, const Tolerance& tol = {},
                                        BoundaryDiagnostics* diag = nullptr);

}  // namespace kc
