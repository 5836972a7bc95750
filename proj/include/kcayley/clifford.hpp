#pragma once

#include "kcayley/graded.hpp"

#include <vector>

namespace kc {

struct CliffordAlgebra {
  int p = 0;
  int q = 0;
  std::vector<Mat> e_gens;
  std::vector<Mat> f_gens;
  Grading grading;
  RealStructure real_structure;

  // Dimension of the abstract algebra, 2^(p+q).
  long long dim() const { return 1LL << (p + q); }
  Eigen::Index rep_dim() const { return grading.dim(); }
  // e_1..e_p followed by f_1..f_q.
  std::vector<Mat> generators() const;
};

struct CliffordReport {
  double max_residual = 0;
  bool pass = false;
};

CliffordAlgebra build_clifford(int p, int q);
CliffordReport verify_clifford(const CliffordAlgebra& c, double tol = 1e-12);
Mat orientation_element(const CliffordAlgebra& c);

// Embedding a⊗̂b ↦ a·Γ_a^{∂b} ⊗ b of the graded tensor product into the ordinary one.
// With decompose set, inhomogeneous b is split into parity components.
Mat graded_tensor(const Mat& a, const Grading& ga, const Mat& b, const Grading& gb, bool decompose = false,
                  const Tolerance& tol = {});

// Graded isomorphism B⊗̂Cl_1 → B⊗Cl_1 for B inner-graded by Γ, with Cl_1 realized by ρ = σ1, grading σ3.
// eta_basis evaluates η(b⊗̂ρ^k) = bΓ^k ⊗ ρ^{k+|b|}; eta applies η to an embedded element.
Mat eta_basis(const Mat& b, int k, const Grading& g, const Tolerance& tol = {});
Mat eta(const Mat& embedded, const Grading& g);
Grading cl1_grading();
Mat cl1_rho();

}  // namespace kc
