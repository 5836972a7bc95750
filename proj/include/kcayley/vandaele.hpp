#pragma once

#include "kcayley/cayley.hpp"
#include "kcayley/cycle.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kc {

// Formal difference [x] - [y] of direct sums of OSUs.
struct DkClass {
  std::vector<Osu> x_reps;
  std::vector<Osu> y_reps;
  std::optional<Osu> base_point;

  Osu x() const { return direct_sum(x_reps); }
  Osu y() const { return direct_sum(y_reps); }
  static DkClass of(const Osu& x, const Osu& y, std::optional<Osu> base = std::nullopt);
};

struct DkValidation {
  bool sizes_match = false;
  double worst_osu_residual = 0;
  bool pass = false;
};

DkValidation validate(const DkClass& c, const Tolerance& tol = {});

struct StabilizeResult {
  DkClass cls;
  int padding = 0;
  bool saturated = false;
};

// Pads the smaller side with copies of the base point until both sides have equal size, never
// exceeding `cap` total rows; `saturated` reports when the cap prevented balancing.
StabilizeResult stabilize(const DkClass& c, Eigen::Index cap = 4096);
// [x1⊕x2] - [y1⊕y2]; the base point becomes e1⊕e2 when both are present.
DkClass direct_sum(const DkClass& a, const DkClass& b);
// Adds k copies of the base point to both sides; the class is unchanged.
DkClass pad_with_base(const DkClass& c, int k);

// [x]-[y] ↦ [diag(x,y)] - [antidiag(1,1)] over A⊗̂Cl(1,1), realized by the Γ-twist embedding.
DkClass ubiquitous_iso(const DkClass& c, const Tolerance& tol = {});
// w = (1 - y⊗̂σ1)/√2, which conjugates diag(y,y) to 1⊗̂σ1 in the twisted embedding.
Mat excision_rotation(const Mat& y, const Grading& g);

// ψ_e : A⊗̂Cl(1,1) → M_2(A) evaluated on x⊗̂c with x homogeneous and c a 2x2 element of Cl(1,1).
Mat psi_e(const Mat& x, const Mat& c, const Osu& e, const Tolerance& tol = {});
Grading psi_grading(const Osu& e);

// φ_e([x]-[y]) = [diag(x, -eye)] relative to the base point e⊕(-e).
DkClass phi_e(const DkClass& c, const Tolerance& tol = {});
Mat phi_rotation_path(const Mat& e, double t);

// Id_n⊗σ1⊗Id_c with grading Id_n⊗σ3⊗Id_c.
Osu standard_osu_Z(Eigen::Index n, Eigen::Index coeff_dim = 1);

FiniteKasparovCycle dk_to_kk(const DkClass& c, const Tolerance& tol = {});

struct KkToDkReport {
  bool averaged = false;                                // perturbation averaging was applied
  std::vector<std::pair<double, double>> norm_profile;  // (λ, |(x-y) on |T|>λ|)
};

DkClass kk_to_dk(const FiniteKasparovCycle& cycle, const Tolerance& tol = {}, KkToDkReport* report = nullptr);

// Places a class on the module back into the ambient space, padding with the ambient base OSU.
DkClass embed_in_ambient(const DkClass& module_class, const FiniteKasparovCycle& cycle);

// V(λ) = e(T+λe)(T-λe)^{-1} for λ on an n-point grid of [0,1]; requires T invertible.
std::vector<Mat> degeneracy_path(const Mat& T, const Mat& e, int n = 32);

enum class ClassEquality { EqualByPath, EqualByInvariants, Unknown };
const char* to_string(ClassEquality q);

using InvariantFn = std::function<std::map<std::string, int>(const DkClass&)>;

struct EqualityReport {
  ClassEquality result = ClassEquality::Unknown;
  std::map<std::string, int> invariants_a, invariants_b;
  int path_points = 0;
};

// Tries to exhibit an OSU path between x_a⊕y_b and x_b⊕y_a; otherwise compares invariants.
EqualityReport compare_classes(const DkClass& a, const DkClass& b, const InvariantFn& invariants = nullptr,
                               const Tolerance& tol = {});

// Sign of an odd invertible Hermitian operator, used to project straight-line paths to OSUs.
Mat osu_sign(const Mat& H, const Tolerance& tol = {});

}  // namespace kc
