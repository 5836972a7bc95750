#pragma once

#include "kcayley/cycle.hpp"
#include "kcayley/vandaele.hpp"

#include <optional>
#include <string>

namespace kc {

struct SymmetryData {
  std::optional<RealStructure> real;
  std::optional<Grading> grading;
  bool trs = false;
  bool phs = false;
  bool chiral = false;
};

struct SymmetryResiduals {
  double trs = 0, phs = 0, chiral = 0;
};

struct Insulator {
  Mat h;
  double gap = 0;  // smallest |eigenvalue| of h
  Mat flattened;
  SymmetryData symmetry;
  SymmetryResiduals residuals;           // declared flags measured on h
  SymmetryResiduals flattened_residuals;  // the same flags measured on the flattened operator
  bool hint_consistent = true;
};

SymmetryResiduals symmetry_residuals(const Mat& h, const SymmetryData& s);

// h|h|^{-1} with the measured gap; δ_hint only cross-checks the measured value.
Insulator flatten(const Mat& h, std::optional<double> delta_hint = std::nullopt, const SymmetryData& sym = {},
                  const Tolerance& tol = {});

struct GraphProjection {
  Mat P;             // ambient coordinates
  Mat v_plus;        // (1+T₊*T₊)^{-1/2}[1, T₊*] : X₊⊕X₋ → X₊, ambient column coordinates
  Mat Bp, Bm;        // orthonormal bases of X₊ and X₋
  Mat T_plus;        // T₊ : X₊ → X₋ in those bases
  double compact_defect = 0;  // |P - P_{X₋}|
};

GraphProjection graph_projection(const Mat& T, const Grading& g, const Tolerance& tol = {});
Mat bott_projector(double x, double y);

struct SymmetryClass {
  std::string label;
  std::string target;
};

// e is needed only to resolve the real chiral classes.
SymmetryClass detect_symmetry_class(const Mat& h, const SymmetryData& s, const Osu* e = nullptr,
                                    const Tolerance& tol = {});

// u_h = Π₊ e h̄ Π₊ in a basis of X₊ = range(Π₊).
Mat chiral_reduction(const Insulator& ins, const Grading& g, const Osu& e, const Tolerance& tol = {});

struct BulkOptions {
  std::optional<Osu> e;       // chiral base point
  std::optional<Mat> J;       // PHS base point (real skew unitary)
};

struct BulkClass {
  SymmetryClass cls;
  std::optional<DkClass> dk;
  std::optional<FiniteKasparovCycle> cycle;
  std::optional<Mat> fermi_projector;  // (1 - h̄)/2
  std::optional<Mat> unitary;          // u_h, i·u_h or v_h in the chiral cases
  double reality_residual = 0;         // symmetry of the unitary required by the real chiral classes
  double osu_residual = 0;             // worst OSU residual over the class representatives
};

BulkClass bulk_class(const Insulator& ins, const BulkOptions& opt = {}, const Tolerance& tol = {});

// Cl₁ cycle (range(u-1)⊗C², Ci(u)⊗σ1) with grading 1⊗σ3 and left generator 1⊗σ2.
FiniteKasparovCycle unitary_cycle(const Mat& u, const Tolerance& tol = {});

}  // namespace kc
