#include "kcayley/kasparov.hpp"

#include "kcayley/cayley.hpp"
#include "kcayley/clifford.hpp"

#include <cmath>

namespace kc {

namespace {

double scaled(const Mat& h) { return std::max(1.0, maxabs(h)); }

Mat basis_plus(const Grading& g, const Tolerance& tol) { return kernel_basis(g.G - eye(g.dim()), tol); }
Mat basis_minus(const Grading& g, const Tolerance& tol) { return kernel_basis(g.G + eye(g.dim()), tol); }

void verify_flags(const Mat& h, const SymmetryData& s, const Tolerance& tol) {
  if ((s.trs || s.phs) && !s.real)
    throw Error(ErrorKind::Precondition, "symmetry: TRS/PHS declared without a real structure");
  if (s.chiral && !s.grading) throw Error(ErrorKind::Precondition, "symmetry: chiral declared without a grading");
  auto r = symmetry_residuals(h, s);
  double lim = tol.eq_tol * scaled(h);
  if (s.trs && r.trs >= lim) throw Error(ErrorKind::Verification, "symmetry: TRS declared but h^r != h", r.trs);
  if (s.phs && r.phs >= lim) throw Error(ErrorKind::Verification, "symmetry: PHS declared but h^r != -h", r.phs);
  if (s.chiral && r.chiral >= lim)
    throw Error(ErrorKind::Verification, "symmetry: chiral declared but h is not odd", r.chiral);
}

}  // namespace

CycleDiagnostics check_cycle(const FiniteKasparovCycle& c, const Tolerance& tol) {
  CycleDiagnostics d;
  if (c.dim() == 0) {
    d.pass = true;
    return d;
  }
  const Mat& T = c.op;
  d.op_hermitian = maxabs(T - T.adjoint());
  d.op_odd = maxabs(c.grading.G * T * c.grading.G + T);
  for (const auto& g : c.left_gens) {
    d.anticommutator = std::max(d.anticommutator, maxabs(T * g + g * T));
    bool herm = maxabs(g - g.adjoint()) < tol.eq_tol;
    Mat sq = g * g + (herm ? Mat(-eye(g.rows())) : eye(g.rows()));
    d.generator_square = std::max(d.generator_square, maxabs(sq));
  }
  double lim = tol.eq_tol * scaled(T);
  d.pass = d.op_hermitian < lim && d.op_odd < lim && d.anticommutator < lim && d.generator_square < tol.eq_tol;
  return d;
}

FiniteKasparovCycle direct_sum(const FiniteKasparovCycle& a, const FiniteKasparovCycle& b) {
  if (a.left_gens.size() != b.left_gens.size())
    throw Error(ErrorKind::Composition, "cycle direct sum: different numbers of left generators");
  FiniteKasparovCycle c;
  c.Q = direct_sum(a.Q, b.Q);
  c.op = direct_sum(a.op, b.op);
  c.grading = direct_sum(a.grading, b.grading);
  for (size_t i = 0; i < a.left_gens.size(); ++i) c.left_gens.push_back(direct_sum(a.left_gens[i], b.left_gens[i]));
  if (a.real && b.real) c.real = direct_sum(*a.real, *b.real);
  if (a.ambient_base.size() && b.ambient_base.size()) c.ambient_base = direct_sum(a.ambient_base, b.ambient_base);
  if (a.ambient_grading.dim() && b.ambient_grading.dim())
    c.ambient_grading = direct_sum(a.ambient_grading, b.ambient_grading);
  c.degenerate = a.degenerate && b.degenerate;
  return c;
}

SymmetryResiduals symmetry_residuals(const Mat& h, const SymmetryData& s) {
  SymmetryResiduals r;
  if (s.real) {
    Mat hr = s.real->apply(h);
    r.trs = maxabs(hr - h);
    r.phs = maxabs(hr + h);
  }
  if (s.grading) r.chiral = maxabs(s.grading->G * h * s.grading->G + h);
  return r;
}

Insulator flatten(const Mat& h, std::optional<double> delta_hint, const SymmetryData& sym, const Tolerance& tol) {
  auto ev = eig_hermitian(h, tol);
  Eigen::Index k;
  double gap = ev.values.cwiseAbs().minCoeff(&k);
  if (gap <= tol.kernel_tol)
    throw Error(ErrorKind::Gapless, "flatten: eigenvalue " + std::to_string(ev.values(k)) + " inside the gap window",
                ev.values(k));
  verify_flags(h, sym, tol);
  Insulator ins;
  ins.h = h;
  ins.gap = gap;
  RVec s = ev.values.unaryExpr([](double v) { return v > 0 ? 1.0 : -1.0; });
  ins.flattened = ev.vectors * s.cast<cplx>().asDiagonal() * ev.vectors.adjoint();
  ins.symmetry = sym;
  ins.residuals = symmetry_residuals(h, sym);
  ins.flattened_residuals = symmetry_residuals(ins.flattened, sym);
  if (delta_hint) ins.hint_consistent = gap >= *delta_hint * (1 - 1e-9);
  return ins;
}

GraphProjection graph_projection(const Mat& T, const Grading& g, const Tolerance& tol) {
  double even_part = maxabs(g.G * T * g.G + T) / 2;
  if (even_part > tol.eq_tol * scaled(T)) throw Error(ErrorKind::Parity, "graph_projection: T must be odd", even_part);
  auto h = is_hermitian(T, Tolerance{tol.eq_tol * scaled(T)});
  if (!h.ok) throw Error(ErrorKind::Structural, "graph_projection: T must be Hermitian", h.residual);
  GraphProjection out;
  out.Bp = basis_plus(g, tol);
  out.Bm = basis_minus(g, tol);
  Eigen::Index np = out.Bp.cols(), nm = out.Bm.cols();
  out.T_plus = out.Bm.adjoint() * T * out.Bp;
  const Mat& Tp = out.T_plus;
  Mat Kp = (eye(np) + Tp.adjoint() * Tp).inverse();
  Mat Km = (eye(nm) + Tp * Tp.adjoint()).inverse();
  Mat Pb = block2(Kp, Kp * Tp.adjoint(), Tp * Kp, eye(nm) - Km);
  Mat B(g.dim(), np + nm);
  B << out.Bp, out.Bm;
  out.P = B * Pb * B.adjoint();
  out.P = 0.5 * (out.P + out.P.adjoint());
  Mat root = mat_func_hermitian(eye(np) + Tp.adjoint() * Tp, [](double v) { return 1.0 / std::sqrt(v); }, {}, tol);
  Mat row(np, np + nm);
  row << eye(np), Tp.adjoint();
  out.v_plus = root * row * B.adjoint();
  out.compact_defect = opnorm(out.P - out.Bm * out.Bm.adjoint());
  return out;
}

Mat bott_projector(double x, double y) {
  double r2 = x * x + y * y;
  Mat P(2, 2);
  P << 1.0, cplx(x, -y), cplx(x, y), r2;
  return P / (1 + r2);
}

SymmetryClass detect_symmetry_class(const Mat& h, const SymmetryData& s, const Osu* e, const Tolerance& tol) {
  verify_flags(h, s, tol);
  if (s.trs && s.phs && maxabs(h) > tol.eq_tol)
    throw Error(ErrorKind::Verification, "symmetry: TRS and PHS with one real structure force h = 0");
  if (!s.trs && !s.phs) {
    if (s.chiral) return {"AIII", "K_1 of the even corner, via u_h"};
    return {"A", "K_0, class of the Fermi projection"};
  }
  if (!s.chiral) {
    if (s.trs) return {"TRS", "KO_0, class of the Fermi projection"};
    return {"PHS", "KO_2, via h_flat ⊗ (1,-1) against iJ ⊗ (1,-1)"};
  }
  if (!e) throw Error(ErrorKind::Precondition, "symmetry: real chiral classes need the base OSU e");
  const RealStructure& r = *s.real;
  const Mat& G = s.grading->G;
  double lim = tol.eq_tol * scaled(h);
  bool real_grading = maxabs(r.apply(G) - G) < tol.eq_tol;
  bool imag_grading = maxabs(r.apply(G) + G) < tol.eq_tol;
  auto ev = eig_hermitian(h, tol);
  RVec sg = ev.values.unaryExpr([](double v) { return v > 0 ? 1.0 : -1.0; });
  Mat eh = e->U * ev.vectors * sg.cast<cplx>().asDiagonal() * ev.vectors.adjoint();
  Mat ehr = r.apply(eh);
  bool eh_real = maxabs(ehr - eh) < lim;
  bool eh_imag = maxabs(ehr + eh) < lim;
  if (real_grading && eh_real) return {"chiral/real-grading/real", "KO_1, via u_h"};
  if (real_grading && eh_imag) return {"chiral/real-grading/imaginary", "KO_1, via i u_h"};
  if (imag_grading && eh_real) return {"chiral/imaginary-grading/real", "KO_-1, via u_h with Ad_e∘r"};
  if (imag_grading && eh_imag) return {"chiral/imaginary-grading/imaginary", "KO_3, via v_h = u_h ⊗ σ1"};
  throw Error(ErrorKind::Verification, "symmetry: grading or e·h_flat is neither real nor imaginary");
}

Mat chiral_reduction(const Insulator& ins, const Grading& g, const Osu& e, const Tolerance& tol) {
  if (!ins.symmetry.chiral) throw Error(ErrorKind::Precondition, "chiral_reduction: insulator has no chiral flag");
  Mat Bp = basis_plus(g, tol);
  Mat u = Bp.adjoint() * e.U * ins.flattened * Bp;
  auto c = is_unitary(u, tol);
  if (!c.ok) throw Error(ErrorKind::Verification, "chiral_reduction: u_h is not unitary", c.residual);
  return u;
}

FiniteKasparovCycle unitary_cycle(const Mat& u, const Tolerance& tol) {
  auto ci = cayley_inv(u, tol);
  FiniteKasparovCycle c;
  Eigen::Index m = ci.rank();
  c.Q = kron(ci.Q, eye(2));
  c.op = m ? kron(ci.op, sigma1()) : Mat(0, 0);
  c.grading = Grading::inner(kron(eye(m), sigma3()));
  c.left_gens = {kron(eye(m), sigma2())};
  c.ambient_grading = Grading::inner(kron(eye(u.rows()), sigma3()));
  c.ambient_base = kron(eye(u.rows()), sigma2());
  c.degenerate = m == 0;
  if (c.degenerate) c.note = "empty module";
  return c;
}

BulkClass bulk_class(const Insulator& ins, const BulkOptions& opt, const Tolerance& tol) {
  const SymmetryData& s = ins.symmetry;
  BulkClass out;
  const Osu* e = opt.e ? &*opt.e : nullptr;
  out.cls = detect_symmetry_class(ins.h, s, e, tol);
  const Mat& hf = ins.flattened;
  Eigen::Index n = hf.rows();
  auto finish = [&](const DkClass& dk) {
    out.osu_residual = validate(dk, tol).worst_osu_residual;
    out.dk = dk;
    out.cycle = dk_to_kk(dk, tol);
  };

  if (!s.chiral && !s.phs) {
    Grading g = Grading::inner(kron(eye(n), sigma3()));
    std::optional<RealStructure> r;
    if (s.trs) r = tensor(*s.real, RealStructure::conjugation(2));
    Osu x = make_osu(kron(hf, sigma1()), g, r, tol);
    Osu y = make_osu(kron(eye(n), sigma1()), g, r, tol);
    finish(DkClass::of(x, y, y));
    out.fermi_projector = 0.5 * (eye(n) - hf);
    return out;
  }

  if (!s.chiral && s.phs) {
    Mat h2 = hf, J;
    RealStructure rA = *s.real;
    if (opt.J) {
      J = *opt.J;
    } else {
      h2 = kron(hf, eye(2));
      rA = tensor(rA, RealStructure::conjugation(2));
      J = kron(eye(n), Mat(-I * sigma2()));
    }
    Eigen::Index m = h2.rows();
    double jres = std::max({maxabs(J.adjoint() + J), maxabs(J * J + eye(m)), maxabs(rA.apply(J) - J)});
    if (jres > tol.eq_tol)
      throw Error(ErrorKind::Precondition, "bulk_class: PHS base point J must satisfy J* = -J, J^2 = -1, J^r = J", jres);
    Grading g = Grading::inner(kron(eye(m), sigma3()));
    RealStructure r = tensor(rA, RealStructure{sigma3(), 1});
    Osu x = make_osu(kron(h2, sigma1()), g, r, tol);
    Osu y = make_osu(kron(Mat(I * J), sigma1()), g, r, tol);
    finish(DkClass::of(x, y, y));
    return out;
  }

  if (!e) throw Error(ErrorKind::Precondition, "bulk_class: chiral classes need the base OSU e");
  const Grading& g = *s.grading;
  Mat u = chiral_reduction(ins, g, *e, tol);
  Osu x = make_osu(hf, g, std::nullopt, tol);
  Osu y{e->U, g, std::nullopt};
  out.dk = DkClass::of(x, y, y);
  out.osu_residual = validate(*out.dk, tol).worst_osu_residual;

  if (out.cls.label == "AIII") {
    out.unitary = u;
    out.cycle = dk_to_kk(*out.dk, tol);
    return out;
  }
  const RealStructure& r = *s.real;
  Mat Bp = basis_plus(g, tol);
  auto ambient = [&](const Mat& a) { return Mat(Bp * a * Bp.adjoint()); };
  auto corner = [&](const Mat& a) { return Mat(Bp.adjoint() * a * Bp); };
  auto ad_e_r = [&](const Mat& a) { return Mat(e->U * r.apply(a) * e->U); };
  if (out.cls.label == "chiral/real-grading/real") {
    out.unitary = u;
    out.reality_residual = maxabs(corner(r.apply(ambient(u))) - u);
  } else if (out.cls.label == "chiral/real-grading/imaginary") {
    out.unitary = Mat(I * u);
    out.reality_residual = maxabs(corner(r.apply(ambient(*out.unitary))) - *out.unitary);
  } else if (out.cls.label == "chiral/imaginary-grading/real") {
    out.unitary = u;
    out.reality_residual = maxabs(corner(ad_e_r(ambient(u))) - u.adjoint());
  } else {
    Mat v = kron(sigma1(), u);
    out.unitary = v;
    Mat uc = corner(ad_e_r(ambient(u)));
    Mat vt = kron(sigma1(), uc);
    Mat S = -I * sigma2();
    Mat vr = kron(S, eye(u.rows())) * vt * kron(S, eye(u.rows())).adjoint();
    out.reality_residual = maxabs(vr - v.adjoint());
  }
  out.cycle = unitary_cycle(*out.unitary, tol);
  return out;
}

}  // namespace kc
