#include "kcayley/vandaele.hpp"

#include "kcayley/clifford.hpp"

#include <cmath>

namespace kc {

namespace {

bool same_grading(const Grading& a, const Grading& b, double tol) {
  return a.dim() == b.dim() && maxabs(a.G - b.G) < tol;
}

Osu repeat(const Osu& e, int k) {
  std::vector<Osu> v(static_cast<size_t>(k), e);
  return direct_sum(v);
}

Osu require_base(const DkClass& c, const char* op) {
  if (!c.base_point) throw Error(ErrorKind::Precondition, std::string(op) + ": class has no base point");
  return *c.base_point;
}

// Restriction of an ambient real structure to range(Q); dropped when range(Q) is not invariant.
std::optional<RealStructure> compress_real(const std::optional<RealStructure>& r, const Mat& Q,
                                           const Tolerance& tol) {
  if (!r || Q.cols() == 0) return std::nullopt;
  Mat S = Q.adjoint() * r->S * Q.conjugate();
  RealStructure c{S, r->sign};
  if (!c.verify(tol).ok) return std::nullopt;
  return c;
}

}  // namespace

DkClass DkClass::of(const Osu& x, const Osu& y, std::optional<Osu> base) {
  return DkClass{{x}, {y}, std::move(base)};
}

DkValidation validate(const DkClass& c, const Tolerance& tol) {
  DkValidation v;
  if (c.x_reps.empty() || c.y_reps.empty()) return v;
  Eigen::Index nx = 0, ny = 0;
  for (const auto& r : c.x_reps) {
    nx += r.dim();
    v.worst_osu_residual = std::max(v.worst_osu_residual, check_osu(r, tol).worst());
  }
  for (const auto& r : c.y_reps) {
    ny += r.dim();
    v.worst_osu_residual = std::max(v.worst_osu_residual, check_osu(r, tol).worst());
  }
  v.sizes_match = nx == ny;
  v.pass = v.sizes_match && v.worst_osu_residual < tol.eq_tol;
  return v;
}

StabilizeResult stabilize(const DkClass& c, Eigen::Index cap) {
  StabilizeResult out{c, 0, false};
  Eigen::Index nx = 0, ny = 0;
  for (const auto& r : c.x_reps) nx += r.dim();
  for (const auto& r : c.y_reps) ny += r.dim();
  if (nx == ny) return out;
  Osu e = require_base(c, "stabilize");
  Eigen::Index gap = std::abs(nx - ny);
  if (gap % e.dim() != 0)
    throw Error(ErrorKind::Composition, "stabilize: size difference is not a multiple of the base point size");
  if (std::max(nx, ny) > cap) {
    out.saturated = true;
    return out;
  }
  auto& shorter = nx < ny ? out.cls.x_reps : out.cls.y_reps;
  for (; gap > 0; gap -= e.dim(), ++out.padding) shorter.push_back(e);
  return out;
}

DkClass direct_sum(const DkClass& a, const DkClass& b) {
  DkClass out = a;
  out.x_reps.insert(out.x_reps.end(), b.x_reps.begin(), b.x_reps.end());
  out.y_reps.insert(out.y_reps.end(), b.y_reps.begin(), b.y_reps.end());
  if (a.base_point && b.base_point) out.base_point = direct_sum({*a.base_point, *b.base_point});
  return out;
}

DkClass pad_with_base(const DkClass& c, int k) {
  Osu e = require_base(c, "pad_with_base");
  DkClass out = c;
  for (int i = 0; i < k; ++i) {
    out.x_reps.push_back(e);
    out.y_reps.push_back(e);
  }
  return out;
}

DkClass ubiquitous_iso(const DkClass& c, const Tolerance& tol) {
  Osu x = c.x(), y = c.y();
  if (x.dim() != y.dim()) throw Error(ErrorKind::Composition, "ubiquitous_iso: x and y differ in size");
  if (!same_grading(x.grading, y.grading, tol.eq_tol))
    throw Error(ErrorKind::Composition, "ubiquitous_iso: x and y carry different gradings");
  const Grading& g = x.grading;
  Grading cg = cl1_grading();
  Mat X = graded_tensor(Mat(0.5 * (x.U + y.U)), g, eye(2), cg) + graded_tensor(Mat(0.5 * (x.U - y.U)), g, sigma3(), cg);
  Mat Y = graded_tensor(eye(g.dim()), g, sigma1(), cg);
  Grading gt = tensor(g, cg);
  std::optional<RealStructure> r;
  if (x.real) r = tensor(*x.real, RealStructure::conjugation(2));
  Osu ox = make_osu(X, gt, r, tol);
  Osu oy = make_osu(Y, gt, r, tol);
  return DkClass::of(ox, oy, oy);
}

Mat excision_rotation(const Mat& y, const Grading& g) {
  Mat Y = graded_tensor(y, g, sigma1(), cl1_grading());
  return (eye(Y.rows()) - Y) / std::sqrt(2.0);
}

Grading psi_grading(const Osu& e) { return direct_sum(e.grading, e.grading); }

Mat psi_e(const Mat& x, const Mat& c, const Osu& e, const Tolerance& tol) {
  auto ce = check_osu(e, tol);
  if (!ce.pass) throw Error(ErrorKind::Precondition, "psi_e: base is not an OSU: " + ce.failing(tol.eq_tol));
  if (c.rows() != 2 || c.cols() != 2) throw Error(ErrorKind::Domain, "psi_e: Clifford part must be 2x2");
  if (x.rows() != e.dim() || x.cols() != e.dim()) throw Error(ErrorKind::Composition, "psi_e: size mismatch");
  int px = parity(x, e.grading, tol);
  parity(c, cl1_grading(), tol);
  const Mat& E = e.U;
  Eigen::Index n = E.rows();
  Mat Z = Mat::Zero(n, n);
  double s = px ? -1.0 : 1.0;
  Mat X1 = block2(x, Z, Z, s * E * x * E);
  Mat S1 = block2(Z, E, E, Z);
  Mat S2 = block2(Z, E, -E, Z);
  Mat S3 = block2(eye(n), Z, Z, -eye(n));
  cplx a = 0.5 * (c(0, 0) + c(1, 1)), d = 0.5 * (c(0, 0) - c(1, 1));
  cplx b = 0.5 * (c(0, 1) + c(1, 0)), g = 0.5 * (c(0, 1) - c(1, 0));
  Mat C = a * eye(2 * n) + b * S1 + g * S2 + d * S3;
  return X1 * C;
}

DkClass phi_e(const DkClass& c, const Tolerance& tol) {
  Osu e = require_base(c, "phi_e");
  Osu x = c.x(), y = c.y();
  if (x.dim() != y.dim()) throw Error(ErrorKind::Composition, "phi_e: x and y differ in size");
  if (x.dim() % e.dim() != 0) throw Error(ErrorKind::Composition, "phi_e: size is not a multiple of the base point");
  Osu eb = repeat(e, static_cast<int>(x.dim() / e.dim()));
  Grading g = direct_sum(x.grading, x.grading);
  std::optional<RealStructure> r;
  if (x.real) r = direct_sum(*x.real, *x.real);
  Osu out = make_osu(direct_sum(x.U, Mat(-eb.U * y.U * eb.U)), g, r, tol);
  Osu base = make_osu(direct_sum(e.U, Mat(-e.U)), direct_sum(e.grading, e.grading),
                      e.real ? std::optional<RealStructure>(direct_sum(*e.real, *e.real)) : std::nullopt, tol);
  Osu bb = make_osu(direct_sum(eb.U, Mat(-eb.U)), g, r, tol);
  return DkClass{{out}, {bb}, base};
}

Mat phi_rotation_path(const Mat& e, double t) {
  return block2(std::cos(t) * e, std::sin(t) * e, std::sin(t) * e, -std::cos(t) * e);
}

Osu standard_osu_Z(Eigen::Index n, Eigen::Index coeff_dim) {
  if (n < 1 || coeff_dim < 1) throw Error(ErrorKind::Domain, "standard_osu_Z: sizes must be positive");
  Mat U = kron(kron(eye(n), sigma1()), eye(coeff_dim));
  Grading g = Grading::inner(kron(kron(eye(n), sigma3()), eye(coeff_dim)));
  return make_osu(U, g, RealStructure::conjugation(U.rows()));
}

FiniteKasparovCycle dk_to_kk(const DkClass& c, const Tolerance& tol) {
  DkClass s = c.base_point ? stabilize(c).cls : c;
  Osu V = s.x(), W = s.y();
  if (V.dim() != W.dim()) throw Error(ErrorKind::Composition, "dk_to_kk: representatives differ in size");
  auto r = graded_cayley_inv(V, W, tol);
  FiniteKasparovCycle k;
  k.Q = r.Q;
  k.op = r.op;
  k.ambient_base = W.U;
  k.ambient_grading = W.grading;
  k.real = V.real;
  k.grading = compress(W.grading, r.Q);
  k.left_gens = {r.compress(W.U)};
  if (r.empty) {
    k.degenerate = true;
    k.note = "empty module";
  } else if (kernel_dim(k.op, tol) == 0) {
    k.degenerate = true;
    k.note = "invertible operator anti-commuting with the left generator";
  }
  return k;
}

DkClass kk_to_dk(const FiniteKasparovCycle& cycle, const Tolerance& tol, KkToDkReport* report) {
  if (cycle.left_gens.size() != 1)
    throw Error(ErrorKind::Precondition, "kk_to_dk: expected exactly one left generator");
  KkToDkReport rep;
  Eigen::Index n = cycle.dim();
  if (n == 0) {
    Osu z{Mat(0, 0), Grading::inner(Mat(0, 0)), std::nullopt};
    if (report) *report = rep;
    return DkClass::of(z, z);
  }
  const Mat& e = cycle.left_gens[0];
  auto real = compress_real(cycle.real, cycle.Q, tol);
  auto ce = check_osu(e, cycle.grading, real ? &*real : nullptr, tol);
  if (!ce.pass) {
    ce = check_osu(e, cycle.grading, nullptr, tol);
    real.reset();
  }
  if (!ce.pass)
    throw Error(ErrorKind::Structural, "kk_to_dk: left generator is not an OSU on the module: " + ce.failing(tol.eq_tol),
                ce.worst());
  Mat T = cycle.op;
  double scale = std::max(1.0, maxabs(T));
  if (maxabs(T * e + e * T) > tol.eq_tol * scale) {
    T = perturbation_average(T, e);
    rep.averaged = true;
    if (maxabs(T * e + e * T) > tol.eq_tol * scale)
      throw Error(ErrorKind::Structural, "kk_to_dk: normalization failed after averaging");
  }
  Osu eo{e, cycle.grading, real};
  Osu x = graded_cayley(T, eo, tol);
  auto ev = eig_hermitian(T, tol);
  Mat diff = x.U - e;
  for (double lam : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    Mat B = ev.vectors;
    for (Eigen::Index i = 0; i < n; ++i)
      if (std::abs(ev.values(i)) <= lam) B.col(i).setZero();
    rep.norm_profile.emplace_back(lam, opnorm(diff * B));
  }
  if (report) *report = rep;
  return DkClass::of(x, eo, eo);
}

DkClass embed_in_ambient(const DkClass& module_class, const FiniteKasparovCycle& cycle) {
  if (cycle.ambient_base.size() == 0)
    throw Error(ErrorKind::Precondition, "embed_in_ambient: cycle carries no ambient base OSU");
  const Mat& Q = cycle.Q;
  const Mat& W = cycle.ambient_base;
  Mat P = Q * Q.adjoint();
  Mat Wc = W - P * W * P;
  auto lift = [&](const Osu& u) {
    Mat U = Q.cols() ? Mat(Q * u.U * Q.adjoint() + Wc) : W;
    return Osu{U, cycle.ambient_grading, cycle.real};
  };
  return DkClass::of(lift(module_class.x()), lift(module_class.y()), Osu{W, cycle.ambient_grading, cycle.real});
}

std::vector<Mat> degeneracy_path(const Mat& T, const Mat& e, int n) {
  if (n < 2) throw Error(ErrorKind::Domain, "degeneracy_path: need at least two points");
  if (kernel_dim(T) > 0) throw Error(ErrorKind::Singularity, "degeneracy_path: T is not invertible");
  std::vector<Mat> path;
  for (int i = 0; i < n; ++i) {
    double lam = static_cast<double>(i) / (n - 1);
    Mat A = T + lam * e, B = T - lam * e;
    path.push_back(e * B.transpose().partialPivLu().solve(A.transpose()).transpose());
  }
  return path;
}

const char* to_string(ClassEquality q) {
  switch (q) {
    case ClassEquality::EqualByPath: return "equal-by-path";
    case ClassEquality::EqualByInvariants: return "equal-by-invariants";
    case ClassEquality::Unknown: return "unknown";
  }
  return "unknown";
}

Mat osu_sign(const Mat& H, const Tolerance& tol) {
  return mat_func_hermitian(H, [](double v) { return v > 0 ? 1.0 : -1.0; }, {0.0}, tol);
}

EqualityReport compare_classes(const DkClass& a, const DkClass& b, const InvariantFn& invariants,
                               const Tolerance& tol) {
  EqualityReport rep;
  DkClass sa = a.base_point ? stabilize(a).cls : a;
  DkClass sb = b.base_point ? stabilize(b).cls : b;
  Osu xa = sa.x(), ya = sa.y(), xb = sb.x(), yb = sb.y();
  Osu A = direct_sum({xa, yb});
  Osu B = direct_sum({xb, ya});
  if (A.dim() == B.dim() && same_grading(A.grading, B.grading, tol.eq_tol)) {
    const RealStructure* r = A.real ? &*A.real : nullptr;
    bool ok = false;
    const int n = 32;
    if (maxabs(A.U * B.U + B.U * A.U) < tol.eq_tol) {
      ok = true;
      for (int i = 0; i < n && ok; ++i)
        ok = check_osu(rotation_path(A.U, B.U, M_PI / 2 * i / (n - 1)), A.grading, r, tol).pass;
    } else if (opnorm(A.U - B.U) < 2.0 - 1e-6) {
      ok = true;
      for (int i = 0; i < n && ok; ++i) {
        double t = static_cast<double>(i) / (n - 1);
        Mat H = (1 - t) * A.U + t * B.U;
        H = 0.5 * (H + H.adjoint());
        ok = check_osu(osu_sign(H, tol), A.grading, r, tol).pass;
      }
    }
    if (ok) {
      rep.result = ClassEquality::EqualByPath;
      rep.path_points = n;
    }
  }
  if (invariants) {
    rep.invariants_a = invariants(a);
    rep.invariants_b = invariants(b);
    if (rep.result == ClassEquality::Unknown && rep.invariants_a == rep.invariants_b && !rep.invariants_a.empty())
      rep.result = ClassEquality::EqualByInvariants;
  }
  return rep;
}

}  // namespace kc
