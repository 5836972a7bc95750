#include "kcayley/graded.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kc {

Grading Grading::inner(const Mat& G) { return {G, false}; }
Grading Grading::none(Eigen::Index n) { return {eye(n), true}; }
Mat Grading::pi_plus() const { return 0.5 * (eye(dim()) + G); }
Mat Grading::pi_minus() const { return 0.5 * (eye(dim()) - G); }

Check Grading::verify(const Tolerance& tol) const {
  double r = std::max(maxabs(G * G - eye(dim())), maxabs(G - G.adjoint()));
  return {r < tol.eq_tol, r};
}

Grading tensor(const Grading& a, const Grading& b) { return {kron(a.G, b.G), a.trivial && b.trivial}; }
Grading direct_sum(const Grading& a, const Grading& b) {
  return {direct_sum(a.G, b.G), a.trivial && b.trivial};
}
Grading compress(const Grading& g, const Mat& Q) { return {Q.adjoint() * g.G * Q, g.trivial}; }

RealStructure RealStructure::conjugation(Eigen::Index n) { return {eye(n), 1}; }

RealStructure RealStructure::from_unitary(const Mat& S, const Tolerance& tol) {
  Mat SS = S * S.conjugate();
  int sign = SS(0, 0).real() >= 0 ? 1 : -1;
  RealStructure r{S, sign};
  auto c = r.verify(tol);
  if (!c.ok)
    throw Error(ErrorKind::Structural, "real structure: S·conj(S) is not ±1 or S not unitary", c.residual);
  return r;
}

Mat RealStructure::apply(const Mat& a) const { return S * a.conjugate() * S.adjoint(); }
Vec RealStructure::apply_vec(const Vec& v) const { return S * v.conjugate(); }

Check RealStructure::verify(const Tolerance& tol) const {
  double r = std::max(is_unitary(S, tol).residual, maxabs(S * S.conjugate() - double(sign) * eye(dim())));
  return {r < tol.eq_tol, r};
}

RealStructure tensor(const RealStructure& a, const RealStructure& b) {
  return {kron(a.S, b.S), a.sign * b.sign};
}

RealStructure direct_sum(const RealStructure& a, const RealStructure& b) {
  if (a.sign != b.sign)
    throw Error(ErrorKind::Composition, "direct sum of real structures with different signs");
  return {direct_sum(a.S, b.S), a.sign};
}

double OsuDiagnostics::worst() const {
  return std::max({hermitian, unitary, square_one, odd, has_real ? real : 0.0});
}

std::string OsuDiagnostics::failing(double eq_tol) const {
  std::ostringstream os;
  auto add = [&](const char* n, double v) {
    if (!(v < eq_tol)) os << (os.tellp() > 0 ? ", " : "") << n << "=" << v;
  };
  add("hermitian", hermitian);
  add("unitary", unitary);
  add("square_one", square_one);
  add("odd", odd);
  if (has_real) add("real", real);
  return os.str();
}

OsuDiagnostics check_osu(const Mat& U, const Grading& g, const RealStructure* r, const Tolerance& tol) {
  OsuDiagnostics d;
  if (U.rows() != U.cols() || U.rows() != g.dim()) {
    d.hermitian = d.unitary = d.square_one = d.odd = INFINITY;
    return d;
  }
  Mat Id = eye(U.rows());
  d.hermitian = maxabs(U - U.adjoint());
  d.unitary = maxabs(U * U.adjoint() - Id);
  d.square_one = maxabs(U * U - Id);
  d.odd = maxabs(g.G * U * g.G + U);
  if (r) {
    d.has_real = true;
    d.real = r->dim() == U.rows() ? maxabs(r->apply(U) - U) : INFINITY;
  }
  d.pass = d.worst() < tol.eq_tol;
  return d;
}

OsuDiagnostics check_osu(const Osu& u, const Tolerance& tol) {
  return check_osu(u.U, u.grading, u.real ? &*u.real : nullptr, tol);
}

Osu make_osu(const Mat& U, const Grading& g, std::optional<RealStructure> r, const Tolerance& tol) {
  Osu o{U, g, std::move(r)};
  auto d = check_osu(o, tol);
  if (!d.pass) throw Error(ErrorKind::Verification, "not an OSU: " + d.failing(tol.eq_tol), d.worst());
  return o;
}

std::pair<Mat, Mat> parity_decompose(const Mat& M, const Grading& g) {
  Mat conj = g.G * M * g.G;
  Mat even = 0.5 * (M + conj);
  return {even, M - even};
}

int parity(const Mat& M, const Grading& g, const Tolerance& tol) {
  auto [ev, od] = parity_decompose(M, g);
  double ne = maxabs(ev), no = maxabs(od);
  if (no < tol.eq_tol) return 0;
  if (ne < tol.eq_tol) return 1;
  throw Error(ErrorKind::Parity, "inhomogeneous element (even/odd parts " + std::to_string(ne) + "/" +
                                     std::to_string(no) + ")",
              std::min(ne, no));
}

Mat graded_commutator(const Mat& S, const Mat& T, const Grading& g, const Tolerance& tol) {
  int ps = parity(S, g, tol), pt = parity(T, g, tol);
  double sign = (ps * pt) % 2 ? -1.0 : 1.0;
  return S * T - sign * T * S;
}

Osu direct_sum(const std::vector<Osu>& osus) {
  if (osus.empty()) throw Error(ErrorKind::Composition, "direct sum of an empty list");
  Osu out = osus.front();
  for (size_t i = 1; i < osus.size(); ++i) {
    const Osu& b = osus[i];
    if (out.real.has_value() != b.real.has_value())
      throw Error(ErrorKind::Composition, "direct sum mixes real and complex OSUs");
    out.U = direct_sum(out.U, b.U);
    out.grading = direct_sum(out.grading, b.grading);
    if (out.real) out.real = direct_sum(*out.real, *b.real);
  }
  return out;
}

Osu negate(const Osu& u) { return {-u.U, u.grading, u.real}; }

Mat perturbation_average(const Mat& T, const Mat& e) { return 0.5 * (T - e * T * e); }

Mat rotation_path(const Mat& e, const Mat& U, double t) { return std::cos(t) * e + std::sin(t) * U; }

}  // namespace kc
