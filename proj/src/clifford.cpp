#include "kcayley/clifford.hpp"

#include <algorithm>

namespace kc {

std::vector<Mat> CliffordAlgebra::generators() const {
  std::vector<Mat> g = e_gens;
  g.insert(g.end(), f_gens.begin(), f_gens.end());
  return g;
}

namespace {

// Places `local` on qubit `pos` of `nq`, with σ3 on earlier qubits and identity on later ones.
Mat jordan_wigner(const Mat& local, int pos, int nq) {
  Mat out = Mat::Identity(1, 1);
  for (int j = 0; j < nq; ++j) out = kron(out, j < pos ? sigma3() : j == pos ? local : eye(2));
  return out;
}

}  // namespace

CliffordAlgebra build_clifford(int p, int q) {
  if (p < 0 || q < 0) throw Error(ErrorKind::InvalidInput, "build_clifford: negative signature");
  if (p + q > 12) throw Error(ErrorKind::Capacity, "build_clifford: p+q exceeds 12");
  int nq = std::max(p, q);
  CliffordAlgebra c;
  c.p = p;
  c.q = q;
  Mat f_local = -I * sigma2();
  for (int j = 0; j < p; ++j) c.e_gens.push_back(jordan_wigner(sigma1(), j, nq));
  for (int j = 0; j < q; ++j) c.f_gens.push_back(jordan_wigner(f_local, j, nq));
  Mat G = Mat::Identity(1, 1);
  for (int j = 0; j < nq; ++j) G = kron(G, sigma3());
  c.grading = Grading::inner(G);
  c.real_structure = RealStructure::conjugation(G.rows());
  return c;
}

CliffordReport verify_clifford(const CliffordAlgebra& c, double tol) {
  double r = 0;
  Mat Id = eye(c.rep_dim());
  const Mat& G = c.grading.G;
  auto upd = [&](double v) { r = std::max(r, v); };
  for (const auto& e : c.e_gens) {
    upd(maxabs(e - e.adjoint()));
    upd(maxabs(e * e - Id));
    upd(maxabs(G * e * G + e));
    upd(maxabs(c.real_structure.apply(e) - e));
  }
  for (const auto& f : c.f_gens) {
    upd(maxabs(f + f.adjoint()));
    upd(maxabs(f * f + Id));
    upd(maxabs(G * f * G + f));
    upd(maxabs(c.real_structure.apply(f) - f));
  }
  auto g = c.generators();
  for (size_t i = 0; i < g.size(); ++i)
    for (size_t j = i + 1; j < g.size(); ++j) upd(maxabs(g[i] * g[j] + g[j] * g[i]));
  upd(maxabs(G * G - Id));
  return {r, r < tol};
}

Mat orientation_element(const CliffordAlgebra& c) {
  if (c.p + c.q < 1) throw Error(ErrorKind::Domain, "orientation_element: empty algebra");
  Mat w = eye(c.rep_dim());
  for (const auto& g : c.generators()) w = w * g;
  return w;
}

Mat graded_tensor(const Mat& a, const Grading& ga, const Mat& b, const Grading& gb, bool decompose,
                  const Tolerance& tol) {
  if (!decompose) {
    parity(a, ga, tol);
    int pb = parity(b, gb, tol);
    return kron(pb ? Mat(a * ga.G) : a, b);
  }
  auto [b0, b1] = parity_decompose(b, gb);
  return kron(a, b0) + kron(a * ga.G, b1);
}

Grading cl1_grading() { return Grading::inner(sigma3()); }
Mat cl1_rho() { return sigma1(); }

Mat eta_basis(const Mat& b, int k, const Grading& g, const Tolerance& tol) {
  int pb = parity(b, g, tol);
  Mat left = (k % 2) ? Mat(b * g.G) : b;
  Mat right = ((k + pb) % 2) ? cl1_rho() : eye(2);
  return kron(left, right);
}

Mat eta(const Mat& embedded, const Grading& g) {
  Mat W = kron(g.pi_plus(), eye(2)) + kron(g.pi_minus(), cl1_rho());
  return W * embedded * W.adjoint();
}

}  // namespace kc
