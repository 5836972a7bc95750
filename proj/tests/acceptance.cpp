#include "kcayley/clifford.hpp"
#include "kcayley/models.hpp"
#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace kc;
using kc::testing::Rng;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int run(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool in_time = budget_s <= 0 || secs < budget_s;
  bool ok = o.pass && in_time;
  std::printf("%s [%d] %s: %s (%.2f s%s)\n", ok ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs,
              in_time ? "" : ", over time budget");
  std::fflush(stdout);
  return ok ? 0 : 1;
}

Mat unit(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
  Mat m = Mat::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

// σ2⊗S-type odd Hermitian operator anti-commuting with σ1⊗1, conjugated by W⊕W.
Mat admissible(Rng& rng, Eigen::Index m, const Mat& W) {
  Mat S = rng.hermitian(m);
  Mat Z = Mat::Zero(m, m);
  Mat Wb = direct_sum(W, W);
  return Wb * block2(Z, Mat(-I * S), Mat(I * S), Z) * Wb.adjoint();
}

Mat random_symmetry(Rng& rng, Eigen::Index n, Eigen::Index neg) {
  Mat U = rng.unitary(n);
  Vec d = Vec::Ones(n);
  for (Eigen::Index i = 0; i < neg; ++i) d(i) = -1.0;
  return U * d.asDiagonal() * U.adjoint();
}

int signature(const Mat& H) {
  auto ev = eig_hermitian(Mat(0.5 * (H + H.adjoint())));
  return static_cast<int>((ev.values.array() > 0).count()) - static_cast<int>((ev.values.array() < 0).count());
}

// Cycle-side invariant: half the signature of W·c on ker T.
int cycle_signature(const FiniteKasparovCycle& k, const Mat& c) {
  if (k.dim() == 0) return 0;
  Mat K = kernel_basis(k.op);
  if (K.cols() == 0) return 0;
  Mat cc = k.Q.adjoint() * c * k.Q;
  return signature(Mat(K.adjoint() * k.left_gens[0] * cc * K)) / 2;
}

Outcome circle_index() {
  PairFamily fam = [](int N) {
    auto c = circle_spectral_triple(N);
    return std::make_pair(c.u, c.D);
  };
  std::ostringstream d;
  bool ok = true;
  for (int N : {16, 32, 64}) {
    auto p = index_pairing(fam, N);
    ok = ok && p.agree && p.sf == 1 && p.kernel.value() == 1;
    d << "N=" << N << " sf=" << p.sf << " ker=" << p.kernel.value() << "; ";
  }
  auto r = cot_index_report({128, 256, 512});
  ok = ok && r.kernel_dim == 1 && r.cokernel_dim == 0;
  d << "cot smin " << r.smin[0] << "→" << r.smin[2] << ", kernel " << r.kernel_dim << ", cokernel " << r.cokernel_dim;
  return {ok, d.str()};
}

Outcome bott() {
  Grading g = Grading::inner(sigma3());
  double worst = 0;
  for (const auto& s : bott_plane(21, 2.0))
    worst = std::max(worst, maxabs(graph_projection(s.T, g).P - bott_projector(s.x, s.y)));
  std::ostringstream d;
  d << "441 grid points, max entry deviation " << worst;
  return {worst < 1e-12, d.str()};
}

Outcome cayley_round_trips() {
  Rng rng(2024);
  double rt = 0, grt = 0, fwd = 0, inv = 0;
  for (int trial = 0; trial < 200; ++trial) {
    int n = rng.integer(2, 32);
    Mat T = rng.hermitian(n);
    rt = std::max(rt, maxabs(cayley_inv(cayley(T)).ambient() - T));
  }
  for (int trial = 0; trial < 200; ++trial) {
    int m = rng.integer(1, 16);
    Mat W = rng.unitary(m);
    Mat Wb = direct_sum(W, W);
    Mat e0 = block2(Mat::Zero(m, m), eye(m), eye(m), Mat::Zero(m, m));
    Mat G = direct_sum(eye(m), Mat(-eye(m)));
    Osu e = make_osu(Wb * e0 * Wb.adjoint(), Grading::inner(G));
    Mat T = admissible(rng, m, W);
    Osu U = graded_cayley(T, e);
    grt = std::max(grt, maxabs(graded_cayley_inv(U, e).ambient() - T));
    Mat n2 = eye(2 * m);
    fwd = std::max(fwd, maxabs(U.U - e.U - 2.0 * (T - e.U).inverse()));
    Mat Ci = graded_cayley_inv(U, e).ambient();
    Mat Dinv = (U.U - e.U).inverse();
    inv = std::max(inv, maxabs(n2 + Ci * Ci - 4.0 * Dinv * Dinv));
  }
  std::ostringstream d;
  d << "max |Ci(C(T))-T| " << rt << ", |Ci_e(C_e(T))-T| " << grt << ", forward identity " << fwd
    << ", inverse identity " << inv;
  return {rt < 1e-9 && grt < 1e-9 && fwd < 1e-9 && inv < 1e-9, d.str()};
}

Outcome boundary_map() {
  Rng rng(4);
  Grading g = kc::testing::block_grading(4, 4);
  double osu = 0, exact = 0, tanh = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Mat T = kc::testing::offdiag(rng.gaussian(4, 4));
    Mat x = rng.uniform(0.05, 1.0) * T / opnorm(T);
    osu = std::max(osu, check_osu(vd_boundary(x, g)).worst());
    Mat v = kc::testing::offdiag_osu(rng.unitary(4));
    exact = std::max(exact, maxabs(vd_boundary(v, g).U - vd_base(g)));
    BoundaryDiagnostics diag;
    boundary_cycle_unbounded(Mat(rng.uniform(0.05, 0.97) * T / opnorm(T)), g, nullptr, {}, &diag);
    tanh = std::max(tanh, diag.tanh_residual);
  }
  std::ostringstream d;
  d << "worst OSU residual " << osu << ", exact-lift deviation " << exact << ", tanh/tan residual " << tanh;
  return {osu < 1e-9 && exact < 1e-12 && tanh < 1e-9, d.str()};
}

Outcome bulk_boundary() {
  std::vector<double> ts = {0.25, 0.5, 1.0, 2.0, 4.0};
  int gapped = 0, agree = 0;
  for (double t1 : ts)
    for (double t2 : ts) {
      if (t1 == t2) continue;
      ++gapped;
      auto m = ssh_model(t1, t2);
      int w = winding_number(chiral_loop(m, 128));
      auto e = edge_invariants(halfspace(m, 40));
      if (w == e.signed_left) ++agree;
    }
  auto top = edge_invariants(halfspace(ssh_model(0.5, 1.0), 40));
  int tiny = 0;
  for (double e : top.in_gap)
    if (std::abs(e) < 1e-6) ++tiny;
  std::ostringstream d;
  d << agree << "/" << gapped << " gapped points with winding = signed edge count; (0.5, 1.0, L=40): "
    << top.p_delta_rank << " in-gap modes, " << tiny << " with |E| < 1e-6, signed " << top.signed_left << "/"
    << top.signed_right;
  return {agree == gapped && top.p_delta_rank == 2 && tiny == 2, d.str()};
}

Outcome product_positivity() {
  Rng rng(6);
  double worst = 1e300;
  for (int trial = 0; trial < 100; ++trial) {
    int n = rng.integer(2, 10);
    Mat u = rng.unitary(n);
    Mat D = rng.hermitian(n);
    D *= rng.uniform(0.05, 1.99) / opnorm(D * u - u * D);
    worst = std::min(worst, kasparov_product_rep(u, D).positivity_min);
  }
  auto rep = approx_unit_check({1, 2, 4, 8, 16});
  bool mono = true;
  std::ostringstream d;
  d << "min positivity eigenvalue " << worst << "; decay";
  for (size_t v = 0; v < rep.vectors.size(); ++v) {
    mono = mono && rep.decreasing[v];
    d << " " << rep.vectors[v] << " " << rep.norms[v].front() << "→" << rep.norms[v].back();
  }
  return {worst >= -1e-10 && mono, d.str()};
}

Outcome clifford_identities() {
  double gen = 0;
  for (int p = 0; p <= 6; ++p)
    for (int q = 0; p + q <= 6; ++q) gen = std::max(gen, verify_clifford(build_clifford(p, q), 1e-12).max_residual);

  // Koszul rule on the matrix-unit bases of M2 (graded σ3) and Cl1.
  Grading ga = Grading::inner(sigma3());
  Grading gb = cl1_grading();
  std::vector<Mat> units;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) units.push_back(unit(2, i, j));
  std::vector<Mat> cl = {eye(2), cl1_rho()};
  double koszul = 0;
  for (const Mat& a : units)
    for (const Mat& b : cl)
      for (const Mat& c : units)
        for (const Mat& dd : cl) {
          double sign = (parity(b, gb) && parity(c, ga)) ? -1.0 : 1.0;
          Mat lhs = graded_tensor(a, ga, b, gb) * graded_tensor(c, ga, dd, gb);
          Mat rhs = sign * graded_tensor(Mat(a * c), ga, Mat(b * dd), gb);
          koszul = std::max(koszul, maxabs(lhs - rhs));
        }

  double eta_res = 0;
  Grading src = tensor(ga, gb);
  Grading tgt = tensor(Grading::none(2), gb);
  for (const Mat& a : units)
    for (int k = 0; k < 2; ++k) {
      Mat ex = graded_tensor(a, ga, cl[static_cast<size_t>(k)], gb);
      Mat hx = eta(ex, ga);
      eta_res = std::max(eta_res, maxabs(hx - eta_basis(a, k, ga)));
      eta_res = std::max(eta_res, maxabs(eta(src.G * ex * src.G, ga) - tgt.G * hx * tgt.G));
      for (const Mat& b : units)
        for (int l = 0; l < 2; ++l) {
          Mat ey = graded_tensor(b, ga, cl[static_cast<size_t>(l)], gb);
          eta_res = std::max(eta_res, maxabs(eta(ex * ey, ga) - hx * eta(ey, ga)));
        }
    }
  std::ostringstream d;
  d << "generator relations " << gen << ", Koszul " << koszul << ", eta " << eta_res;
  return {gen < 1e-12 && koszul < 1e-10 && eta_res < 1e-10, d.str()};
}

Outcome round_trips() {
  Rng rng(8);
  int class_ok = 0, cycle_ok = 0, degenerate_ok = 0;
  const int trials = 50;
  for (int trial = 0; trial < trials; ++trial) {
    // Class → cycle → class.
    Eigen::Index n = rng.integer(1, 8);
    Grading g = Grading::inner(kron(eye(n), sigma3()));
    Mat c = kron(eye(n), sigma1());
    Mat sx = random_symmetry(rng, n, rng.integer(0, static_cast<int>(n)));
    Mat sy = random_symmetry(rng, n, rng.integer(0, static_cast<int>(n)));
    DkClass cls = DkClass::of(make_osu(kron(sx, sigma1()), g), make_osu(kron(sy, sigma1()), g));
    int inv = signature_invariant(cls, c);
    auto k = dk_to_kk(cls);
    DkClass back = embed_in_ambient(kk_to_dk(k), k);
    if (signature_invariant(back, c) == inv && cycle_signature(k, c) == inv) ++class_ok;

    // Cycle → class → cycle, with W = w⊗σ1 and T = t⊗σ1, {t, w} = 0.
    Eigen::Index a = rng.integer(1, 4), b = rng.integer(1, 4);
    Eigen::Index m = a + b;
    Mat w = direct_sum(eye(a), Mat(-eye(b)));
    Mat B = rng.gaussian(b, a);
    Mat t = Mat::Zero(m, m);
    t.bottomLeftCorner(b, a) = B;
    t.topRightCorner(a, b) = B.adjoint();
    Mat U = kron(rng.unitary(m), eye(2));
    FiniteKasparovCycle kc0;
    kc0.Q = eye(2 * m);
    kc0.op = U * kron(t, sigma1()) * U.adjoint();
    kc0.grading = Grading::inner(kron(eye(m), sigma3()));
    kc0.left_gens = {Mat(U * kron(w, sigma1()) * U.adjoint())};
    kc0.ambient_base = kc0.left_gens[0];
    kc0.ambient_grading = kc0.grading;
    Mat cm = kron(eye(m), sigma1());
    int expected = static_cast<int>(a - b);
    DkClass mid = kk_to_dk(kc0);
    auto k1 = dk_to_kk(mid);
    if (cycle_signature(kc0, cm) == expected && signature_invariant(mid, cm) == expected &&
        cycle_signature(k1, cm) == expected)
      ++cycle_ok;

    // Degenerate cycle: invertible T anti-commuting with e; the λ-path joins e to C_e(T) through OSUs.
    Eigen::Index h = rng.integer(1, 6);
    Mat S = rng.hermitian(h);
    S += (0.5 + opnorm(S)) * eye(h);
    Mat Z = Mat::Zero(h, h);
    Mat T = block2(Z, Mat(-I * S), Mat(I * S), Z);
    Grading gd = Grading::inner(direct_sum(eye(h), Mat(-eye(h))));
    Mat e = block2(Z, eye(h), eye(h), Z);
    FiniteKasparovCycle deg;
    deg.Q = eye(2 * h);
    deg.op = T;
    deg.grading = gd;
    deg.left_gens = {e};
    DkClass dc = kk_to_dk(deg);
    auto path = degeneracy_path(T, e, 32);
    bool ok = maxabs(path.front() - e) < 1e-12 && maxabs(path.back() - dc.x().U) < 1e-9;
    for (const auto& p : path) ok = ok && check_osu(p, gd).pass;
    Osu eo = make_osu(e, gd);
    ok = ok && compare_classes(dc, DkClass::of(eo, eo)).result == ClassEquality::EqualByPath;
    if (ok) ++degenerate_ok;
  }
  std::ostringstream d;
  d << "class round trips " << class_ok << "/" << trials << ", cycle round trips " << cycle_ok << "/" << trials
    << ", degenerate classes joined to zero by a path " << degenerate_ok << "/" << trials;
  return {class_ok == trials && cycle_ok == trials && degenerate_ok == trials, d.str()};
}

}  // namespace

int main() {
  int fails = 0;
  fails += run(1, "circle index pairing and cot kernel", 10.0, circle_index);
  fails += run(2, "Bott projector from the graph projection", 1.0, bott);
  fails += run(3, "Cayley round trips and identities", 30.0, cayley_round_trips);
  fails += run(4, "boundary map OSU axioms, exact lifts, tanh identity", 0, boundary_map);
  fails += run(5, "SSH bulk-boundary correspondence", 20.0, bulk_boundary);
  fails += run(6, "product positivity and approximate unit decay", 0, product_positivity);
  fails += run(7, "Clifford relations, Koszul rule, eta isomorphism", 0, clifford_identities);
  fails += run(8, "finite round trips preserve invariants", 0, round_trips);
  return fails == 0 ? 0 : 1;
}
