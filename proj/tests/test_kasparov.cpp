#include "doctest.h"
#include "kcayley/models.hpp"
#include "support.hpp"

using namespace kc;
using kc::testing::Rng;

namespace {

Mat diag2(double a, double b) {
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = a;
  d(1, 1) = b;
  return d;
}

// Random chiral insulator offdiag(B*, B) with B invertible, for the grading diag(1..1, -1..-1).
Mat chiral_insulator(Rng& rng, Eigen::Index m) {
  Mat B = rng.gaussian(m, m) + 3.0 * eye(m);
  return kc::testing::offdiag(B);
}

Mat random_gapped(Rng& rng, Eigen::Index n, Eigen::Index neg) {
  Mat U = rng.unitary(n);
  Vec d(n);
  for (Eigen::Index i = 0; i < n; ++i) d(i) = (i < neg ? -1.0 : 1.0) * rng.uniform(0.5, 2.0);
  return U * d.asDiagonal() * U.adjoint();
}

int fermi_rank(const BulkClass& b, Eigen::Index n) {
  return signature_invariant(*b.dk, kron(eye(n), sigma1()));
}

}  // namespace

TEST_CASE("flatten examples") {
  Insulator ins = flatten(diag2(2, -3));
  CHECK(maxabs(ins.flattened - diag2(1, -1)) < 1e-15);
  CHECK(ins.gap == doctest::Approx(2.0));
  CHECK_THROWS_AS(flatten(diag2(1, 0)), Error);
  try {
    flatten(diag2(1, 0));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Gapless);
  }
  CHECK(flatten(diag2(2, -3), 1.5).hint_consistent);
  CHECK_FALSE(flatten(diag2(2, -3), 2.5).hint_consistent);
}

TEST_CASE("flatten of the SSH Bloch matrix is the off-diagonal phase") {
  for (double k : {0.0, 0.7, 2.0, M_PI}) {
    auto m = ssh_model(0.5, 1.0);
    Mat h = bloch(m, k);
    cplx q = 0.5 + 1.0 * std::exp(I * k);
    Mat ref(2, 2);
    ref << 0, std::conj(q) / std::abs(q), q / std::abs(q), 0;
    SymmetryData s = m.symmetry(1);
    s.trs = false;
    Insulator ins = flatten(h, std::nullopt, s);
    CHECK(maxabs(ins.flattened - ref) < 1e-12);
    CHECK(ins.gap == doctest::Approx(std::abs(q)));
  }
}

TEST_CASE("flatten is idempotent and inherits symmetry flags") {
  Rng rng(60);
  for (int trial = 0; trial < 20; ++trial) {
    Mat h = chiral_insulator(rng, 3);
    SymmetryData s;
    s.grading = kc::testing::block_grading(3, 3);
    s.chiral = true;
    Insulator a = flatten(h, std::nullopt, s);
    Insulator b = flatten(a.flattened, std::nullopt, s);
    CHECK(maxabs(a.flattened - b.flattened) < 1e-12);
    CHECK(is_unitary(a.flattened).ok);
    CHECK(is_hermitian(a.flattened).ok);
    CHECK(a.flattened_residuals.chiral < 1e-12);
  }
  auto k = kitaev_chain(0.5, 1.0, 0.8);
  Mat h = ring_matrix(k, 12);
  Insulator ins = flatten(h, std::nullopt, k.symmetry(12));
  CHECK(ins.residuals.phs < 1e-12);
  CHECK(ins.flattened_residuals.phs < 1e-12);
}

TEST_CASE("declared flags that do not hold are rejected") {
  SymmetryData s;
  s.grading = Grading::inner(sigma3());
  s.chiral = true;
  CHECK_THROWS_AS(flatten(diag2(1, -1), std::nullopt, s), Error);
  SymmetryData r;
  r.real = RealStructure::conjugation(2);
  r.trs = true;
  CHECK_THROWS_AS(detect_symmetry_class(sigma2(), r), Error);
}

TEST_CASE("graph projection examples") {
  Grading g = Grading::inner(sigma3());
  auto p0 = graph_projection(Mat::Zero(2, 2), g);
  CHECK(maxabs(p0.P - diag2(1, 0)) < 1e-15);
  CHECK(maxabs(bott_projector(0, 0) - diag2(1, 0)) < 1e-15);
  Mat half = 0.5 * Mat::Ones(2, 2);
  CHECK(maxabs(bott_projector(1, 0) - half) < 1e-15);
  for (auto& s : bott_plane(7, 2.0)) {
    Mat pb = bott_projector(s.x, s.y);
    CHECK(is_projection(pb).ok);
    CHECK(std::abs(pb.trace() - 1.0) < 1e-14);
    CHECK(maxabs(graph_projection(s.T, g).P - pb) < 1e-12);
  }
  CHECK_THROWS_AS(graph_projection(sigma3(), g), Error);
}

TEST_CASE("graph projection of random odd operators") {
  Rng rng(61);
  Grading g = kc::testing::block_grading(4, 4);
  for (int trial = 0; trial < 20; ++trial) {
    Mat T = kc::testing::offdiag(rng.gaussian(4, 4));
    auto gp = graph_projection(T, g);
    CHECK(maxabs(gp.P * gp.P - gp.P) < 1e-10);
    CHECK(maxabs(gp.P - gp.P.adjoint()) < 1e-12);
    const Mat& Tp = gp.T_plus;
    Mat Kp = (eye(4) + Tp.adjoint() * Tp).inverse();
    Mat Km = (eye(4) + Tp * Tp.adjoint()).inverse();
    Mat Pp = gp.Bp.adjoint() * gp.P * gp.Bp;
    Mat Pm = gp.Bm.adjoint() * gp.P * gp.Bm;
    CHECK(maxabs(Pp - Kp) < 1e-10);
    CHECK(maxabs(Pm - (eye(4) - Km)) < 1e-10);
    CHECK(maxabs(gp.v_plus * gp.v_plus.adjoint() - eye(4)) < 1e-10);
    CHECK(maxabs(gp.v_plus.adjoint() * gp.v_plus - gp.P) < 1e-10);
    CHECK(gp.compact_defect <= 1.0 + 1e-12);
  }
}

TEST_CASE("symmetry class detection") {
  SymmetryData none;
  CHECK(detect_symmetry_class(diag2(1, -1), none).label == "A");
  SymmetryData ch;
  ch.grading = Grading::inner(sigma3());
  ch.chiral = true;
  CHECK(detect_symmetry_class(sigma1(), ch).label == "AIII");
  auto k = kitaev_chain(0.5, 1.0, 0.8);
  CHECK(detect_symmetry_class(ring_matrix(k, 10), k.symmetry(10)).label == "PHS");
  SymmetryData trs;
  trs.real = RealStructure::conjugation(2);
  trs.trs = true;
  CHECK(detect_symmetry_class(sigma1(), trs).label == "TRS");
  auto ssh = ssh_model(0.5, 1.0);
  Osu e = make_osu(kron(eye(10), sigma1()), *ssh.symmetry(10).grading);
  CHECK(detect_symmetry_class(ring_matrix(ssh, 10), ssh.symmetry(10), &e).label == "chiral/real-grading/real");
  CHECK_THROWS_AS(detect_symmetry_class(ring_matrix(ssh, 10), ssh.symmetry(10)), Error);
}

TEST_CASE("chiral reduction") {
  Grading g = kc::testing::block_grading(2, 2);
  Osu e = make_osu(kc::testing::offdiag_osu(eye(2)), g);
  SymmetryData s;
  s.grading = g;
  s.chiral = true;
  Insulator flat = flatten(e.U, std::nullopt, s);
  CHECK(maxabs(chiral_reduction(flat, g, e) - eye(2)) < 1e-14);

  Rng rng(62);
  Grading g4 = kc::testing::block_grading(4, 4);
  Osu e4 = make_osu(kc::testing::offdiag_osu(eye(4)), g4);
  s.grading = g4;
  for (int trial = 0; trial < 100; ++trial) {
    Insulator ins = flatten(chiral_insulator(rng, 4), std::nullopt, s);
    CHECK(is_unitary(chiral_reduction(ins, g4, e4), Tolerance{1e-10}).ok);
  }
  CHECK_THROWS_AS(chiral_reduction(flatten(diag2(1, -1)), g, e), Error);
}

TEST_CASE("SSH winding of the chiral reduction") {
  CHECK(winding_number(chiral_loop(ssh_model(0.5, 1.0), 128)) == 1);
  CHECK(winding_number(chiral_loop(ssh_model(1.0, 0.5), 128)) == 0);
}

TEST_CASE("bulk class without symmetry recovers the Fermi projection") {
  Mat h = Mat::Zero(3, 3);
  h(0, 0) = 1;
  h(1, 1) = 2;
  h(2, 2) = -1;
  BulkClass b = bulk_class(flatten(h));
  CHECK(b.cls.label == "A");
  CHECK(b.osu_residual < 1e-12);
  CHECK(std::abs(b.fermi_projector->trace() - 1.0) < 1e-14);
  CHECK(fermi_rank(b, 3) == 1);
  CHECK(check_cycle(*b.cycle).pass);
  BulkClass t = bulk_class(flatten(eye(3)));
  CHECK(fermi_rank(t, 3) == 0);
  CHECK(t.cycle->dim() == 0);
}

TEST_CASE("bulk class of SSH") {
  int L = 12;
  auto m = ssh_model(0.5, 1.0);
  SymmetryData s = m.symmetry(L);
  s.trs = false;
  s.real.reset();
  Osu e = make_osu(kron(eye(L), sigma1()), *s.grading);
  BulkClass b = bulk_class(flatten(ring_matrix(m, L), std::nullopt, s), BulkOptions{e, std::nullopt});
  CHECK(b.cls.label == "AIII");
  CHECK(is_unitary(*b.unitary).ok);
  CHECK(check_cycle(*b.cycle).pass);
  CHECK(b.osu_residual < 1e-12);

  BulkClass real = bulk_class(flatten(ring_matrix(m, L), std::nullopt, m.symmetry(L)), BulkOptions{e, std::nullopt});
  CHECK(real.cls.label == "chiral/real-grading/real");
  CHECK(real.reality_residual < 1e-12);
  CHECK(check_cycle(*real.cycle).pass);

  // Atomic limit t2 = 0: h_flat = e, so u_h = 1 and the cycle is empty.
  auto triv = ssh_model(1.0, 0.0);
  BulkClass t = bulk_class(flatten(ring_matrix(triv, L), std::nullopt, s), BulkOptions{e, std::nullopt});
  CHECK(maxabs(*t.unitary - eye(L)) < 1e-12);
  CHECK(t.cycle->dim() == 0);
  CHECK_THROWS_AS(bulk_class(flatten(ring_matrix(m, L), std::nullopt, s)), Error);
}

TEST_CASE("bulk class of the Kitaev chain") {
  int L = 10;
  auto k = kitaev_chain(0.5, 1.0, 0.8);
  BulkClass b = bulk_class(flatten(ring_matrix(k, L), std::nullopt, k.symmetry(L)));
  CHECK(b.cls.label == "PHS");
  CHECK(b.osu_residual < 1e-9);
  CHECK(validate(*b.dk).pass);
  CHECK(check_osu(b.dk->x()).has_real);
  CHECK(check_cycle(*b.cycle).pass);
  Mat badJ = eye(2 * L);
  CHECK_THROWS_AS(bulk_class(flatten(ring_matrix(k, L), std::nullopt, k.symmetry(L)), BulkOptions{std::nullopt, badJ}),
                  Error);
}

TEST_CASE("bulk invariants are unchanged by even unitary conjugation") {
  Rng rng(63);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::Index n = rng.integer(2, 6);
    Eigen::Index neg = rng.integer(0, static_cast<int>(n));
    Mat h = random_gapped(rng, n, neg);
    Mat U = rng.unitary(n);
    int a = fermi_rank(bulk_class(flatten(h)), n);
    int b = fermi_rank(bulk_class(flatten(Mat(U * h * U.adjoint()))), n);
    CHECK(a == static_cast<int>(neg));
    CHECK(a == b);
  }
  // Chiral family: conjugate the SSH Bloch loop and e by a constant even unitary.
  auto m = ssh_model(0.5, 1.0);
  Grading g = Grading::inner(kron(eye(2), sigma3()));
  for (int trial = 0; trial < 5; ++trial) {
    Mat V = Mat::Zero(4, 4);
    Mat up = rng.unitary(2), dn = rng.unitary(2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        V(2 * i, 2 * j) = up(i, j);
        V(2 * i + 1, 2 * j + 1) = dn(i, j);
      }
    Osu e = make_osu(Mat(V * kron(eye(2), sigma1()) * V.adjoint()), g);
    SymmetryData s;
    s.grading = g;
    s.chiral = true;
    UnitaryLoop loop;
    for (int j = 0; j < 128; ++j) {
      double kk = 2 * M_PI * j / 128;
      Mat h = V * kron(eye(2), bloch(m, kk)) * V.adjoint();
      loop.samples.push_back(chiral_reduction(flatten(h, std::nullopt, s), g, e));
      loop.grid.push_back(kk);
    }
    CHECK(winding_number(loop) == 2);
  }
}

TEST_CASE("unitary cycle") {
  Rng rng(64);
  Mat u = rng.unitary_away_from_one(4, 0.3);
  auto c = unitary_cycle(u);
  CHECK(c.dim() == 8);
  CHECK(check_cycle(c).pass);
  CHECK(unitary_cycle(eye(3)).degenerate);
}
