#include "doctest.h"
#include "kcayley/graded.hpp"
#include "support.hpp"

using namespace kc;
using kc::testing::Rng;

TEST_CASE("parity_decompose examples") {
  Grading g = Grading::inner(sigma3());
  auto [e1, o1] = parity_decompose(sigma1(), g);
  CHECK(maxabs(e1) == 0.0);
  CHECK(maxabs(o1 - sigma1()) == 0.0);
  auto [e3, o3] = parity_decompose(sigma3(), g);
  CHECK(maxabs(e3 - sigma3()) == 0.0);
  CHECK(maxabs(o3) == 0.0);

  Rng rng(20);
  Grading g4 = kc::testing::block_grading(2, 2);
  Mat M = rng.gaussian(4, 4);
  auto [ev, od] = parity_decompose(M, g4);
  CHECK(maxabs(ev + od - M) < 1e-15);
  CHECK(maxabs(g4.G * ev * g4.G - ev) < 1e-14);
  CHECK(maxabs(g4.G * od * g4.G + od) < 1e-14);
}

TEST_CASE("graded_commutator examples") {
  Grading g = Grading::inner(sigma3());
  CHECK(maxabs(graded_commutator(sigma1(), sigma2(), g)) < 1e-15);
  Rng rng(21);
  Grading g4 = kc::testing::block_grading(2, 2);
  Mat odd = parity_decompose(rng.gaussian(4, 4), g4).second;
  CHECK(maxabs(graded_commutator(g4.G, odd, g4) - 2.0 * g4.G * odd) < 1e-14);
  Mat even = parity_decompose(rng.gaussian(4, 4), g4).first;
  Mat any = parity_decompose(rng.gaussian(4, 4), g4).second;
  CHECK(maxabs(graded_commutator(even, any, g4) - (even * any - any * even)) < 1e-14);
  CHECK_THROWS_AS(graded_commutator(sigma1() + sigma3(), sigma1(), g), Error);
}

TEST_CASE("check_osu examples") {
  Grading g = Grading::inner(sigma3());
  RealStructure r = RealStructure::conjugation(2);
  auto ok = check_osu(sigma1(), g, &r);
  CHECK(ok.pass);
  auto bad = check_osu(sigma3(), g);
  CHECK_FALSE(bad.pass);
  CHECK(bad.odd == doctest::Approx(2.0));
  CHECK(bad.failing(1e-9).find("odd") != std::string::npos);
  auto imag = check_osu(sigma2(), g, &r);
  CHECK_FALSE(imag.pass);
  CHECK(imag.real == doctest::Approx(2.0));
}

TEST_CASE("direct sums of OSUs") {
  Grading g = Grading::inner(sigma3());
  Osu e = make_osu(sigma1(), g, RealStructure::conjugation(2));
  Osu s = direct_sum({e, negate(e)});
  CHECK(check_osu(s).pass);
  CHECK(s.dim() == 4);
  Osu f{sigma2(), g, std::nullopt};
  CHECK_THROWS_AS(direct_sum({e, f}), Error);

  Rng rng(22);
  Grading g2 = kc::testing::block_grading(2, 2);
  Osu a{kc::testing::offdiag_osu(rng.unitary(2)), g2, std::nullopt};
  Osu b{kc::testing::offdiag_osu(rng.unitary(2)), g2, std::nullopt};
  Osu c{kc::testing::offdiag_osu(rng.unitary(2)), g2, std::nullopt};
  Osu left = direct_sum({direct_sum({a, b}), c});
  Osu right = direct_sum({a, direct_sum({b, c})});
  CHECK(maxabs(left.U - right.U) == 0.0);
  CHECK(check_osu(left).pass);
}

TEST_CASE("perturbation_average produces anti-commuting operators") {
  Rng rng(23);
  Grading g = kc::testing::block_grading(3, 3);
  Mat e = kc::testing::offdiag_osu(rng.unitary(3));
  Mat T = parity_decompose(rng.hermitian(6), g).second;
  Mat Tt = perturbation_average(T, e);
  CHECK(maxabs(e * Tt + Tt * e) < 1e-12);
  CHECK(maxabs(perturbation_average(Tt, e) - Tt) < 1e-12);
}

TEST_CASE("rotation between anti-commuting OSUs stays OSU") {
  Grading g = Grading::inner(sigma3());
  for (int i = 0; i < 32; ++i) {
    double t = M_PI / 2 * i / 31.0;
    CHECK(check_osu(rotation_path(sigma1(), sigma2(), t), g).pass);
  }
}

TEST_CASE("real structure functoriality") {
  Rng rng(24);
  RealStructure r = RealStructure::from_unitary(kron(eye(2), sigma1()));
  CHECK(r.sign == 1);
  for (int trial = 0; trial < 20; ++trial) {
    Mat M = rng.gaussian(4, 4), N = rng.gaussian(4, 4);
    CHECK(maxabs(r.apply(M * N) - r.apply(M) * r.apply(N)) < 1e-12);
    CHECK(maxabs(r.apply(M).adjoint() - r.apply(M.adjoint())) < 1e-12);
  }
}
