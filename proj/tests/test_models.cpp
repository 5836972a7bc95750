#include "doctest.h"
#include "kcayley/models.hpp"
#include "support.hpp"

using namespace kc;

TEST_CASE("circle spectral triple") {
  for (int N : {4, 16}) {
    CircleTriple c = circle_spectral_triple(N);
    auto ev = eig_hermitian(c.D);
    for (Eigen::Index i = 0; i < ev.values.size(); ++i) CHECK(ev.values(i) == doctest::Approx(i - N));
    Mat shifted = c.u * c.D * c.u.adjoint();
    Eigen::Index n = c.D.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (c.edge[static_cast<size_t>(i)]) continue;
      CHECK(std::abs(shifted(i, i) - (c.D(i, i) + 1.0)) < 1e-15);
    }
    CHECK(std::count(c.edge.begin(), c.edge.end(), true) == 1);
  }
  CHECK_THROWS_AS(circle_spectral_triple(3), Error);
}

TEST_CASE("circle index pairing") {
  PairFamily minus = [](int N) {
    auto c = circle_spectral_triple(N);
    return std::make_pair(c.u, c.D);
  };
  PairFamily plus = [](int N) {
    auto c = circle_spectral_triple(N, +1);
    return std::make_pair(c.u, c.D);
  };
  for (int N : {16, 32}) {
    auto p = index_pairing(minus, N);
    CHECK(p.sf == 1);
    CHECK(p.kernel.value() == 1);
    CHECK(p.agree);
    CHECK(index_pairing(plus, N).value == -1);
  }
}

TEST_CASE("cot operator discretization") {
  CotOperator a = cot_product_operator(128), b = cot_product_operator(256);
  CHECK(b.candidate_residual < a.candidate_residual);
  CHECK(b.candidate_residual < 10 * a.candidate_residual / 2);
  CHECK(maxabs(a.D_adj - a.D.transpose()) < 1e-15);
  for (Eigen::Index j = 0; j < a.theta.size(); ++j)
    CHECK(std::abs(a.candidate(j) - std::pow(std::sin(a.theta(j) / 2), 2)) < 1e-15);
  auto r = cot_index_report({128, 256, 512});
  CHECK(r.kernel_dim == 1);
  CHECK(r.cokernel_dim == 0);
  CHECK(r.index() == 1);
  for (size_t i = 1; i < r.smin.size(); ++i) {
    CHECK(r.smin[i] < 0.5 * r.smin[i - 1]);
    CHECK(r.second[i] > 0.5);
  }
  CHECK_THROWS_AS(cot_product_operator(32), Error);
}

TEST_CASE("real line generator") {
  auto xs = real_line_points(64, 1.0);
  auto loop = real_line_generator(64, 1.0);
  for (size_t j = 0; j < xs.size(); ++j) {
    if (std::isinf(xs[j])) continue;
    auto ci = cayley_inv(loop.samples[j]);
    REQUIRE(ci.rank() == 1);
    CHECK(std::abs(ci.op(0, 0) - xs[j]) < 1e-9);
  }
  CHECK(std::abs(winding_number(loop)) == 1);
  CHECK(winding_number(real_line_generator(256, 3.0)) == winding_number(loop));
  CHECK_THROWS_AS(real_line_generator(2), Error);
}

TEST_CASE("Bott plane sampler") {
  auto s = bott_plane(3, 1.0);
  CHECK(s.size() == 9);
  const auto& origin = s[4];
  CHECK(origin.x == 0.0);
  CHECK(origin.y == 0.0);
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 1;
  CHECK(maxabs(graph_projection(origin.T, Grading::inner(sigma3())).P - d) < 1e-15);
  CHECK_THROWS_AS(bott_plane(0, 1.0), Error);
}

TEST_CASE("SSH gap closes exactly at equal hoppings") {
  for (double t1 : {0.25, 0.5, 1.0, 2.0}) {
    for (double t2 : {0.25, 0.5, 1.0, 2.0}) {
      auto m = ssh_model(t1, t2);
      auto [gap, k] = bulk_gap([&](double q) { return bloch(m, q); }, 256);
      CHECK(gap == doctest::Approx(std::abs(t1 - t2)).epsilon(1e-9));
      for (double q : {0.0, 1.0, 2.5}) {
        auto ev = eig_hermitian(bloch(m, q));
        double r = std::abs(t1 + t2 * std::exp(I * q));
        CHECK(ev.values(0) == doctest::Approx(-r));
        CHECK(ev.values(1) == doctest::Approx(r));
      }
    }
  }
}

TEST_CASE("model symmetries and hermiticity") {
  std::vector<TightBindingModel> zoo = {ssh_model(0.5, 1.0), ssh_model(1.0, 0.3), kitaev_chain(0.5, 1.0, 0.8),
                                        kitaev_chain(3.0, 1.0, 0.5)};
  for (const auto& m : zoo) {
    CHECK(m.hermiticity().ok);
    for (int j = 0; j < 128; ++j) CHECK(is_hermitian(bloch(m, 2 * M_PI * j / 128), Tolerance{1e-14}).ok);
    for (const Mat& h : {ring_matrix(m, 10), open_chain(m, 10)}) {
      auto r = symmetry_residuals(h, m.symmetry(10));
      if (m.trs) CHECK(r.trs < 1e-12);
      if (m.phs) CHECK(r.phs < 1e-12);
      if (m.chiral) CHECK(r.chiral < 1e-12);
    }
  }
}

TEST_CASE("halfspace agrees with the ring outside the ideal mask") {
  auto m = ssh_model(0.5, 1.0);
  HalfSpaceModel hs = halfspace(m, 20);
  CHECK(hs.w == 5);
  CHECK(hs.dim() == 40);
  CHECK(is_hermitian(hs.halfspace).ok);
  CHECK(leakage(Mat(hs.halfspace - hs.ring), hs.ideal_mask) == 0.0);
  CHECK(maxabs(hs.halfspace - hs.ring) > 0.5);
  CHECK_THROWS_AS(halfspace(m, 6), Error);
  Mat left = hs.left_indicator();
  CHECK(std::abs(left.trace() - 20.0) < 1e-15);
}
