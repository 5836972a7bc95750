#include "kcayley/models.hpp"

#include <cmath>

namespace kc {

namespace {

Mat chain(const TightBindingModel& m, int L, bool periodic) {
  if (L < 1) throw Error(ErrorKind::Domain, "chain: L must be positive");
  Eigen::Index c = m.cell_dim;
  Mat H = Mat::Zero(L * c, L * c);
  for (const auto& [off, block] : m.hoppings)
    for (int i = 0; i < L; ++i) {
      int j = i + off;
      if (periodic)
        j = ((j % L) + L) % L;
      else if (j < 0 || j >= L)
        continue;
      H.block(i * c, j * c, c, c) += block;
    }
  return H;
}

}  // namespace

Check TightBindingModel::hermiticity(const Tolerance& tol) const {
  double worst = 0;
  for (const auto& [off, block] : hoppings) {
    auto it = hoppings.find(-off);
    if (it == hoppings.end()) {
      worst = std::max(worst, maxabs(block));
      continue;
    }
    worst = std::max(worst, maxabs(it->second - block.adjoint()));
  }
  return {worst < tol.eq_tol, worst};
}

SymmetryData TightBindingModel::symmetry(int L) const {
  SymmetryData s;
  s.trs = trs;
  s.phs = phs;
  s.chiral = chiral;
  if (cell_grading) s.grading = Grading::inner(kron(eye(L), *cell_grading));
  if (cell_real) s.real = RealStructure::from_unitary(kron(eye(L), *cell_real));
  return s;
}

Mat bloch(const TightBindingModel& m, double k) {
  Mat h = Mat::Zero(m.cell_dim, m.cell_dim);
  for (const auto& [off, block] : m.hoppings) h += std::exp(I * (k * off)) * block;
  return h;
}

Mat ring_matrix(const TightBindingModel& m, int L) { return chain(m, L, true); }
Mat open_chain(const TightBindingModel& m, int L) { return chain(m, L, false); }

TightBindingModel ssh_model(double t1, double t2) {
  TightBindingModel m;
  m.name = "ssh";
  m.cell_dim = 2;
  Mat onsite(2, 2), hop(2, 2);
  onsite << 0, t1, t1, 0;
  hop << 0, 0, t2, 0;
  m.hoppings[0] = onsite;
  m.hoppings[1] = hop;
  m.hoppings[-1] = hop.adjoint();
  m.cell_grading = sigma3();
  m.cell_real = eye(2);
  m.cell_base = sigma1();
  m.trs = true;
  m.chiral = true;
  m.params = {{"t1", t1}, {"t2", t2}};
  return m;
}

TightBindingModel kitaev_chain(double mu, double t, double delta) {
  TightBindingModel m;
  m.name = "kitaev";
  m.cell_dim = 2;
  Mat onsite(2, 2), hop(2, 2);
  onsite << -mu, 0, 0, mu;
  hop << -t, delta, -delta, t;
  m.hoppings[0] = onsite;
  m.hoppings[1] = hop;
  m.hoppings[-1] = hop.transpose();
  m.cell_real = sigma1();
  m.phs = true;
  m.params = {{"mu", mu}, {"t", t}, {"delta", delta}};
  return m;
}

HalfSpaceModel halfspace(const TightBindingModel& m, int L, int w) {
  if (L < 8) throw Error(ErrorKind::Domain, "halfspace: L must be at least 8");
  HalfSpaceModel h;
  h.L = L;
  h.w = w < 0 ? L / 4 : w;
  h.cell_dim = m.cell_dim;
  h.bulk = [m](double k) { return bloch(m, k); };
  h.ring = ring_matrix(m, L);
  h.halfspace = open_chain(m, L);
  h.ideal_mask = edge_mask(L, m.cell_dim, h.w);
  auto s = m.symmetry(L);
  h.grading = s.grading;
  h.real = s.real;
  return h;
}

CircleTriple circle_spectral_triple(int N, int sign) {
  if (N < 4) throw Error(ErrorKind::Domain, "circle_spectral_triple: N must be at least 4");
  Eigen::Index n = 2 * N + 1;
  CircleTriple c;
  c.N = N;
  c.D = Mat::Zero(n, n);
  c.u = Mat::Zero(n, n);
  c.edge.assign(static_cast<size_t>(n), false);
  for (Eigen::Index i = 0; i < n; ++i) c.D(i, i) = static_cast<double>(i - N);
  if (sign < 0) {
    for (Eigen::Index i = 0; i + 1 < n; ++i) c.u(i, i + 1) = 1.0;
    c.edge[static_cast<size_t>(n - 1)] = true;
  } else {
    for (Eigen::Index i = 1; i < n; ++i) c.u(i, i - 1) = 1.0;
    c.edge[0] = true;
  }
  return c;
}

CotOperator cot_product_operator(int M) {
  if (M < 64) throw Error(ErrorKind::Domain, "cot_product_operator: need at least 64 grid intervals");
  CotOperator c;
  Eigen::Index n = M - 1;
  c.h = 2 * M_PI / M;
  c.theta.resize(n);
  c.D = Mat::Zero(n, n);
  c.D_adj = Mat::Zero(n, n);
  c.candidate.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double th = (j + 1) * c.h;
    c.theta(j) = th;
    double ct = std::cos(th / 2) / std::sin(th / 2);
    c.D(j, j) = -1.0 / c.h - ct;
    if (j + 1 < n) c.D(j, j + 1) = 1.0 / c.h;
    c.D_adj(j, j) = -1.0 / c.h - ct;
    if (j > 0) c.D_adj(j, j - 1) = 1.0 / c.h;
    double s = std::sin(th / 2);
    c.candidate(j) = s * s;
  }
  c.candidate_residual = (c.D * c.candidate).norm() / c.candidate.norm();
  return c;
}

std::vector<double> real_line_points(int n, double cutoff) {
  std::vector<double> x;
  for (int j = 0; j < n; ++j) {
    double s = -M_PI + 2 * M_PI * j / n;
    x.push_back(j == 0 ? -INFINITY : cutoff * std::tan(s / 2));
  }
  return x;
}

UnitaryLoop real_line_generator(int n, double cutoff) {
  if (n < 4 || cutoff <= 0) throw Error(ErrorKind::Domain, "real_line_generator: grid parameters must be positive");
  UnitaryLoop loop;
  auto xs = real_line_points(n, cutoff);
  for (int j = 0; j < n; ++j) {
    double a = std::isinf(xs[j]) ? -M_PI / 2 : std::atan(xs[j]);
    Mat u(1, 1);
    u(0, 0) = -std::exp(-2.0 * I * a);
    loop.samples.push_back(u);
    loop.grid.push_back(2 * M_PI * j / n);
  }
  return loop;
}

std::vector<BottSample> bott_plane(int n, double R) {
  if (n < 1 || R <= 0) throw Error(ErrorKind::Domain, "bott_plane: grid parameters must be positive");
  std::vector<BottSample> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double x = n == 1 ? 0.0 : -R + 2 * R * i / (n - 1);
      double y = n == 1 ? 0.0 : -R + 2 * R * j / (n - 1);
      Mat T(2, 2);
      T << 0, cplx(x, -y), cplx(x, y), 0;
      out.push_back({x, y, T});
    }
  return out;
}

UnitaryLoop chiral_loop(const TightBindingModel& m, int nk, const Tolerance& tol) {
  if (!m.chiral || !m.cell_grading || !m.cell_base)
    throw Error(ErrorKind::Precondition, "chiral_loop: model needs a chiral grading and a base OSU");
  Grading g = Grading::inner(*m.cell_grading);
  Osu e{*m.cell_base, g, std::nullopt};
  SymmetryData s;
  s.grading = g;
  s.chiral = true;
  UnitaryLoop loop;
  for (int j = 0; j < nk; ++j) {
    double k = 2 * M_PI * j / nk;
    Insulator ins = flatten(bloch(m, k), std::nullopt, s, tol);
    loop.samples.push_back(chiral_reduction(ins, g, e, tol));
    loop.grid.push_back(k);
  }
  return loop;
}

}  // namespace kc
