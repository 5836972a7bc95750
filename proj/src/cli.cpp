#include "kcayley/cli.hpp"

#include "kcayley/clifford.hpp"
#include "kcayley/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

namespace kc::cli {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos == v.size() && std::isfinite(d)) return d;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::InvalidInput, "invalid value for " + key + ": '" + v + "'");
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    long long i = std::stoll(v, &pos);
    if (pos == v.size()) return i;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::InvalidInput, "invalid integer for " + key + ": '" + v + "'");
}

const std::map<std::string, std::vector<std::string>>& model_params() {
  static const std::map<std::string, std::vector<std::string>> m = {
      {"ssh", {"t1", "t2"}}, {"kitaev", {"mu", "t", "delta"}}, {"circle", {}}};
  return m;
}

double param(const RunConfig& cfg, const std::string& key, double fallback) {
  auto it = cfg.params.find(key);
  return it == cfg.params.end() ? fallback : it->second;
}

void check_params(const RunConfig& cfg) {
  auto it = model_params().find(cfg.model);
  if (it == model_params().end()) throw Error(ErrorKind::InvalidInput, "unknown model '" + cfg.model + "'");
  for (const auto& [k, v] : cfg.params)
    if (std::find(it->second.begin(), it->second.end(), k) == it->second.end())
      throw Error(ErrorKind::InvalidInput, "parameter " + k + " does not apply to model " + cfg.model);
}

TightBindingModel lattice_model(const RunConfig& cfg) {
  check_params(cfg);
  if (cfg.model == "ssh") return ssh_model(param(cfg, "t1", 0.5), param(cfg, "t2", 1.0));
  if (cfg.model == "kitaev") return kitaev_chain(param(cfg, "mu", 0.5), param(cfg, "t", 1.0), param(cfg, "delta", 0.8));
  throw Error(ErrorKind::InvalidInput, "model '" + cfg.model + "' is not a lattice model");
}

Json echo_inputs(const RunConfig& cfg) {
  Json in;
  in["command"] = cfg.command;
  if (!cfg.suite.empty()) in["suite"] = cfg.suite;
  in["model"] = cfg.model;
  Json p = Json::object();
  for (const auto& [k, v] : cfg.params) p[k] = v;
  in["params"] = p;
  in["L"] = cfg.L;
  in["N"] = cfg.N;
  in["nk"] = cfg.nk;
  in["seed"] = cfg.seed;
  Tolerance t = cfg.tolerance();
  in["tol"] = {{"eq_tol", t.eq_tol}, {"rank_tol", t.rank_tol}, {"kernel_tol", t.kernel_tol}};
  return in;
}

Json integer_invariant(int value, const std::vector<std::pair<std::string, int>>& methods) {
  Json j;
  j["value"] = value;
  Json m = Json::object();
  bool agree = true;
  for (const auto& [name, v] : methods) {
    m[name] = v;
    agree = agree && v == value;
  }
  j["methods"] = m;
  j["agree"] = agree;
  return j;
}

void require_gap(const TightBindingModel& m, int nk, const Tolerance& tol, Report& r) {
  auto [gap, k] = bulk_gap([&](double q) { return bloch(m, q); }, std::max(nk, 256));
  r.residuals["bulk_gap"] = gap;
  if (gap < tol.kernel_tol) {
    std::ostringstream os;
    os << "model " << m.name << " is gapless (min |E| = " << gap << " at k = " << k << ")";
    throw Error(ErrorKind::Gapless, os.str(), gap);
  }
}

void flag_disagreement(Report& r) {
  for (auto& [name, inv] : r.invariants.items())
    if (inv.is_object() && inv.contains("agree") && !inv["agree"].get<bool>())
      r.failures.push_back(name + ": methods disagree");
  if (!r.failures.empty()) {
    r.status = "fail";
    r.exit_code = ExitCode::SuiteFailure;
  }
}

Osu chiral_base(const TightBindingModel& m, int L) {
  return make_osu(kron(eye(L), *m.cell_base), *m.symmetry(L).grading);
}

// Random matrices for the verification suites.
struct Sampler {
  std::mt19937_64 gen;
  explicit Sampler(std::uint64_t seed) : gen(seed) {}
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen); }
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(gen); }
  Mat gaussian(Eigen::Index r, Eigen::Index c) {
    Mat M(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < c; ++j) M(i, j) = cplx(normal(), normal()) / std::sqrt(2.0);
    return M;
  }
  Mat hermitian(Eigen::Index n) {
    Mat A = gaussian(n, n);
    return 0.5 * (A + A.adjoint());
  }
  Mat unitary(Eigen::Index n) {
    Eigen::HouseholderQR<Mat> qr(gaussian(n, n));
    Mat Q = qr.householderQ();
    Mat R = qr.matrixQR();
    for (Eigen::Index j = 0; j < n; ++j)
      if (std::abs(R(j, j)) > 0) Q.col(j) *= R(j, j) / std::abs(R(j, j));
    return Q;
  }
  Mat symmetry(Eigen::Index n, Eigen::Index neg) {
    Mat U = unitary(n);
    Vec d = Vec::Ones(n);
    for (Eigen::Index i = 0; i < neg; ++i) d(i) = -1.0;
    return U * d.asDiagonal() * U.adjoint();
  }
};

struct Assertion {
  std::string name;
  double worst = 0;
  double bound = 0;
  bool at_least = false;  // pass when worst ≥ bound rather than worst < bound
  bool pass() const { return at_least ? worst >= bound : worst < bound; }
};

using Suite = std::function<std::vector<Assertion>(const RunConfig&)>;

Mat offdiag(const Mat& lower) {
  Eigen::Index m = lower.rows();
  Mat Z = Mat::Zero(m, m);
  return block2(Z, Mat(lower.adjoint()), lower, Z);
}

std::vector<Assertion> suite_cayley(const RunConfig& cfg) {
  Sampler s(cfg.seed);
  Tolerance tol = cfg.tolerance();
  double rt = 0, grt = 0, fwd = 0, inv = 0;
  for (int i = 0; i < 200; ++i) {
    Mat T = s.hermitian(s.integer(2, 32));
    rt = std::max(rt, maxabs(cayley_inv(cayley(T, tol), tol).ambient() - T));
  }
  for (int i = 0; i < 200; ++i) {
    Eigen::Index m = s.integer(1, 16);
    Mat W = s.unitary(m);
    Mat Wd = direct_sum(W, W);
    Mat Z = Mat::Zero(m, m);
    Grading g = Grading::inner(direct_sum(eye(m), Mat(-eye(m))));
    Osu e = make_osu(Wd * block2(Z, eye(m), eye(m), Z) * Wd.adjoint(), g);
    Mat S = s.hermitian(m);
    Mat T = Wd * block2(Z, Mat(-I * S), Mat(I * S), Z) * Wd.adjoint();
    Osu U = graded_cayley(T, e, tol);
    Mat Ci = graded_cayley_inv(U, e, tol).ambient();
    grt = std::max(grt, maxabs(Ci - T));
    fwd = std::max(fwd, maxabs(U.U - e.U - 2.0 * (T - e.U).inverse()));
    Mat Dinv = (U.U - e.U).inverse();
    inv = std::max(inv, maxabs(eye(2 * m) + Ci * Ci - 4.0 * Dinv * Dinv));
  }
  return {{"ungraded_round_trip", rt, 1e-9},
          {"graded_round_trip", grt, 1e-9},
          {"forward_identity", fwd, 1e-9},
          {"inverse_identity", inv, 1e-9}};
}

std::vector<Assertion> suite_clifford(const RunConfig&) {
  double gen = 0;
  for (int p = 0; p <= 6; ++p)
    for (int q = 0; p + q <= 6; ++q) gen = std::max(gen, verify_clifford(build_clifford(p, q), 1e-12).max_residual);
  Grading ga = Grading::inner(sigma3()), gb = cl1_grading();
  std::vector<Mat> units;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Mat u = Mat::Zero(2, 2);
      u(i, j) = 1.0;
      units.push_back(u);
    }
  std::vector<Mat> cl = {eye(2), cl1_rho()};
  double koszul = 0, eta_res = 0;
  for (const Mat& a : units)
    for (const Mat& b : cl)
      for (const Mat& c : units)
        for (const Mat& d : cl) {
          double sign = (parity(b, gb) && parity(c, ga)) ? -1.0 : 1.0;
          Mat lhs = graded_tensor(a, ga, b, gb) * graded_tensor(c, ga, d, gb);
          koszul = std::max(koszul, maxabs(lhs - sign * graded_tensor(Mat(a * c), ga, Mat(b * d), gb)));
          eta_res = std::max(eta_res, maxabs(eta(lhs, ga) - eta(graded_tensor(a, ga, b, gb), ga) *
                                                                 eta(graded_tensor(c, ga, d, gb), ga)));
        }
  for (const Mat& a : units)
    for (int k = 0; k < 2; ++k)
      eta_res = std::max(eta_res, maxabs(eta(graded_tensor(a, ga, cl[static_cast<size_t>(k)], gb), ga) -
                                         eta_basis(a, k, ga)));
  return {{"generator_relations", gen, 1e-12}, {"koszul_sign", koszul, 1e-10}, {"eta_isomorphism", eta_res, 1e-10}};
}

std::vector<Assertion> suite_bott(const RunConfig& cfg) {
  Grading g = Grading::inner(sigma3());
  double worst = 0;
  for (const auto& p : bott_plane(21, 2.0))
    worst = std::max(worst, maxabs(graph_projection(p.T, g, cfg.tolerance()).P - bott_projector(p.x, p.y)));
  return {{"graph_projection_vs_bott", worst, 1e-12}};
}

std::vector<Assertion> suite_boundary_map(const RunConfig& cfg) {
  Sampler s(cfg.seed);
  Grading g = Grading::inner(direct_sum(eye(4), Mat(-eye(4))));
  double osu = 0, tanh = 0;
  for (int i = 0; i < 100; ++i) {
    Mat T = offdiag(s.gaussian(4, 4));
    osu = std::max(osu, check_osu(vd_boundary(Mat(s.uniform(0.05, 1.0) * T / opnorm(T)), g)).worst());
    BoundaryDiagnostics d;
    boundary_cycle_unbounded(Mat(s.uniform(0.05, 0.97) * T / opnorm(T)), g, nullptr, cfg.tolerance(), &d);
    tanh = std::max(tanh, d.tanh_residual);
  }
  return {{"boundary_osu_axioms", osu, 1e-9}, {"tanh_identity", tanh, 1e-9}};
}

std::vector<Assertion> suite_bulk_boundary(const RunConfig& cfg) {
  std::vector<double> ts = {0.25, 0.5, 1.0, 2.0, 4.0};
  double mismatches = 0;
  for (double t1 : ts)
    for (double t2 : ts) {
      if (t1 == t2) continue;
      auto m = ssh_model(t1, t2);
      int w = winding_number(chiral_loop(m, cfg.nk));
      if (w != edge_invariants(halfspace(m, cfg.L)).signed_left) mismatches += 1;
    }
  return {{"winding_vs_edge_count_mismatches", mismatches, 0.5}};
}

std::vector<Assertion> suite_product(const RunConfig& cfg) {
  Sampler s(cfg.seed);
  double pos = 1e300;
  for (int i = 0; i < 100; ++i) {
    Eigen::Index n = s.integer(2, 10);
    Mat u = s.unitary(n);
    Mat D = s.hermitian(n);
    D *= s.uniform(0.05, 1.99) / opnorm(D * u - u * D);
    pos = std::min(pos, kasparov_product_rep(u, D, cfg.tolerance()).positivity_min);
  }
  auto rep = approx_unit_check({1, 2, 4, 8, 16});
  double increasing = 0;
  for (bool d : rep.decreasing) increasing += d ? 0 : 1;
  return {{"product_positivity_min", pos, -1e-10, true}, {"approx_unit_non_decreasing_vectors", increasing, 0.5}};
}

std::vector<Assertion> suite_circle(const RunConfig&) {
  PairFamily fam = [](int N) {
    auto c = circle_spectral_triple(N);
    return std::make_pair(c.u, c.D);
  };
  double off = 0;
  for (int N : {16, 32, 64}) {
    auto p = index_pairing(fam, N);
    off = std::max({off, std::abs(p.sf - 1.0), std::abs(p.kernel.value() - 1.0)});
  }
  auto r = cot_index_report({128, 256, 512});
  double cot = std::abs(r.kernel_dim - 1.0) + std::abs(static_cast<double>(r.cokernel_dim));
  return {{"circle_index_deviation", off, 0.5}, {"cot_kernel_deviation", cot, 0.5}};
}

std::vector<Assertion> suite_class_round_trip(const RunConfig& cfg) {
  Sampler s(cfg.seed);
  double mism = 0;
  for (int i = 0; i < 50; ++i) {
    Eigen::Index n = s.integer(1, 8);
    Grading g = Grading::inner(kron(eye(n), sigma3()));
    Mat c = kron(eye(n), sigma1());
    Mat sx = s.symmetry(n, s.integer(0, static_cast<int>(n)));
    Mat sy = s.symmetry(n, s.integer(0, static_cast<int>(n)));
    DkClass cls = DkClass::of(make_osu(kron(sx, sigma1()), g), make_osu(kron(sy, sigma1()), g));
    int inv = signature_invariant(cls, c);
    auto k = dk_to_kk(cls, cfg.tolerance());
    DkClass back = embed_in_ambient(kk_to_dk(k, cfg.tolerance()), k);
    if (signature_invariant(back, c) != inv) mism += 1;
  }
  return {{"signature_mismatches", mism, 0.5}};
}

const std::map<std::string, Suite>& suites() {
  static const std::map<std::string, Suite> m = {
      {"bott", suite_bott},
      {"boundary-map", suite_boundary_map},
      {"bulk-boundary", suite_bulk_boundary},
      {"cayley-roundtrip", suite_cayley},
      {"circle-index", suite_circle},
      {"class-roundtrip", suite_class_round_trip},
      {"clifford", suite_clifford},
      {"product-positivity", suite_product},
  };
  return m;
}

// Central-difference -i d/dθ and multiplication by e^{-iθ} on an M-point circle grid.
std::pair<Mat, Mat> circle_grid_pair(int M) {
  double h = 2 * M_PI / M;
  Mat D = Mat::Zero(M, M), u = Mat::Zero(M, M);
  for (int j = 0; j < M; ++j) {
    D(j, (j + 1) % M) += -I / (2 * h);
    D(j, (j + M - 1) % M) += I / (2 * h);
    u(j, j) = std::exp(-I * (j * h));
  }
  return {D, u};
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Tolerance RunConfig::tolerance() const {
  Tolerance t;
  if (tol) t.eq_tol = *tol;
  return t;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> k = {"model", "t1", "t2", "mu", "t", "delta", "L",
                                             "N",     "nk", "seed", "tol", "format", "out"};
  return k;
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "model") {
    cfg.model = value;
  } else if (key == "t1" || key == "t2" || key == "mu" || key == "t" || key == "delta") {
    cfg.params[key] = parse_double(key, value);
  } else if (key == "L" || key == "N" || key == "nk") {
    long long v = parse_int(key, value);
    if (v < 1 || v > 1 << 16) throw Error(ErrorKind::InvalidInput, key + " out of range: " + value);
    (key == "L" ? cfg.L : key == "N" ? cfg.N : cfg.nk) = static_cast<int>(v);
  } else if (key == "seed") {
    long long v = parse_int(key, value);
    if (v < 0) throw Error(ErrorKind::InvalidInput, "seed must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(v);
  } else if (key == "tol") {
    double v = parse_double(key, value);
    if (!(v > 0)) throw Error(ErrorKind::InvalidInput, "tol must be positive");
    cfg.tol = v;
  } else if (key == "format") {
    if (value != "json" && value != "csv") throw Error(ErrorKind::InvalidInput, "format must be json or csv");
    cfg.format = value;
  } else if (key == "out") {
    cfg.out = value;
  } else {
    throw Error(ErrorKind::InvalidInput, "unknown configuration key '" + key + "'");
  }
}

void apply_config_text(RunConfig& cfg, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::InvalidInput, "config line " + std::to_string(lineno) + ": expected key=value");
    apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

RunConfig resolve_config(const std::string& command, const std::string& suite,
                         const std::map<std::string, std::string>& flags,
                         const std::optional<std::string>& config_path, const char* env_tol) {
  RunConfig cfg;
  cfg.command = command;
  cfg.suite = suite;
  if (command == "product") cfg.model = "circle";
  if (env_tol && *env_tol) apply_setting(cfg, "tol", env_tol);
  if (config_path) {
    std::ifstream f(*config_path);
    if (!f) throw Error(ErrorKind::InvalidInput, "cannot read config file " + *config_path);
    std::stringstream ss;
    ss << f.rdbuf();
    apply_config_text(cfg, ss.str());
  }
  for (const auto& [k, v] : flags) apply_setting(cfg, k, v);
  return cfg;
}

const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [k, v] : suites()) n.push_back(k);
    return n;
  }();
  return names;
}

Report cmd_invariant(const RunConfig& cfg) {
  Report r;
  r.inputs = echo_inputs(cfg);
  Tolerance tol = cfg.tolerance();
  TightBindingModel m = lattice_model(cfg);
  require_gap(m, cfg.nk, tol, r);
  auto hs = halfspace(m, cfg.L);
  auto edge = edge_invariants(hs, std::nullopt, 0.05, tol);
  Insulator ins = flatten(hs.ring, std::nullopt, m.symmetry(cfg.L), tol);
  if (m.trs) r.residuals["trs"] = ins.residuals.trs;
  if (m.phs) r.residuals["phs"] = ins.residuals.phs;
  if (m.chiral) r.residuals["chiral"] = ins.residuals.chiral;

  if (m.chiral) {
    Osu e = chiral_base(m, cfg.L);
    BulkClass b = bulk_class(ins, BulkOptions{e, std::nullopt}, tol);
    UnitaryLoop loop = chiral_loop(m, cfg.nk, tol);
    int w = winding_number(loop, tol);
    r.invariants["class"] = b.cls.label;
    r.invariants["winding"] = integer_invariant(w, {{"bloch_determinant", w}, {"left_edge_count", edge.signed_left}});
    r.residuals["osu"] = b.osu_residual;
    r.residuals["reality"] = b.reality_residual;
    r.table_header = {"k", "det_phase", "E_minus", "E_plus"};
    for (size_t j = 0; j < loop.samples.size(); ++j) {
      auto ev = eig_hermitian(bloch(m, loop.grid[j]), tol);
      r.table.push_back({loop.grid[j], std::arg(loop.samples[j].determinant()), ev.values(0), ev.values(1)});
    }
  } else {
    BulkClass b = bulk_class(ins, {}, tol);
    // Majorana number: relative sign of the particle energy at the two particle-hole symmetric momenta.
    int z2 = bloch(m, 0.0)(0, 0).real() * bloch(m, M_PI)(0, 0).real() < 0 ? 1 : 0;
    int edge_z2 = (edge.p_delta_rank / 2) % 2;
    r.invariants["class"] = b.cls.label;
    r.invariants["z2"] = integer_invariant(z2, {{"bulk_sign", z2}, {"edge_mode_pairs", edge_z2}});
    r.residuals["osu"] = b.osu_residual;
    if (b.cycle) r.residuals["cycle_anticommutator"] = check_cycle(*b.cycle, tol).anticommutator;
    r.table_header = {"k", "E_minus", "E_plus"};
    for (int j = 0; j < cfg.nk; ++j) {
      double k = 2 * M_PI * j / cfg.nk;
      auto ev = eig_hermitian(bloch(m, k), tol);
      r.table.push_back({k, ev.values(0), ev.values(1)});
    }
  }
  flag_disagreement(r);
  return r;
}

Report cmd_boundary(const RunConfig& cfg) {
  Report r;
  r.inputs = echo_inputs(cfg);
  Tolerance tol = cfg.tolerance();
  TightBindingModel m = lattice_model(cfg);
  require_gap(m, cfg.nk, tol, r);
  auto hs = halfspace(m, cfg.L);
  auto edge = edge_invariants(hs, std::nullopt, 0.05, tol);
  GapLift lift = lift_flattened(hs, edge.delta, edge.margin, tol);
  Mat flat = flatten(hs.ring, std::nullopt, {}, tol).flattened;
  auto lift_profile = leakage_profile(Mat(lift.a - flat), cfg.L, hs.cell_dim);

  std::vector<std::pair<std::string, int>> methods = {{"spectral_window", edge.p_delta_rank}};
  std::vector<double> vd_profile;
  if (hs.grading) {
    Osu Y = vd_boundary(lift.a, *hs.grading, hs.real, tol);
    r.residuals["boundary_osu"] = check_osu(Y, tol).worst();
    vd_profile = leakage_profile(Mat(Y.U - vd_base(*hs.grading)), cfg.L, hs.cell_dim, 2);
    BoundaryDiagnostics d;
    auto c = boundary_cycle_unbounded(lift.a, *hs.grading, &hs.ideal_mask, tol, &d);
    methods.emplace_back("unbounded_cycle_dim", static_cast<int>(c.dim()));
    r.residuals["tanh"] = d.tanh_residual;
    r.residuals["ideal_weight"] = d.ideal_weight;
  }
  r.invariants["in_gap_modes"] = integer_invariant(edge.p_delta_rank, methods);
  r.invariants["in_gap_energies"] = edge.in_gap;
  r.invariants["delta"] = edge.delta;
  if (edge.chiral) {
    r.invariants["signed_left"] = edge.signed_left;
    r.invariants["signed_right"] = edge.signed_right;
    r.invariants["signed_total"] = edge.signed_total;
  }
  r.invariants["lift_leakage_profile"] = lift_profile;
  r.residuals["lift_leakage"] = lift.leakage;
  r.table_header = {"cell", "lift_leakage"};
  if (!vd_profile.empty()) r.table_header.push_back("boundary_leakage");
  for (int i = 0; i < cfg.L; ++i) {
    std::vector<double> row = {static_cast<double>(i), lift_profile[static_cast<size_t>(i)]};
    if (!vd_profile.empty()) row.push_back(vd_profile[static_cast<size_t>(i)]);
    r.table.push_back(row);
  }
  flag_disagreement(r);
  return r;
}

Report cmd_product(const RunConfig& cfg) {
  Report r;
  r.inputs = echo_inputs(cfg);
  check_params(cfg);
  if (cfg.model != "circle") throw Error(ErrorKind::InvalidInput, "product supports the circle model only");
  if (cfg.N < 4) throw Error(ErrorKind::InvalidInput, "product: N must be at least 4");
  Tolerance tol = cfg.tolerance();
  PairFamily fam = [](int N) {
    auto c = circle_spectral_triple(N);
    return std::make_pair(c.u, c.D);
  };
  auto p = index_pairing(fam, cfg.N, tol);
  r.invariants["index"] = integer_invariant(p.sf, {{"spectral_flow", p.sf}, {"kernel", p.kernel.value()}});
  r.invariants["kernel_dim"] = p.kernel.kernel;
  r.invariants["cokernel_dim"] = p.kernel.cokernel;

  auto [D, u] = circle_grid_pair(2 * cfg.N + 1);
  auto rep = kasparov_product_rep(u, D, tol);
  r.invariants["positivity_margin"] = rep.positivity_min;
  r.residuals["commutator_norm"] = rep.commutator_norm;
  r.residuals["product_hermitian"] = rep.hermitian_residual;
  r.residuals["anticommutator_min"] = rep.anticommutator_min;
  r.table_header = {"N", "spectral_flow", "kernel_index", "positivity_margin"};
  r.table.push_back({static_cast<double>(cfg.N), static_cast<double>(p.sf), static_cast<double>(p.kernel.value()),
                     rep.positivity_min});
  flag_disagreement(r);
  if (rep.positivity_min < -tol.eq_tol) {
    r.failures.push_back("positivity_margin: negative");
    r.status = "fail";
    r.exit_code = ExitCode::SuiteFailure;
  }
  return r;
}

Report cmd_verify(const RunConfig& cfg) {
  Report r;
  r.inputs = echo_inputs(cfg);
  auto it = suites().find(cfg.suite);
  if (it == suites().end()) throw Error(ErrorKind::InvalidInput, "unknown suite '" + cfg.suite + "'");
  auto asserts = it->second(cfg);
  Json list = Json::array();
  int passed = 0;
  for (const auto& a : asserts) {
    r.residuals[a.name] = a.worst;
    list.push_back({{"name", a.name}, {"worst", a.worst}, {"bound", a.bound}, {"pass", a.pass()}});
    if (a.pass())
      ++passed;
    else
      r.failures.push_back(a.name);
    r.table.push_back({a.worst, a.bound, a.pass() ? 1.0 : 0.0});
  }
  r.table_header = {"worst", "bound", "pass"};
  r.invariants["suite"] = cfg.suite;
  r.invariants["assertions"] = list;
  r.invariants["passed"] = passed;
  r.invariants["failed"] = static_cast<int>(asserts.size()) - passed;
  if (!r.failures.empty()) {
    r.status = "fail";
    r.exit_code = ExitCode::SuiteFailure;
  }
  return r;
}

Report run(const RunConfig& cfg) {
  try {
    if (cfg.command == "invariant") return cmd_invariant(cfg);
    if (cfg.command == "boundary") return cmd_boundary(cfg);
    if (cfg.command == "product") return cmd_product(cfg);
    if (cfg.command == "verify") return cmd_verify(cfg);
    throw Error(ErrorKind::InvalidInput, "unknown command '" + cfg.command + "'");
  } catch (const Error& e) {
    Report r;
    r.inputs = echo_inputs(cfg);
    r.status = "error";
    r.error = e.what();
    r.error_kind = to_string(e.kind());
    r.exit_code = ExitCode::InvalidInput;
    return r;
  }
}

Json to_json(const Report& r) {
  Json j;
  j["inputs"] = r.inputs;
  j["invariants"] = r.invariants;
  j["residuals"] = r.residuals;
  Json st;
  st["result"] = r.status;
  st["exit_code"] = r.exit_code;
  st["failures"] = r.failures;
  if (r.error) st["error"] = {{"kind", *r.error_kind}, {"message", *r.error}};
  j["status"] = st;
  j["version"] = KCAYLEY_VERSION;
  return j;
}

std::string render_json(const Report& r) { return to_json(r).dump(2) + "\n"; }

std::string render_csv(const Report& r) {
  std::ostringstream os;
  if (r.table.empty()) {
    os << "status," << r.status << "\n";
    if (r.error) os << "error,\"" << *r.error << "\"\n";
    return os.str();
  }
  bool named = r.inputs.value("command", "") == "verify";
  if (named) os << "name,";
  for (size_t i = 0; i < r.table_header.size(); ++i) os << (i ? "," : "") << r.table_header[i];
  os << "\n";
  std::vector<std::string> names;
  if (named)
    for (const auto& a : r.invariants["assertions"]) names.push_back(a["name"].get<std::string>());
  for (size_t row = 0; row < r.table.size(); ++row) {
    if (named) os << names[row] << ",";
    for (size_t i = 0; i < r.table[row].size(); ++i) os << (i ? "," : "") << fmt(r.table[row][i]);
    os << "\n";
  }
  return os.str();
}

std::string render(const Report& r, const std::string& format) {
  return format == "csv" ? render_csv(r) : render_json(r);
}

}  // namespace kc::cli
