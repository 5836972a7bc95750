#include "kcayley/cli.hpp"
#include "kcayley/clifford.hpp"
#include "kcayley/models.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace kc;

namespace {

py::dict restricted(const RestrictedOperator& r) {
  py::dict d;
  d["Q"] = r.Q;
  d["op"] = r.op;
  d["ambient"] = r.ambient();
  return d;
}

py::dict cycle_dict(const FiniteKasparovCycle& c) {
  py::dict d;
  d["Q"] = c.Q;
  d["op"] = c.op;
  d["grading"] = c.grading.G;
  d["left_gens"] = c.left_gens;
  d["degenerate"] = c.degenerate;
  return d;
}

Osu osu(const Mat& U, const Mat& G) { return make_osu(U, Grading::inner(G)); }

TightBindingModel model(const std::string& name, const std::map<std::string, double>& p) {
  auto get = [&](const char* k, double d) {
    auto it = p.find(k);
    return it == p.end() ? d : it->second;
  };
  if (name == "ssh") return ssh_model(get("t1", 0.5), get("t2", 1.0));
  if (name == "kitaev") return kitaev_chain(get("mu", 0.5), get("t", 1.0), get("delta", 0.8));
  throw Error(ErrorKind::InvalidInput, "unknown model '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_kcayley, m) {
  m.doc() = "Cayley transforms, van Daele K-theory and Kasparov cycles on finite matrix models";
  m.attr("__version__") = KCAYLEY_VERSION;

  static PyObject* err = PyErr_NewException("kcayley.KCayleyError", PyExc_RuntimeError, nullptr);
  m.attr("KCayleyError") = py::handle(err);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(err, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  m.def("cayley", [](const Mat& T) { return cayley(T); }, py::arg("T"));
  m.def("cayley_inv", [](const Mat& V) { return restricted(cayley_inv(V)); }, py::arg("V"));
  m.def("graded_cayley", [](const Mat& T, const Mat& e, const Mat& G) { return graded_cayley(T, osu(e, G)).U; },
        py::arg("T"), py::arg("e"), py::arg("grading"));
  m.def("graded_cayley_inv",
        [](const Mat& U, const Mat& e, const Mat& G) { return restricted(graded_cayley_inv(osu(U, G), osu(e, G))); },
        py::arg("U"), py::arg("e"), py::arg("grading"));

  m.def(
      "clifford",
      [](int p, int q) {
        auto c = build_clifford(p, q);
        py::dict d;
        d["e_gens"] = c.e_gens;
        d["f_gens"] = c.f_gens;
        d["grading"] = c.grading.G;
        d["max_residual"] = verify_clifford(c).max_residual;
        return d;
      },
      py::arg("p"), py::arg("q"));
  m.def("graded_tensor",
        [](const Mat& a, const Mat& ga, const Mat& b, const Mat& gb) {
          return graded_tensor(a, Grading::inner(ga), b, Grading::inner(gb));
        },
        py::arg("a"), py::arg("grading_a"), py::arg("b"), py::arg("grading_b"));

  m.def("graph_projection", [](const Mat& T, const Mat& G) { return graph_projection(T, Grading::inner(G)).P; },
        py::arg("T"), py::arg("grading"));
  m.def("bott_projector", &bott_projector, py::arg("x"), py::arg("y"));

  m.def("vd_boundary", [](const Mat& x, const Mat& G) { return vd_boundary(x, Grading::inner(G)).U; },
        py::arg("x"), py::arg("grading"));
  m.def("boundary_cycle",
        [](const Mat& x, const Mat& G) { return cycle_dict(boundary_cycle_unbounded(x, Grading::inner(G))); },
        py::arg("x"), py::arg("grading"));

  m.def(
      "winding_number",
      [](const std::vector<Mat>& samples) {
        UnitaryLoop loop;
        loop.samples = samples;
        for (size_t j = 0; j < samples.size(); ++j) loop.grid.push_back(2 * M_PI * j / samples.size());
        return winding_number(loop);
      },
      py::arg("samples"));
  m.def(
      "chiral_winding",
      [](const std::string& name, const std::map<std::string, double>& params, int nk) {
        return winding_number(chiral_loop(model(name, params), nk));
      },
      py::arg("model"), py::arg("params") = std::map<std::string, double>{}, py::arg("nk") = 128);
  m.def(
      "edge_invariants",
      [](const std::string& name, const std::map<std::string, double>& params, int L) {
        auto e = edge_invariants(halfspace(model(name, params), L));
        py::dict d;
        d["in_gap"] = e.in_gap;
        d["rank"] = e.p_delta_rank;
        d["chiral"] = e.chiral;
        d["signed_left"] = e.signed_left;
        d["signed_right"] = e.signed_right;
        return d;
      },
      py::arg("model"), py::arg("params") = std::map<std::string, double>{}, py::arg("L") = 40);

  m.def(
      "circle_index",
      [](int N) {
        PairFamily fam = [](int n) {
          auto c = circle_spectral_triple(n);
          return std::make_pair(c.u, c.D);
        };
        auto p = index_pairing(fam, N);
        py::dict d;
        d["spectral_flow"] = p.sf;
        d["kernel"] = p.kernel.value();
        d["agree"] = p.agree;
        return d;
      },
      py::arg("N"));
  m.def(
      "product_rep",
      [](const Mat& u, const Mat& D) {
        auto r = kasparov_product_rep(u, D);
        py::dict d;
        d["cycle"] = cycle_dict(r.cycle);
        d["commutator_norm"] = r.commutator_norm;
        d["positivity_min"] = r.positivity_min;
        return d;
      },
      py::arg("u"), py::arg("D"));

  m.def(
      "run_cli",
      [](const std::string& command, const std::string& suite, const std::map<std::string, std::string>& flags) {
        auto cfg = cli::resolve_config(command, suite, flags, std::nullopt, nullptr);
        auto r = cli::run(cfg);
        return py::make_tuple(cli::render_json(r), r.exit_code);
      },
      py::arg("command"), py::arg("suite") = "", py::arg("flags") = std::map<std::string, std::string>{});
}
