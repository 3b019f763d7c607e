#include "kreinspec/app.hpp"
#include "kreinspec/config.hpp"
#include "kreinspec/dynamo.hpp"
#include "kreinspec/error.hpp"
#include "kreinspec/numkit.hpp"
#include "kreinspec/squire.hpp"
#include "kreinspec/toy_model.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace kreinspec;

namespace {

QuarticCoeffs to_coeffs(const std::array<double, 4>& a) { return {a[0], a[1], a[2], a[3]}; }

}  // namespace

PYBIND11_MODULE(_kreinspec, m) {
  m.doc() = "Native core of kreinspec";

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  static py::exception<InvalidInput> invalid(m, "InvalidInput", PyExc_ValueError);
  static py::exception<Ambiguity> ambiguity(m, "AmbiguityError", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InvalidInput& e) {
      invalid(e.what());
    } catch (const AmbiguousBracket& e) {
      ambiguity(e.what());
    } catch (const Ambiguity& e) {
      ambiguity(e.what());
    } catch (const Error& e) {
      error(e.what());
    }
  });

  m.def("version", &version);

  m.def(
      "two_by_two_eigs",
      [](double x, double y, cplx w) {
        const auto s = toy::two_by_two_eigs({x, y, w});
        return py::make_tuple(s.plus, s.minus, s.at_exceptional_point);
      },
      py::arg("x"), py::arg("y"), py::arg("w"),
      "Closed-form eigenvalues (plus, minus, at_exceptional_point) of [[x+y, w], [-conj(w), x-y]].");

  py::class_<toy::ToyParams>(m, "ToyParams")
      .def(py::init<>())
      .def(py::init([](py::kwargs kw) {
        toy::ToyParams p;
        for (const auto& [k, v] : kw) p.at(py::cast<std::string>(k)) = py::cast<double>(v);
        return p;
      }))
      .def_readwrite("x1", &toy::ToyParams::x1)
      .def_readwrite("y1", &toy::ToyParams::y1)
      .def_readwrite("w1", &toy::ToyParams::w1)
      .def_readwrite("x2", &toy::ToyParams::x2)
      .def_readwrite("y2", &toy::ToyParams::y2)
      .def_readwrite("w2", &toy::ToyParams::w2)
      .def_readwrite("z", &toy::ToyParams::z)
      .def("__repr__", [](const toy::ToyParams& p) {
        std::string s = "ToyParams(";
        for (std::size_t i = 0; i < toy::kToyParamNames.size(); ++i) {
          s += (i ? ", " : "") + std::string(toy::kToyParamNames[i]) + "=" + format_number(p.at(toy::kToyParamNames[i]));
        }
        return s + ")";
      });

  m.def("assemble_h4", [](const toy::ToyParams& p) { return Eigen::MatrixXd(toy::assemble_h4(p)); },
        "Real 4x4 toy-model matrix.");
  m.def(
      "char_coeffs",
      [](const toy::ToyParams& p) {
        const auto c = toy::char_coeffs(p);
        return std::array<double, 4>{c.a3, c.a2, c.a1, c.a0};
      },
      "Coefficients (a3, a2, a1, a0) of det(H - l I) = l^4 + a3 l^3 + a2 l^2 + a1 l + a0.");
  m.def(
      "triple_root_params",
      [](int epsilon, int delta) {
        const auto s = toy::triple_root_params(epsilon, delta);
        py::dict d;
        d["beta_c"] = s.beta_c;
        d["z_c"] = s.z_c;
        d["x1_c"] = s.x1_c;
        d["x2_c"] = s.x2_c;
        d["y1_c"] = s.y1_c;
        d["y2_c"] = s.y2_c;
        d["lambda4_c"] = s.lambda4_c;
        d["params"] = toy::to_toy_params(s);
        return d;
      },
      py::arg("epsilon") = 1, py::arg("delta") = 1);
  m.def(
      "blowup_path", [](double t) { return toy::blowup_path(toy::triple_root_params(1, 1), t); },
      py::arg("t"), "Toy parameters on the one-parameter deformation through the triple point.");

  m.def("quartic_discriminant", [](const std::array<double, 4>& a) { return quartic_discriminant(to_coeffs(a)); },
        py::arg("coeffs"), "Discriminant of l^4 + a3 l^3 + a2 l^2 + a1 l + a0 given (a3, a2, a1, a0).");
  m.def("poly_roots", [](const std::vector<cplx>& c) { return poly_roots(c); }, py::arg("coeffs"),
        "Roots of a monic polynomial, coefficients in descending order.");
  m.def("dense_eigs", [](const Eigen::MatrixXcd& a) { return dense_eigs(a); }, py::arg("matrix"));
  m.def(
      "jordan_structure",
      [](const Eigen::MatrixXcd& a, const std::vector<cplx>& cluster, double rank_scale) {
        NumkitTolerances tol;
        tol.rank_scale = rank_scale;
        const auto r = jordan_structure(a, make_cluster(cluster), tol);
        py::dict d;
        d["eigenvalue"] = r.eigenvalue;
        d["algebraic"] = r.algebraic;
        d["geometric"] = r.geometric;
        d["rank_filtration"] = r.rank_filtration;
        d["jordan_type"] = std::string(to_string(r.jordan_type));
        return d;
      },
      py::arg("matrix"), py::arg("cluster"), py::arg("rank_scale") = NumkitTolerances{}.rank_scale);

  m.def(
      "dynamo_spectrum",
      [](int l, int n, const std::string& bc, double c, double zeta, bool constant) {
        dynamo::DynamoConfig cfg;
        cfg.l = l;
        cfg.N = n;
        cfg.bc = dynamo::boundary_kind_from_string(bc);
        cfg.profile.kind = constant ? dynamo::AlphaProfile::Kind::Constant : dynamo::AlphaProfile::Kind::Polynomial;
        cfg.profile.C = c;
        cfg.profile.zeta = zeta;
        return dynamo::dynamo_spectrum(cfg);
      },
      py::arg("l") = 1, py::arg("N") = 100, py::arg("bc") = "realistic", py::arg("C") = 1.0,
      py::arg("zeta") = 0.0, py::arg("constant") = false, "Eigenvalues sorted by real part, descending.");

  m.def(
      "squire_spectrum",
      [](double g, double nu, double b, int n, int k) {
        squire::SquireConfig cfg;
        cfg.g = g;
        cfg.nu = nu;
        cfg.b = b;
        cfg.N = n;
        return squire::squire_spectrum(cfg, k).values;
      },
      py::arg("g"), py::arg("nu"), py::arg("b"), py::arg("N") = 64, py::arg("k") = 10,
      "The k eigenvalues of smallest real part.");

  m.def(
      "run",
      [](const std::string& config_json) {
        const auto cfg = parse_run_config(config_json);
        RunResult r;
        {
          py::gil_scoped_release release;
          r = execute(cfg);
        }
        return py::make_tuple(branches_csv(r.branches), ep_report(cfg, r));
      },
      py::arg("config_json"), "Runs a sweep configuration; returns (branches_csv, report_json).");
}
