#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "momentlab/density.hpp"
#include "momentlab/errors.hpp"
#include "momentlab/models_io.hpp"
#include "momentlab/nevanlinna.hpp"
#include "momentlab/nextremal.hpp"
#include "momentlab/serialize.hpp"
#include "momentlab/verify.hpp"

namespace py = pybind11;
using namespace momentlab;

namespace {

Window to_window(std::pair<double, double> w) {
  if (!(w.first < w.second)) throw ConfigError("window must satisfy lo < hi");
  return {w.first, w.second};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Indeterminate moment problems: polynomials, Nevanlinna functions, N-extremal measures";

  static py::exception<Error> base_error(m, "Error");
  static py::exception<ConfigError> config_error(m, "ConfigError", base_error.ptr());
  static py::exception<NumericError> numeric_error(m, "NumericError", base_error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      py::set_error(config_error, e.what());
    } catch (const NumericError& e) {
      py::set_error(numeric_error, e.what());
    } catch (const Error& e) {
      py::set_error(base_error, e.what());
    }
  });

  py::enum_<Precision>(m, "Precision")
      .value("standard", Precision::Standard)
      .value("extended", Precision::Extended);

  py::class_<Settings>(m, "Settings")
      .def(py::init<>())
      .def_readwrite("precision", &Settings::precision)
      .def_readwrite("rel_tol", &Settings::rel_tol)
      .def_readwrite("tail_window", &Settings::tail_window)
      .def_readwrite("hard_cap", &Settings::hard_cap)
      .def_readwrite("tol_det", &Settings::tol_det)
      .def_readwrite("tol_omega", &Settings::tol_omega)
      .def_readwrite("refinement_tol", &Settings::refinement_tol)
      .def_readwrite("eps_mass", &Settings::eps_mass)
      .def_readwrite("c_zero_tol", &Settings::c_zero_tol);

  py::class_<JacobiModel>(m, "JacobiModel")
      .def_property_readonly("name", &JacobiModel::name)
      .def_property_readonly("identity", &JacobiModel::identity)
      .def_property_readonly("max_index", &JacobiModel::max_index)
      .def("coeff", [](const JacobiModel& model, std::size_t n) {
        const Coefficients c = model.coeff(n);
        return std::make_pair(c.a, c.b);
      })
      .def("shifted", &JacobiModel::shifted);

  m.def("geometric", &builtin_geometric, py::arg("ratio") = 2.0, py::arg("scale") = 1.0,
        py::arg("b") = 0.0);
  m.def("load_model", [](const std::string& path) { return load_model(path); }, py::arg("path"));
  m.def("parse_model_csv", &parse_model_csv, py::arg("text"), py::arg("origin") = "table");

  m.def(
      "eval_pq",
      [](const JacobiModel& model, Complex z, std::size_t n, Precision precision) {
        const PQValues v = eval_pq(model, z, n, precision);
        return std::make_pair(v.p, v.q);
      },
      py::arg("model"), py::arg("z"), py::arg("n"), py::arg("precision") = Precision::Standard);

  m.def(
      "sequence",
      [](const JacobiModel& model, Complex z, const std::string& kind, const Settings& s) {
        const SequenceKind k = kind == "q" ? SequenceKind::Q : SequenceKind::P;
        if (kind != "p" && kind != "q") throw ConfigError("kind must be 'p' or 'q'");
        const TruncatedVector v = adaptive_sequence(model, z, k, s);
        return std::make_pair(v.entries, v.tail_estimate);
      },
      py::arg("model"), py::arg("z"), py::arg("kind") = "p", py::arg("settings") = Settings{});

  py::class_<NevanlinnaValue>(m, "NevanlinnaValue")
      .def_readonly("u", &NevanlinnaValue::u)
      .def_readonly("v", &NevanlinnaValue::v)
      .def_readonly("A", &NevanlinnaValue::A)
      .def_readonly("B", &NevanlinnaValue::B)
      .def_readonly("C", &NevanlinnaValue::C)
      .def_readonly("D", &NevanlinnaValue::D)
      .def_readonly("n_used", &NevanlinnaValue::n_used)
      .def_readonly("err_estimate", &NevanlinnaValue::err_estimate)
      .def("det_residual", &NevanlinnaValue::det_residual);

  m.def("nevanlinna", &nev_series, py::arg("model"), py::arg("u"), py::arg("v") = Complex(0.0),
        py::arg("settings") = Settings{});
  m.def("nevanlinna_partial", &nev_partial, py::arg("model"), py::arg("u"), py::arg("v"), py::arg("n"),
        py::arg("precision") = Precision::Standard);
  m.def("nevanlinna_determinant", &nev_determinant, py::arg("model"), py::arg("u"), py::arg("v"),
        py::arg("n"), py::arg("precision") = Precision::Standard);

  m.def(
      "find_zeros",
      [](const JacobiModel& model, const std::string& which, double anchor,
         std::pair<double, double> window, const Settings& s) {
        return find_zeros(model, parse_zero_target(which), anchor, to_window(window), s).points;
      },
      py::arg("model"), py::arg("which"), py::arg("anchor"), py::arg("window") = std::make_pair(-8.0, 8.0),
      py::arg("settings") = Settings{});

  py::class_<DiscreteMeasure>(m, "DiscreteMeasure")
      .def_readonly("t", &DiscreteMeasure::t)
      .def_property_readonly("points", [](const DiscreteMeasure& d) { return d.support.points; })
      .def_readonly("masses", &DiscreteMeasure::masses)
      .def_readonly("captured_mass", &DiscreteMeasure::captured_mass)
      .def("to_json", &measure_json);

  m.def(
      "measure",
      [](const JacobiModel& model, double t, std::pair<double, double> window, const Settings& s) {
        return measure_for_t(model, t, to_window(window), s);
      },
      py::arg("model"), py::arg("t"), py::arg("window") = std::make_pair(-8.0, 8.0),
      py::arg("settings") = Settings{});
  m.def("measure_from_json", &parse_measure_json, py::arg("text"));

  m.def(
      "stieltjes_residual",
      [](const JacobiModel& model, const DiscreteMeasure& mu, Complex z, const Settings& s) {
        return stieltjes_check(model, mu, z, s).residual;
      },
      py::arg("model"), py::arg("measure"), py::arg("z") = Complex(0.0, 1.0), py::arg("settings") = Settings{});

  m.def(
      "density",
      [](const JacobiModel& model, const std::string& kind, double v0, std::size_t m_max,
         std::vector<std::string> targets, std::optional<std::pair<double, double>> window,
         const Settings& s) {
        const FamilyKind k = parse_family_kind(kind);
        const Window w = window ? to_window(*window) : window_for_members(model, k, v0, m_max, s);
        const FamilySpec family = build_family(model, k, v0, w, s);
        std::vector<NamedTarget> named;
        for (const auto& t : targets) named.push_back(make_target(model, family, t, s));
        return density_json(projection_residuals(family, named, m_max));
      },
      py::arg("model"), py::arg("kind") = "P", py::arg("v0") = 0.0, py::arg("m_max") = 40,
      py::arg("targets") = std::vector<std::string>{"e0", "e1", "e5", "pv0"}, py::arg("window") = py::none(),
      py::arg("settings") = Settings{},
      "DensityReport as a JSON string.");

  m.def(
      "lemma32_finite",
      [](std::size_t dim, std::vector<double> a, std::size_t m) {
        const Lemma32Result r = lemma32_finite(dim, a, m);
        return std::make_pair(r.residual, r.closed_form);
      },
      py::arg("basis_dim"), py::arg("a"), py::arg("m"));

  m.def(
      "verify",
      [](const JacobiModel& model, const std::string& suite, const Settings& s) {
        std::vector<std::tuple<std::string, bool, double, double>> out;
        for (const auto& line : run_suite(model, suite, s))
          out.emplace_back(line.suite + "/" + line.name, line.pass, line.residual, line.threshold);
        return out;
      },
      py::arg("model"), py::arg("suite") = "identities", py::arg("settings") = Settings{});
}
