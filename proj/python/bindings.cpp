#include <sstream>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pgl/besov.hpp"
#include "pgl/diagnostics.hpp"
#include "pgl/errors.hpp"
#include "pgl/harness.hpp"
#include "pgl/lorentz.hpp"
#include "pgl/snapshot.hpp"
#include "pgl/spectral.hpp"

namespace py = pybind11;
using namespace pgl;

namespace {

py::array_t<double> to_numpy(const Field& f) {
  std::vector<py::ssize_t> shape{f.components()};
  for (int a = 0; a < f.torus().dim(); ++a) shape.push_back(f.torus().n());
  py::array_t<double> out(shape);
  auto v = f.values();
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

Field from_numpy(py::array_t<double, py::array::c_style | py::array::forcecast> a, double L) {
  const int dim = static_cast<int>(a.ndim()) - 1;
  if (dim != 2 && dim != 3) throw InvalidArgument("expected an array of shape (components, N, N[, N])");
  const int n = static_cast<int>(a.shape(1));
  for (int k = 2; k <= dim; ++k)
    if (a.shape(k) != n) throw InvalidArgument("all spatial axes need the same length");
  std::vector<double> values(a.data(), a.data() + a.size());
  return Field(Torus(dim, L, n), static_cast<int>(a.shape(0)), std::move(values));
}

}  // namespace

PYBIND11_MODULE(_pglab, m) {
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<InvariantViolation>(m, "InvariantViolation", PyExc_RuntimeError);
  py::register_exception<NumericalAbort>(m, "NumericalAbort", PyExc_ArithmeticError);

  py::class_<Field>(m, "Field")
      .def(py::init(&from_numpy), py::arg("values"), py::arg("L") = 6.283185307179586)
      .def_property_readonly("dim", [](const Field& f) { return f.torus().dim(); })
      .def_property_readonly("N", [](const Field& f) { return f.torus().n(); })
      .def_property_readonly("L", [](const Field& f) { return f.torus().side_length(); })
      .def_property_readonly("components", &Field::components)
      .def("to_numpy", &to_numpy);

  m.def("load_field", &load_field, py::arg("path"));
  m.def("save_field", &save_field, py::arg("path"), py::arg("field"));
  m.def("lp_norm", py::overload_cast<const Field&, double>(&lp_norm), py::arg("field"), py::arg("p"));
  m.def(
      "lorentz_norm", [](const Field& f, double p, double r) { return lorentz_norm(f, LorentzExponents{p, r}); },
      py::arg("field"), py::arg("p"), py::arg("r"));
  m.def(
      "lorentz_norm_series",
      [](std::vector<double> t, std::vector<double> v, double q, double r) {
        return lorentz_norm(TimeSeries(std::move(t), std::move(v)), LorentzExponents{q, r});
      },
      py::arg("times"), py::arg("values"), py::arg("q"), py::arg("r"));
  m.def(
      "besov_norm", [](const Field& f, double s, double p, double r) { return besov_norm(f, s, p, r); },
      py::arg("field"), py::arg("s"), py::arg("p"), py::arg("r"));

  m.def(
      "split_intervals",
      [](std::vector<double> t, std::vector<double> v, double eta, double q, double r) {
        const auto s = split_intervals(TimeSeries(std::move(t), std::move(v)), eta, q, r);
        py::dict d;
        d["K"] = s.K;
        d["breakpoints"] = s.breakpoints;
        d["norms"] = s.per_interval_norms;
        return d;
      },
      py::arg("times"), py::arg("values"), py::arg("eta"), py::arg("q") = 2.0, py::arg("r") = 2.0);
  m.def("k_bounds", &k_bounds, py::arg("grad_energy"), py::arg("eta"));

  m.def("builtin_scenarios", &builtin_scenarios);
  m.def("builtin_scenario_text", [](const std::string& name) { return format_scenario(builtin_scenario(name)); });
  m.def(
      "run_scenario",
      [](const std::string& text, const std::string& root) {
        std::istringstream in(text);
        const auto out = run_scenario(parse_scenario(in), root);
        return py::make_tuple(out.exit_code, out.message, out.directory);
      },
      py::arg("scenario_text"), py::arg("output_root"));
}
