#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <variant>

#include "crocco/cli.hpp"
#include "crocco/errors.hpp"
#include "crocco/kolmogorov.hpp"
#include "crocco/problem.hpp"
#include "crocco/solver.hpp"

namespace py = pybind11;
using namespace crocco;

namespace {

using Data2 = std::variant<double, std::function<double(double, double)>>;

ScalarField2 as_field(const Data2& d) {
  if (const double* v = std::get_if<double>(&d)) {
    const double c = *v;
    return [c](double, double) { return c; };
  }
  return std::get<1>(d);
}

py::array_t<double> to_numpy(const Array3& a) {
  const py::ssize_t n0 = a.extent(0), n1 = a.extent(1), n2 = a.extent(2);
  py::array_t<double> out({n0, n1, n2});
  std::copy(a.data().begin(), a.data().end(), out.mutable_data());
  return out;
}

py::array_t<double> history_array(const FieldHistory& h) {
  const py::ssize_t nt = static_cast<py::ssize_t>(h.snapshots.size());
  const py::ssize_t nx = h.grid.nx + 1, ny = h.grid.ny + 1;
  py::array_t<double> out({nt, nx, ny});
  double* p = out.mutable_data();
  for (const auto& s : h.snapshots) p = std::copy(s.u.data().begin(), s.u.data().end(), p);
  return out;
}

KernelPoint point(const std::tuple<double, double, double>& z) {
  return {std::get<0>(z), std::get<1>(z), std::get<2>(z)};
}

py::dict entry_dict(const ScenarioOutput& out) {
  py::dict verdicts;
  for (const auto& v : out.report.verdicts()) verdicts[py::str(v.name)] = v.pass;
  py::dict values;
  for (const auto& e : out.report.entries()) {
    if (e.text.empty()) values[py::str(e.key)] = e.value;
    else values[py::str(e.key)] = e.text;
  }
  py::dict r;
  r["scenario"] = out.scenario;
  r["header"] = out.header;
  r["report_text"] = out.report.to_text();
  r["report_csv"] = out.report.to_csv();
  r["tables"] = out.tables;
  r["verdicts"] = verdicts;
  r["values"] = values;
  r["all_pass"] = out.report.all_pass();
  return r;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Regularized Crocco-variable boundary-layer solver and Kolmogorov-operator checks";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

  m.def("version", &version);
  m.def("scenario_catalog", &scenario_catalog);

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init([](int nx, int ny, int nt, double length, double horizon) {
             GridSpec g{nx, ny, nt, length, horizon};
             g.check();
             return g;
           }),
           py::arg("nx") = 64, py::arg("ny") = 64, py::arg("nt") = 64, py::arg("length") = 2.0,
           py::arg("horizon") = 0.5)
      .def_readonly("nx", &GridSpec::nx)
      .def_readonly("ny", &GridSpec::ny)
      .def_readonly("nt", &GridSpec::nt)
      .def_readonly("length", &GridSpec::length)
      .def_readonly("horizon", &GridSpec::horizon)
      .def_property_readonly("dx", &GridSpec::dx)
      .def_property_readonly("dy", &GridSpec::dy)
      .def_property_readonly("dt", &GridSpec::dt)
      .def("id", &GridSpec::id)
      .def("__repr__", [](const GridSpec& g) { return "GridSpec(" + g.id() + ")"; });

  m.def(
      "coefficients_at",
      [](const std::string& flow, double x, double y, double t, double length, double horizon) {
        const auto c = coefficients_at(builtin_flow(flow, length, horizon), x, y, t);
        py::dict d;
        d["a"] = c.a;
        d["b"] = c.b;
        d["c"] = c.c;
        d["c_alt"] = c.c_alt;
        d["px_over_u"] = c.px_over_u;
        return d;
      },
      py::arg("flow"), py::arg("x"), py::arg("y"), py::arg("t"), py::arg("length") = 2.0,
      py::arg("horizon") = 0.5);

  m.def(
      "solve",
      [](const std::string& flow, const GridSpec& grid, double eps, const Data2& w0, const Data2& w1,
         const Data2& v0) {
        ProblemData data{as_field(w0), as_field(w1), as_field(v0)};
        const auto problem = assemble(builtin_flow(flow, grid.length, grid.horizon), data, grid);
        return history_array(solve(problem, eps));
      },
      py::arg("flow"), py::arg("grid"), py::arg("eps"), py::arg("w0"), py::arg("w1"), py::arg("v0"),
      "Solution values indexed (n, i, j); w0(x, y), w1(y, t), v0(x, t) are callables or constants.");

  m.def(
      "validate",
      [](const std::string& flow, const GridSpec& grid, const Data2& w0, const Data2& w1, const Data2& v0) {
        ProblemData data{as_field(w0), as_field(w1), as_field(v0)};
        const auto rep = validate(data, builtin_flow(flow, grid.length, grid.horizon), grid);
        py::list issues;
        for (const auto& i : rep.issues) {
          py::dict d;
          d["condition"] = i.condition;
          d["location"] = i.location;
          d["margin"] = i.margin;
          d["message"] = i.message;
          issues.append(d);
        }
        return py::make_tuple(issues, rep.c0);
      },
      py::arg("flow"), py::arg("grid"), py::arg("w0"), py::arg("w1"), py::arg("v0"));

  m.def(
      "gamma0", [](std::tuple<double, double, double> z, std::tuple<double, double, double> zeta) {
        return gamma0(point(z), point(zeta));
      },
      py::arg("z"), py::arg("zeta"));
  m.def("gamma0_mass", [](double s) { return gamma0_mass(s); }, py::arg("s"));
  m.def(
      "dilate",
      [](std::tuple<double, double, double> z, double mu) {
        const auto d = dilate(point(z), mu);
        return std::make_tuple(d.x, d.y, d.t);
      },
      py::arg("z"), py::arg("mu"));
  m.def(
      "dilation_defect", [](std::tuple<double, double, double> z, double mu) { return dilation_defect(point(z), mu); },
      py::arg("z"), py::arg("mu"));

  py::class_<Cutoff>(m, "Cutoff")
      .def(py::init([](double theta, double r, double alpha1, double beta) {
             return Cutoff(CutoffSpec{theta, r, alpha1, beta});
           }),
           py::arg("theta") = 0.01, py::arg("r") = 0.009, py::arg("alpha1") = 0.04, py::arg("beta") = 0.9)
      .def("chi", &Cutoff::chi)
      .def("phi0", &Cutoff::phi0, py::arg("x"), py::arg("t"))
      .def("phi1", &Cutoff::phi1, py::arg("y"))
      .def("phi", [](const Cutoff& c, double x, double y, double t) { return c.phi({x, y, t}); }, py::arg("x"),
           py::arg("y"), py::arg("t"))
      .def("transport_phi0", &Cutoff::transport_phi0, py::arg("x"), py::arg("y"), py::arg("t"))
      .def(
          "certify",
          [](const Cutoff& c, int n) {
            py::list out;
            for (const auto& chk : certify_cutoff(c, n)) {
              py::dict d;
              d["item"] = chk.item;
              d["pass"] = chk.pass;
              d["worst"] = chk.worst;
              d["detail"] = chk.detail;
              out.append(d);
            }
            return out;
          },
          py::arg("n") = 33);

  m.def(
      "solve_model",
      [](const std::string& kind, double lambda, const std::string& data, int n, std::uint64_t seed,
         bool periodic) {
        ModelProblem p{model_scenarios(kind, lambda, seed), model_data(data),
                       periodic ? XBoundary::periodic : XBoundary::dirichlet};
        return to_numpy(solve_model(p, n, n, 2 * n).values());
      },
      py::arg("kind") = "constant", py::arg("lambda_") = 1.0, py::arg("data") = "smooth", py::arg("n") = 32,
      py::arg("seed") = 1, py::arg("periodic") = true, "Model field on the past unit box, indexed (n, i, j).");

  m.def(
      "run_scenario",
      [](const std::string& text, const std::string& name) {
        const auto config = parse_config_text(text, name);
        ScenarioOutput out;
        {
          py::gil_scoped_release release;
          out = run_scenario(config);
        }
        return entry_dict(out);
      },
      py::arg("config_text"), py::arg("name") = "<python>");
}
