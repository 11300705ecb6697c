#include <sstream>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "biphase/cli.hpp"
#include "biphase/converters.hpp"
#include "biphase/curve_calculus.hpp"
#include "biphase/geodesics.hpp"
#include "biphase/io.hpp"
#include "biphase/phases.hpp"
#include "biphase/state_space.hpp"

namespace py = pybind11;
using namespace biphase;

namespace {

Basis parse_basis(const std::string& name) { return basis_from_string(name); }

StateVector make_state(const Amplitudes& amplitudes, const std::string& basis, bool normalize) {
  return normalize ? StateVector::normalized(amplitudes, parse_basis(basis))
                   : StateVector(amplitudes, parse_basis(basis));
}

Unitary3 make_unitary(const Matrix3c& entries, const std::string& basis) {
  return Unitary3(entries, parse_basis(basis));
}

py::dict report_dict(const PhaseReport& r) {
  py::dict d;
  d["pancharatnam"] = r.pancharatnam;
  d["dynamical"] = r.dynamical;
  d["geometric"] = r.geometric;
  d["visibility"] = r.visibility;
  return d;
}

std::string run_command(const std::string& command, const std::string& config,
                        const std::string& format) {
  const cli::Scenario scenario = cli::parse_scenario(io::Json::parse(config));
  const cli::CommandResult result = cli::execute(cli::command_from_string(command), scenario);
  std::ostringstream out;
  cli::render(result, cli::format_from_string(format), out);
  return out.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Phases of biphoton polarization states under loss-free phase plates";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto usage = py::register_exception<UsageError>(m, "UsageError", error.ptr());
  py::register_exception<InvalidInputError>(m, "InvalidInputError", usage.ptr());
  py::register_exception<cli::ConfigError>(m, "ConfigError", usage.ptr());
  auto numeric = py::register_exception<NumericError>(m, "NumericError", error.ptr());
  py::register_exception<IndeterminatePhaseError>(m, "IndeterminatePhaseError", numeric.ptr());
  py::register_exception<DegenerateGeodesicError>(m, "DegenerateGeodesicError", numeric.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", numeric.ptr());

  py::class_<StateVector>(m, "State")
      .def(py::init(&make_state), py::arg("amplitudes"), py::arg("basis") = "PMZ",
           py::arg("normalize") = false)
      .def_property_readonly("amplitudes", &StateVector::amplitudes)
      .def_property_readonly("basis", [](const StateVector& s) { return std::string(to_string(s.basis())); })
      .def("with_phase", &StateVector::with_phase, py::arg("alpha"))
      .def("__repr__", [](const StateVector& s) {
        return "State(" + io::dump(io::state_to_json(s), 0) + ")";
      });

  m.def("basis_change", &basis_change, "Real orthogonal matrix A with PMZ = A * FOCK.");
  m.def("to_pmz", &to_pmz, py::arg("state"));
  m.def("to_fock", &to_fock, py::arg("state"));
  m.def("inner", &inner, py::arg("a"), py::arg("b"));
  m.def("ray_distance", &ray_distance, py::arg("a"), py::arg("b"));

  py::class_<Curve>(m, "Curve")
      .def(py::init<std::vector<double>, std::vector<StateVector>>(), py::arg("parameters"),
           py::arg("states"))
      .def("__len__", &Curve::size)
      .def_property_readonly("parameters", [](const Curve& c) {
        return std::vector<double>(c.parameters().begin(), c.parameters().end());
      })
      .def_property_readonly("states", [](const Curve& c) {
        return std::vector<StateVector>(c.states().begin(), c.states().end());
      })
      .def("state", &Curve::state, py::arg("index"))
      .def("parameter", &Curve::parameter, py::arg("index"))
      .def_property_readonly("front", &Curve::front)
      .def_property_readonly("back", &Curve::back)
      .def("is_uniform", &Curve::is_uniform)
      .def("step", &Curve::step);

  m.def("gauge_transform",
        py::overload_cast<const Curve&, const std::function<double(double)>&>(&gauge_transform),
        py::arg("curve"), py::arg("alpha"));
  m.def("connection_im", &connection_im, py::arg("curve"));

  py::class_<PlateSpec>(m, "Plate")
      .def(py::init([](double delta, double chi) { return PlateSpec{delta, chi}; }),
           py::arg("delta"), py::arg("chi"))
      .def_readwrite("delta", &PlateSpec::delta)
      .def_readwrite("chi", &PlateSpec::chi)
      .def("__repr__", [](const PlateSpec& p) {
        return "Plate(delta=" + io::format_number(p.delta) + ", chi=" + io::format_number(p.chi) +
               ")";
      });

  m.def("plate_coefficients", [](const PlateSpec& spec) {
    const TransmissionPair tr = plate_coefficients(spec);
    return py::make_tuple(tr.t, tr.r);
  }, py::arg("plate"), "Transmission and reflection amplitudes (t, r).");
  m.def("g_matrix", [](Complex t, Complex r) { return g_matrix({t, r}).entries(); },
        py::arg("t"), py::arg("r"));
  m.def("q_matrix", [](const PlateSpec& spec) { return q_matrix(spec).entries(); },
        py::arg("plate"));
  m.def("q_matrix_second_derivative", &q_matrix_second_derivative, py::arg("plate"));
  m.def("compose", [](const std::vector<PlateSpec>& plates) { return compose(plates).entries(); },
        py::arg("plates"));
  m.def("apply", [](const Matrix3c& u, const StateVector& s) {
    return make_unitary(u, std::string(to_string(s.basis()))).apply(s);
  }, py::arg("matrix"), py::arg("state"));
  m.def("eigen", [](const Matrix3c& u, const std::string& basis) {
    const EigenSystem system = eigen(make_unitary(u, basis));
    py::list pairs;
    for (const EigenPair& p : system.pairs) pairs.append(py::make_tuple(p.value, p.vector));
    return pairs;
  }, py::arg("matrix"), py::arg("basis") = "PMZ",
        "(eigenvalue, eigenvector) pairs sorted by eigenvalue argument.");
  m.def("evolve", &evolve, py::arg("plate"), py::arg("state"), py::arg("samples") = 2001);
  m.def("evolve_stack", &evolve_stack, py::arg("plates"), py::arg("state"),
        py::arg("samples_per_plate") = 2001);
  m.def("concatenate", &concatenate, py::arg("segments"));

  m.def("pancharatnam", &pancharatnam, py::arg("a"), py::arg("b"),
        py::arg("threshold") = kOrthogonalityThreshold);
  m.def("visibility", &visibility, py::arg("a"), py::arg("b"));
  m.def("interference_intensity", &interference_intensity, py::arg("a"), py::arg("b"),
        py::arg("phi"));
  m.def("dynamical_phase_closed_form", &dynamical_phase_closed_form, py::arg("state"),
        py::arg("plate"));
  m.def("dynamical_phase_numeric", &dynamical_phase_numeric, py::arg("curve"));
  m.def("geometric_phase", [](const Curve& c) { return report_dict(geometric_phase(c)); },
        py::arg("curve"));
  m.def("pancharatnam_profile", &pancharatnam_profile, py::arg("curve"));
  m.def("transformation_phase", [](const StateVector& d, const PlateSpec& spec) {
    const TransformationPhase p = transformation_phase(d, spec);
    return py::make_tuple(p.phase, p.imaginary_part);
  }, py::arg("state"), py::arg("plate"));
  m.def("vertex_product", [](const std::vector<StateVector>& states) {
    return vertex_product(states);
  }, py::arg("states"));
  m.def("bargmann_limit", &bargmann_limit, py::arg("curve"));

  py::class_<GeodesicArc>(m, "GeodesicArc")
      .def(py::init<const StateVector&, const StateVector&>(), py::arg("a"), py::arg("b"))
      .def_property_readonly("length", &GeodesicArc::length)
      .def_property_readonly("start", &GeodesicArc::start)
      .def_property_readonly("end", &GeodesicArc::end)
      .def("position", &GeodesicArc::position, py::arg("s"))
      .def("velocity", &GeodesicArc::velocity, py::arg("s"))
      .def("acceleration", &GeodesicArc::acceleration, py::arg("s"))
      .def("sample", &GeodesicArc::sample, py::arg("samples"));
  m.def("geodesic_between", &geodesic_between, py::arg("a"), py::arg("b"),
        py::arg("samples") = 1001);
  m.def("geodesic_residual", [](const Curve& c) { return geodesic_residual(c).value; },
        py::arg("curve"));
  m.def("horizontality_residual", &horizontality_residual, py::arg("curve"));
  m.def("parallel_lift", &parallel_lift, py::arg("curve"));
  m.def("curve_length", &curve_length, py::arg("curve"));

  py::enum_<TwoLevelFamily>(m, "TwoLevelFamily")
      .value("PLUS_MINUS", TwoLevelFamily::PlusMinus)
      .value("PLUS_ZERO", TwoLevelFamily::PlusZero);

  py::class_<GeodesicScenario>(m, "GeodesicScenario")
      .def(py::init<Complex, Complex, double, TwoLevelFamily>(), py::arg("first"),
           py::arg("second"), py::arg("s_max"), py::arg("family") = TwoLevelFamily::PlusMinus)
      .def_static("from_state", &GeodesicScenario::from_state, py::arg("state"), py::arg("s_max"))
      .def_property_readonly("coupling", &GeodesicScenario::coupling)
      .def_property_readonly("chi", &GeodesicScenario::chi)
      .def_property_readonly("s_max", &GeodesicScenario::s_max)
      .def("with_s_max", &GeodesicScenario::with_s_max, py::arg("s"))
      .def("initial_state", &GeodesicScenario::initial_state)
      .def("plate", &GeodesicScenario::plate, py::arg("s"))
      .def("sample", &GeodesicScenario::sample, py::arg("samples"));
  m.def("two_level_scenario", [](const GeodesicScenario& s) {
    const TwoLevelPhases p = two_level_scenario(s);
    py::dict d;
    d["theta"] = p.theta;
    d["phi_g"] = p.phi_g;
    d["theta_continuous"] = p.theta_continuous;
    d["phi_g_continuous"] = p.phi_g_continuous;
    return d;
  }, py::arg("scenario"));
  m.def("detect_phase_jump", &detect_phase_jump, py::arg("scenario"), py::arg("epsilon") = 1e-3);
  m.def("generalized_geodesic_check",
        [](double chi, const std::vector<double>& grid, bool finite_difference) {
          return generalized_geodesic_check(
              chi, grid,
              finite_difference ? DerivativeMethod::FiniteDifference : DerivativeMethod::Analytic);
        },
        py::arg("chi"), py::arg("delta_grid"), py::arg("finite_difference") = false);

  m.def("run", &run_command, py::arg("command"), py::arg("config"), py::arg("format") = "json",
        "Evaluates a CLI command on a scenario given as JSON text; returns the rendered output.");
}
