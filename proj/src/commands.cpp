#include <cmath>
#include <ostream>

#include "biphase/cli.hpp"
#include "biphase/curve_calculus.hpp"
#include "biphase/geodesics.hpp"
#include "biphase/phases.hpp"

namespace biphase::cli {
namespace {

using io::Json;

Json nullable(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

StateVector pmz_input(const Scenario& scenario) {
  if (!scenario.input_state) throw ConfigError("this command needs 'input_state'");
  const StateVector& s = *scenario.input_state;
  return s.basis() == Basis::Pmz ? s : to_pmz(s);
}

void require_plates(std::span<const PlateSpec> plates) {
  if (plates.empty()) throw ConfigError("this command needs at least one plate in 'plates'");
}

Json plates_to_json(std::span<const PlateSpec> plates) {
  Json out = Json::array();
  for (const auto& p : plates) out.push_back(Json{{"delta", p.delta}, {"chi", p.chi}});
  return out;
}

// Phases of the plate stack, with the Pancharatnam phase left empty when the
// end points are orthogonal.
struct StackPhases {
  std::vector<Curve> segments;
  std::optional<double> pancharatnam;
  double dynamical = 0.0;
  double visibility = 0.0;

  std::optional<double> geometric() const {
    if (!pancharatnam) return std::nullopt;
    return make_report(*pancharatnam, dynamical, visibility).geometric;
  }
  const StateVector& final_state() const { return segments.back().back(); }
};

StackPhases stack_phases(const StateVector& input, std::span<const PlateSpec> plates,
                         std::size_t samples) {
  StackPhases out;
  out.segments = evolve_stack(plates, input, samples);
  for (const auto& segment : out.segments) out.dynamical += dynamical_phase_numeric(segment);
  out.visibility = visibility(input, out.final_state());
  if (out.visibility >= kOrthogonalityThreshold) {
    out.pancharatnam = pancharatnam(input, out.final_state());
  }
  return out;
}

[[noreturn]] void throw_indeterminate(const char* what) {
  throw IndeterminatePhaseError(std::string(what) +
                                ": initial and final states are orthogonal; the "
                                "Pancharatnam phase is indeterminate");
}

Json phases_block(const StackPhases& phases) {
  if (!phases.pancharatnam) throw_indeterminate("phases");
  Json out = io::report_to_json(
      make_report(*phases.pancharatnam, phases.dynamical, phases.visibility));
  out["final_state"] = io::state_to_json(phases.final_state());
  Json segments = Json::array();
  for (const auto& segment : phases.segments) {
    const double v = visibility(segment.front(), segment.back());
    const double dyn = dynamical_phase_numeric(segment);
    std::optional<double> p;
    std::optional<double> g;
    if (v >= kOrthogonalityThreshold) {
      p = pancharatnam(segment.front(), segment.back());
      g = make_report(*p, dyn, v).geometric;
    }
    segments.push_back(Json{{"pancharatnam", nullable(p)},
                            {"dynamical", dyn},
                            {"geometric", nullable(g)},
                            {"visibility", v}});
  }
  out["segments"] = segments;
  return out;
}

Json eigen_block(std::span<const PlateSpec> plates) {
  const Unitary3 u = compose(plates);
  const EigenSystem system = eigen(u);
  Json pairs = Json::array();
  for (const auto& pair : system.pairs) {
    pairs.push_back(Json{{"value", io::complex_to_json(pair.value)},
                         {"argument", principal_arg(pair.value)},
                         {"vector", io::state_to_json(pair.vector)}});
  }
  return Json{{"matrix", io::unitary_to_json(u)}, {"eigenpairs", pairs}};
}

struct SegmentChecks {
  double geodesic = 0.0;
  double step = 0.0;
  double horizontal = 0.0;
  double length = 0.0;
};

SegmentChecks segment_checks(const Curve& segment) {
  const FdResidual residual = geodesic_residual(segment);
  return {residual.value, residual.step, horizontality_residual(segment), curve_length(segment)};
}

std::optional<double> harmonic_check(const PlateSpec& plate, std::size_t samples,
                                     DerivativeMethod method) {
  if (plate.delta == 0.0) return std::nullopt;
  const auto grid = linspace(0.0, plate.delta, std::max<std::size_t>(samples, 5));
  return generalized_geodesic_check(plate.chi, grid, method);
}

Json geodesic_check_block(const StackPhases& phases, std::span<const PlateSpec> plates,
                          std::size_t samples) {
  SegmentChecks total;
  Json segments = Json::array();
  for (std::size_t k = 0; k < phases.segments.size(); ++k) {
    const Curve& segment = phases.segments[k];
    const SegmentChecks c = segment_checks(segment);
    total.geodesic = std::max(total.geodesic, c.geodesic);
    total.horizontal = std::max(total.horizontal, c.horizontal);
    total.length += c.length;
    const GeneralGeodesy geodesy = general_geodesy(segment.front(), plates[k]);
    segments.push_back(Json{
        {"geodesic_residual", c.geodesic},
        {"step", c.step},
        {"horizontality_residual", c.horizontal},
        {"length", c.length},
        {"im_harmonic_analytic", nullable(harmonic_check(plates[k], samples, DerivativeMethod::Analytic))},
        {"im_harmonic_fd", nullable(harmonic_check(plates[k], samples, DerivativeMethod::FiniteDifference))},
        {"step_geometric_phase", geodesy.step_phase},
        {"step_geometric_order", geodesy.order}});
  }
  return Json{{"geodesic_residual", total.geodesic},
              {"horizontality_residual", total.horizontal},
              {"length", total.length},
              {"segments", segments}};
}

Json interference_block(const StateVector& input, const StackPhases& phases, double phi) {
  return Json{{"phi", phi},
              {"intensity", interference_intensity(input, phases.final_state(), phi)},
              {"visibility", phases.visibility},
              {"phase_of_maximum", nullable(phases.pancharatnam)}};
}

GeodesicScenario jump_scenario(const StateVector& input, const PlateSpec& plate) {
  const GeodesicScenario scenario = GeodesicScenario::from_state(input, 2.0 * plate.delta);
  const bool aligned = scenario.family() == TwoLevelFamily::PlusMinus
                           ? std::abs(std::cos(2.0 * plate.chi) - 1.0) <= 1e-9
                           : std::abs(std::sin(2.0 * plate.chi) - 1.0) <= 1e-9;
  if (!aligned) {
    throw ConfigError(scenario.family() == TwoLevelFamily::PlusMinus
                          ? "jump with d3 = 0 needs a plate with cos(2 chi) = 1"
                          : "jump with d2 = 0 needs a plate with sin(2 chi) = 1");
  }
  return scenario;
}

Json jump_fields(const TwoLevelPhases& phases) {
  return Json{{"theta", phases.theta},
              {"phi_g", phases.phi_g},
              {"theta_continuous", phases.theta_continuous},
              {"phi_g_continuous", phases.phi_g_continuous}};
}

Json jump_block(const StateVector& input, const PlateSpec& plate, double epsilon) {
  const GeodesicScenario scenario = jump_scenario(input, plate);
  Json out{{"coupling", scenario.coupling()}, {"s", scenario.s_max()}};
  out.update(jump_fields(two_level_scenario(scenario)));
  out["epsilon"] = epsilon;
  out["jump"] = detect_phase_jump(scenario, epsilon);
  return out;
}

bool needs_state(Quantity q) { return q != Quantity::Eigen; }

CommandResult run_command(const Scenario& scenario) {
  require_plates(scenario.plates);
  Json doc{{"command", "run"}, {"plates", plates_to_json(scenario.plates)}};

  std::optional<StateVector> input;
  std::optional<StackPhases> phases;
  for (Quantity q : scenario.outputs) {
    if (needs_state(q) && !input) {
      input = pmz_input(scenario);
      doc["input_state"] = io::state_to_json(*input);
      phases = stack_phases(*input, scenario.plates, scenario.samples);
    }
  }

  for (Quantity q : scenario.outputs) {
    const std::string key(to_string(q));
    switch (q) {
      case Quantity::Phases:
        doc[key] = phases_block(*phases);
        break;
      case Quantity::Eigen:
        doc[key] = eigen_block(scenario.plates);
        break;
      case Quantity::GeodesicCheck:
        doc[key] = geodesic_check_block(*phases, scenario.plates, scenario.samples);
        break;
      case Quantity::Interference:
        doc[key] = interference_block(*input, *phases, scenario.phi);
        break;
      case Quantity::Jump:
        doc[key] = jump_block(*input, scenario.plates.front(), scenario.epsilon);
        break;
    }
  }
  return {doc, {}, {}};
}

std::vector<std::string> quantity_columns(Quantity q) {
  switch (q) {
    case Quantity::Phases: return {"pancharatnam", "dynamical", "geometric", "visibility"};
    case Quantity::Eigen: return {"eigen_arg_1", "eigen_arg_2", "eigen_arg_3"};
    case Quantity::GeodesicCheck: return {"geodesic_residual", "horizontality_residual", "length"};
    case Quantity::Interference: return {"intensity"};
    case Quantity::Jump: return {"theta", "phi_g", "theta_continuous", "phi_g_continuous"};
  }
  return {};
}

std::vector<std::string> sweep_columns(const Scenario& scenario) {
  std::vector<std::string> columns{std::string(to_string(scenario.sweep->parameter))};
  for (Quantity q : scenario.outputs) {
    const auto more = quantity_columns(q);
    columns.insert(columns.end(), more.begin(), more.end());
  }
  return columns;
}

Json sweep_record(const Scenario& scenario, double value) {
  const SweepGrid& grid = *scenario.sweep;
  std::vector<PlateSpec> plates = scenario.plates;
  PlateSpec& target = plates[grid.plate];
  switch (grid.parameter) {
    case SweepParameter::Delta: target.delta = value; break;
    case SweepParameter::Chi: target.chi = value; break;
    case SweepParameter::S: target.delta = value / 2.0; break;
  }

  Json record{{std::string(to_string(grid.parameter)), value}};
  std::optional<StateVector> input;
  std::optional<StackPhases> phases;
  auto ensure_phases = [&] {
    if (!phases) {
      input = pmz_input(scenario);
      phases = stack_phases(*input, plates, scenario.samples);
    }
  };

  for (Quantity q : scenario.outputs) {
    try {
      switch (q) {
        case Quantity::Phases:
          ensure_phases();
          record["pancharatnam"] = nullable(phases->pancharatnam);
          record["dynamical"] = phases->dynamical;
          record["geometric"] = nullable(phases->geometric());
          record["visibility"] = phases->visibility;
          break;
        case Quantity::Eigen: {
          const EigenSystem system = eigen(compose(plates));
          for (int k = 0; k < 3; ++k) {
            record["eigen_arg_" + std::to_string(k + 1)] = principal_arg(system.pairs[k].value);
          }
          break;
        }
        case Quantity::GeodesicCheck: {
          ensure_phases();
          const Json block = geodesic_check_block(*phases, plates, scenario.samples);
          record["geodesic_residual"] = block["geodesic_residual"];
          record["horizontality_residual"] = block["horizontality_residual"];
          record["length"] = block["length"];
          break;
        }
        case Quantity::Interference:
          ensure_phases();
          record["intensity"] = interference_intensity(*input, phases->final_state(), scenario.phi);
          break;
        case Quantity::Jump: {
          const GeodesicScenario two_level = jump_scenario(pmz_input(scenario), plates[grid.plate]);
          record.update(jump_fields(two_level_scenario(two_level)));
          break;
        }
      }
    } catch (const NumericError&) {
      // An indeterminate grid point leaves its fields null instead of aborting.
      for (const auto& column : quantity_columns(q)) record[column] = nullptr;
    }
  }
  return record;
}

CommandResult sweep_command(const Scenario& scenario) {
  if (!scenario.sweep) throw ConfigError("sweep needs a 'sweep' grid");
  require_plates(scenario.plates);
  CommandResult result;
  result.columns = sweep_columns(scenario);
  for (double value : scenario.sweep->values()) {
    result.records.push_back(sweep_record(scenario, value));
  }
  Json columns = Json::array();
  for (const auto& c : result.columns) columns.push_back(c);
  Json records = Json::array();
  for (const auto& r : result.records) records.push_back(r);
  result.document = Json{{"command", "sweep"},
                         {"parameter", std::string(to_string(scenario.sweep->parameter))},
                         {"columns", columns},
                         {"records", records}};
  return result;
}

CommandResult eigen_command(const Scenario& scenario) {
  require_plates(scenario.plates);
  Json doc{{"command", "eigen"}, {"plates", plates_to_json(scenario.plates)}};
  doc.update(eigen_block(scenario.plates));
  return {doc, {}, {}};
}

CommandResult geodesic_command(const Scenario& scenario) {
  if (!scenario.input_state) throw ConfigError("geodesic needs 'input_state'");
  Json doc{{"command", "geodesic"}};

  if (scenario.target_state) {
    const StateVector& a = *scenario.input_state;
    StateVector b = *scenario.target_state;
    if (b.basis() != a.basis()) b = a.basis() == Basis::Pmz ? to_pmz(b) : to_fock(b);
    const GeodesicArc arc(a, b);
    const Curve curve = arc.sample(scenario.samples);
    const AnalyticGeodesicResiduals analytic = analytic_residuals(arc, scenario.samples);
    const FdResidual fd = geodesic_residual(curve);
    doc["input_state"] = io::state_to_json(a);
    doc["end_state"] = io::state_to_json(arc.end());
    doc["s0"] = arc.length();
    doc["ray_distance"] = ray_distance(a, b);
    doc["length"] = curve_length(curve);
    doc["analytic"] = Json{{"geodesic_residual", analytic.geodesic},
                           {"horizontality_residual", analytic.horizontal}};
    doc["finite_difference"] = Json{{"geodesic_residual", fd.value},
                                    {"step", fd.step},
                                    {"horizontality_residual", horizontality_residual(curve)}};
    if (scenario.emit_curve) doc["curve"] = io::curve_to_json(curve);
    return {doc, {}, {}};
  }

  require_plates(scenario.plates);
  const StateVector input = pmz_input(scenario);
  const StackPhases phases = stack_phases(input, scenario.plates, scenario.samples);
  doc["input_state"] = io::state_to_json(input);
  doc["plates"] = plates_to_json(scenario.plates);
  doc.update(geodesic_check_block(phases, scenario.plates, scenario.samples));
  if (scenario.emit_curve) {
    Json curves = Json::array();
    for (const auto& segment : phases.segments) curves.push_back(io::curve_to_json(segment));
    doc["curves"] = curves;
  }
  return {doc, {}, {}};
}

CommandResult vertex_command(const Scenario& scenario) {
  if (scenario.states.size() < 2) throw ConfigError("vertex needs at least 2 entries in 'states'");
  std::vector<StateVector> states = scenario.states;
  const Basis basis = states.front().basis();
  for (auto& s : states) {
    if (s.basis() != basis) s = basis == Basis::Pmz ? to_pmz(s) : to_fock(s);
  }
  Json doc{{"command", "vertex"},
           {"count", states.size()},
           {"vertex_phase", vertex_product(states)}};
  return {doc, {}, {}};
}

}  // namespace

CommandResult execute(Command command, const Scenario& scenario) {
  CommandResult result;
  switch (command) {
    case Command::Run: result = run_command(scenario); break;
    case Command::Sweep: result = sweep_command(scenario); break;
    case Command::Eigen: result = eigen_command(scenario); break;
    case Command::Geodesic: result = geodesic_command(scenario); break;
    case Command::Vertex: result = vertex_command(scenario); break;
  }
  if (result.columns.empty()) {
    // Single-record commands tabulate their flattened document.
    Json record = Json::object();
    for (auto& [key, value] : io::flatten(result.document)) {
      result.columns.push_back(key);
      record[key] = value;
    }
    result.records.push_back(record);
  }
  return result;
}

void render(const CommandResult& result, Format format, std::ostream& out) {
  if (format == Format::Json) {
    out << io::dump(result.document) << '\n';
  } else {
    io::write_csv(out, result.columns, result.records);
  }
}

}  // namespace biphase::cli
