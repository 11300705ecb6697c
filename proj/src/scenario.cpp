#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include "biphase/cli.hpp"
#include "biphase/curve_calculus.hpp"

namespace biphase::cli {
namespace {

using io::Json;

const std::set<std::string> kTopLevelKeys = {
    "description", "degrees", "input_state", "plates",     "samples", "sweep",
    "outputs",     "phi",     "epsilon",     "target_state", "emit_curve", "states"};

double number_field(const Json& object, const char* key, double fallback) {
  if (!object.contains(key)) return fallback;
  const Json& value = object[key];
  if (!value.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) throw ConfigError(std::string("'") + key + "' must be finite");
  return x;
}

double required_number(const Json& object, const char* key, const char* context) {
  if (!object.contains(key)) {
    throw ConfigError(std::string(context) + " is missing '" + key + "'");
  }
  return number_field(object, key, 0.0);
}

std::size_t count_field(const Json& value, const char* key) {
  if (!value.is_number_integer() || value.get<long long>() < 0) {
    throw ConfigError(std::string("'") + key + "' must be a non-negative integer");
  }
  return static_cast<std::size_t>(value.get<long long>());
}

StateVector state_field(const Json& value, const char* what) {
  try {
    const bool normalize = value.is_object() && value.value("normalize", false);
    Json plain = value;
    if (plain.is_object()) plain.erase("normalize");
    return io::state_from_json(plain, normalize);
  } catch (const UsageError& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

std::string_view to_string(Quantity q) {
  switch (q) {
    case Quantity::Phases: return "phases";
    case Quantity::Eigen: return "eigen";
    case Quantity::GeodesicCheck: return "geodesic-check";
    case Quantity::Interference: return "interference";
    case Quantity::Jump: return "jump";
  }
  return "?";
}

Quantity quantity_from_string(std::string_view name) {
  for (Quantity q : {Quantity::Phases, Quantity::Eigen, Quantity::GeodesicCheck,
                     Quantity::Interference, Quantity::Jump}) {
    if (to_string(q) == name) return q;
  }
  throw ConfigError("unknown output quantity '" + std::string(name) +
                    "' (expected phases, eigen, geodesic-check, interference or jump)");
}

std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::Delta: return "delta";
    case SweepParameter::Chi: return "chi";
    case SweepParameter::S: return "s";
  }
  return "?";
}

std::vector<double> SweepGrid::values() const { return linspace(start, stop, count); }

Scenario parse_scenario(const Json& document) {
  if (!document.is_object()) throw ConfigError("configuration must be a JSON object");
  for (const auto& [key, value] : document.items()) {
    if (!kTopLevelKeys.contains(key)) throw ConfigError("unknown configuration key '" + key + "'");
  }

  Scenario scenario;
  bool degrees = false;
  if (document.contains("degrees")) {
    if (!document["degrees"].is_boolean()) throw ConfigError("'degrees' must be true or false");
    degrees = document["degrees"].get<bool>();
  }
  const double angle = degrees ? std::numbers::pi / 180.0 : 1.0;

  if (document.contains("input_state")) {
    scenario.input_state = state_field(document["input_state"], "input_state");
  }
  if (document.contains("target_state")) {
    scenario.target_state = state_field(document["target_state"], "target_state");
  }

  if (document.contains("plates")) {
    const Json& plates = document["plates"];
    if (!plates.is_array()) throw ConfigError("'plates' must be an array");
    for (const Json& plate : plates) {
      if (!plate.is_object()) throw ConfigError("each plate must be an object {delta, chi}");
      for (const auto& [key, value] : plate.items()) {
        if (key != "delta" && key != "chi") throw ConfigError("unknown plate key '" + key + "'");
      }
      scenario.plates.push_back({required_number(plate, "delta", "plate") * angle,
                                 required_number(plate, "chi", "plate") * angle});
    }
  }

  if (document.contains("samples")) {
    scenario.samples = count_field(document["samples"], "samples");
    if (scenario.samples < 3) throw ConfigError("'samples' must be at least 3");
  }
  scenario.phi = number_field(document, "phi", 0.0) * angle;
  scenario.epsilon = number_field(document, "epsilon", 1e-3 / angle) * angle;

  if (document.contains("emit_curve")) {
    if (!document["emit_curve"].is_boolean()) throw ConfigError("'emit_curve' must be a boolean");
    scenario.emit_curve = document["emit_curve"].get<bool>();
  }

  if (document.contains("outputs")) {
    const Json& outputs = document["outputs"];
    if (!outputs.is_array()) throw ConfigError("'outputs' must be an array of names");
    for (const Json& name : outputs) {
      if (!name.is_string()) throw ConfigError("'outputs' entries must be strings");
      const Quantity q = quantity_from_string(name.get<std::string>());
      if (std::find(scenario.outputs.begin(), scenario.outputs.end(), q) !=
          scenario.outputs.end()) {
        throw ConfigError("output '" + name.get<std::string>() + "' requested twice");
      }
      scenario.outputs.push_back(q);
    }
  }
  if (scenario.outputs.empty()) scenario.outputs.push_back(Quantity::Phases);

  if (document.contains("sweep")) {
    const Json& sweep = document["sweep"];
    if (!sweep.is_object()) throw ConfigError("'sweep' must be an object");
    SweepGrid grid;
    const std::string parameter = sweep.value("parameter", std::string("delta"));
    if (parameter == "delta") {
      grid.parameter = SweepParameter::Delta;
    } else if (parameter == "chi") {
      grid.parameter = SweepParameter::Chi;
    } else if (parameter == "s") {
      grid.parameter = SweepParameter::S;
    } else {
      throw ConfigError("sweep parameter must be delta, chi or s");
    }
    grid.start = required_number(sweep, "start", "sweep") * angle;
    grid.stop = required_number(sweep, "stop", "sweep") * angle;
    if (!sweep.contains("count")) throw ConfigError("sweep is missing 'count'");
    grid.count = count_field(sweep["count"], "count");
    if (grid.count < 2) throw ConfigError("sweep grid needs count >= 2");
    if (sweep.contains("plate")) grid.plate = count_field(sweep["plate"], "plate");
    if (grid.plate >= scenario.plates.size()) {
      throw ConfigError("sweep plate index " + std::to_string(grid.plate) + " has no plate");
    }
    scenario.sweep = grid;
  }

  if (document.contains("states")) {
    const Json& states = document["states"];
    if (!states.is_array()) throw ConfigError("'states' must be an array");
    for (const Json& s : states) scenario.states.push_back(state_field(s, "states"));
  }
  return scenario;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
  Json document;
  try {
    document = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("configuration is not valid JSON: " + std::string(e.what()));
  }
  return parse_scenario(document);
}

Command command_from_string(std::string_view name) {
  for (Command c : {Command::Run, Command::Sweep, Command::Eigen, Command::Geodesic,
                    Command::Vertex}) {
    if (to_string(c) == name) return c;
  }
  throw ConfigError("unknown command '" + std::string(name) + "'");
}

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Run: return "run";
    case Command::Sweep: return "sweep";
    case Command::Eigen: return "eigen";
    case Command::Geodesic: return "geodesic";
    case Command::Vertex: return "vertex";
  }
  return "?";
}

Format format_from_string(std::string_view name) {
  if (name == "json") return Format::Json;
  if (name == "csv") return Format::Csv;
  throw ConfigError("format must be json or csv");
}

}  // namespace biphase::cli
