#pragma once

// Scenario configuration and command evaluation behind the `biphase` tool.
//
// A scenario is one JSON document:
//
//   {
//     "degrees": false,                      // angles below in degrees when true
//     "input_state": {"basis": "PMZ", "amplitudes": [[re, im], ...], "normalize": false},
//     "plates": [{"delta": 0.785, "chi": 0.0}, ...],
//     "samples": 2001,                       // curve samples per plate
//     "sweep": {"parameter": "delta" | "chi" | "s", "start": 0, "stop": 1,
//               "count": 11, "plate": 0},
//     "outputs": ["phases", "eigen", "geodesic-check", "interference", "jump"],
//     "phi": 0.0,                            // interference phase offset
//     "epsilon": 0.001,                      // half-width of the phase-jump window
//     "target_state": {...},                 // geodesic: arc from input_state to here
//     "emit_curve": false,                   // geodesic: include sampled curve
//     "states": [{...}, ...]                 // vertex: closed polygon of states
//   }

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "biphase/converters.hpp"
#include "biphase/io.hpp"
#include "biphase/state_space.hpp"

namespace biphase::cli {

/// The configuration document is malformed or violates the schema.
class ConfigError : public UsageError {
 public:
  using UsageError::UsageError;
};

enum class Quantity { Phases, Eigen, GeodesicCheck, Interference, Jump };

std::string_view to_string(Quantity q);
Quantity quantity_from_string(std::string_view name);

enum class SweepParameter { Delta, Chi, S };

std::string_view to_string(SweepParameter p);

struct SweepGrid {
  SweepParameter parameter = SweepParameter::Delta;
  double start = 0.0;
  double stop = 0.0;
  std::size_t count = 0;
  std::size_t plate = 0;

  std::vector<double> values() const;
};

struct Scenario {
  std::optional<StateVector> input_state;
  std::vector<PlateSpec> plates;
  std::optional<SweepGrid> sweep;
  std::vector<Quantity> outputs;
  std::size_t samples = 2001;
  double phi = 0.0;
  double epsilon = 1e-3;
  std::optional<StateVector> target_state;
  bool emit_curve = false;
  std::vector<StateVector> states;
};

/// Validates and converts a configuration document. Angle fields are
/// converted to radians. Throws ConfigError.
Scenario parse_scenario(const io::Json& document);
Scenario load_scenario(const std::string& path);

enum class Command { Run, Sweep, Eigen, Geodesic, Vertex };

Command command_from_string(std::string_view name);
std::string_view to_string(Command c);

enum class Format { Json, Csv };

Format format_from_string(std::string_view name);

/// Output of one command. `document` is the JSON form; `columns`/`records`
/// hold the tabular form used for CSV.
struct CommandResult {
  io::Json document;
  std::vector<std::string> columns;
  std::vector<io::Json> records;
};

/// Evaluates a command. Throws ConfigError for scenario fields the command
/// needs but lacks, and NumericError (IndeterminatePhaseError, ...) when a
/// requested quantity cannot be computed. Sweeps record such failures as
/// null fields instead.
CommandResult execute(Command command, const Scenario& scenario);

void render(const CommandResult& result, Format format, std::ostream& out);

/// Exit codes of the tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

}  // namespace biphase::cli
