#pragma once

// JSON representations of states, matrices, curves and phase reports, plus the
// fixed-precision writers used by the command-line tool.
//
//   state:  {"basis": "PMZ", "amplitudes": [[re, im], [re, im], [re, im]]}
//   matrix: {"basis": "PMZ", "entries": [[[re, im] x3] x3]}
//   curve:  [{"s": s, "state": <state>}, ...]

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "biphase/converters.hpp"
#include "biphase/phases.hpp"
#include "biphase/state_space.hpp"

namespace biphase::io {

using Json = nlohmann::ordered_json;

/// Shortest text of 17 significant digits; non-finite values become "null".
std::string format_number(double value);

Json complex_to_json(Complex z);
/// Accepts [re, im] or a bare real number.
Complex complex_from_json(const Json& j);

Json state_to_json(const StateVector& state);
/// With normalize = true any nonzero triple is rescaled to unit norm;
/// otherwise the triple must already be unit norm (InvalidInputError).
StateVector state_from_json(const Json& j, bool normalize = false);

Json matrix_to_json(const Matrix3c& m, Basis basis);
Json unitary_to_json(const Unitary3& u);
Json curve_to_json(const Curve& curve);
Json report_to_json(const PhaseReport& report);

/// Serializes with every floating-point value printed by format_number.
std::string dump(const Json& j, int indent = 2);

/// Flattens nested objects/arrays to "a.b.0.c" keys, preserving order.
std::vector<std::pair<std::string, Json>> flatten(const Json& j);

/// Writes a header row and one row per record. Missing or null fields print
/// as "null".
void write_csv(std::ostream& out, const std::vector<std::string>& columns,
               const std::vector<Json>& records);

}  // namespace biphase::io
