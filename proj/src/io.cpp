#include "biphase/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace biphase::io {
namespace {

void dump_into(std::ostringstream& out, const Json& j, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* newline = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::number_float:
      out << format_number(j.get<double>());
      return;
    case Json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << '{' << newline;
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out << ',' << newline;
        first = false;
        out << pad << Json(key).dump() << (indent > 0 ? ": " : ":");
        dump_into(out, value, indent, depth + 1);
      }
      out << newline << close_pad << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      // Short numeric arrays such as [re, im] stay on one line.
      const bool inline_array =
          j.size() <= 3 && std::all_of(j.begin(), j.end(), [](const Json& e) {
            return e.is_number() || e.is_null();
          });
      if (inline_array) {
        out << '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i > 0) out << (indent > 0 ? ", " : ",");
          dump_into(out, j[i], indent, depth + 1);
        }
        out << ']';
        return;
      }
      out << '[' << newline;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) out << ',' << newline;
        out << pad;
        dump_into(out, j[i], indent, depth + 1);
      }
      out << newline << close_pad << ']';
      return;
    }
    default:
      out << j.dump();
      return;
  }
}

void flatten_into(const Json& j, const std::string& prefix,
                  std::vector<std::pair<std::string, Json>>& out) {
  auto join = [&](const std::string& key) { return prefix.empty() ? key : prefix + "." + key; };
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) flatten_into(value, join(key), out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten_into(j[i], join(std::to_string(i)), out);
  } else {
    out.emplace_back(prefix, j);
  }
}

std::string csv_field(const Json& value) {
  if (value.is_null()) return "null";
  if (value.is_number_float()) return format_number(value.get<double>());
  if (value.is_string()) {
    const auto text = value.get<std::string>();
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string quoted = "\"";
    for (char ch : text) {
      if (ch == '"') quoted += '"';
      quoted += ch;
    }
    return quoted + '"';
  }
  return value.dump();
}

}  // namespace

std::string format_number(double value) {
  if (!std::isfinite(value)) return "null";
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw UsageError("complex numbers must be [re, im] pairs, got " + j.dump());
}

Json state_to_json(const StateVector& state) {
  Json amps = Json::array();
  for (int i = 0; i < 3; ++i) amps.push_back(complex_to_json(state[i]));
  return Json{{"basis", std::string(to_string(state.basis()))}, {"amplitudes", amps}};
}

StateVector state_from_json(const Json& j, bool normalize) {
  if (!j.is_object()) throw UsageError("state must be an object with basis and amplitudes");
  if (!j.contains("basis") || !j["basis"].is_string()) throw UsageError("state needs a basis string");
  if (!j.contains("amplitudes") || !j["amplitudes"].is_array() || j["amplitudes"].size() != 3) {
    throw UsageError("state needs exactly 3 amplitudes");
  }
  const Basis basis = basis_from_string(j["basis"].get<std::string>());
  Amplitudes amps;
  for (int i = 0; i < 3; ++i) amps(i) = complex_from_json(j["amplitudes"][static_cast<std::size_t>(i)]);
  return normalize ? StateVector::normalized(amps, basis) : StateVector(amps, basis);
}

Json matrix_to_json(const Matrix3c& m, Basis basis) {
  Json rows = Json::array();
  for (int i = 0; i < 3; ++i) {
    Json row = Json::array();
    for (int k = 0; k < 3; ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(row);
  }
  return Json{{"basis", std::string(to_string(basis))}, {"entries", rows}};
}

Json unitary_to_json(const Unitary3& u) { return matrix_to_json(u.entries(), u.basis()); }

Json curve_to_json(const Curve& curve) {
  Json out = Json::array();
  for (std::size_t i = 0; i < curve.size(); ++i) {
    out.push_back(Json{{"s", curve.parameter(i)}, {"state", state_to_json(curve.state(i))}});
  }
  return out;
}

Json report_to_json(const PhaseReport& report) {
  return Json{{"pancharatnam", report.pancharatnam},
              {"dynamical", report.dynamical},
              {"geometric", report.geometric},
              {"visibility", report.visibility}};
}

std::string dump(const Json& j, int indent) {
  std::ostringstream out;
  dump_into(out, j, indent, 0);
  return out.str();
}

std::vector<std::pair<std::string, Json>> flatten(const Json& j) {
  std::vector<std::pair<std::string, Json>> out;
  flatten_into(j, "", out);
  return out;
}

void write_csv(std::ostream& out, const std::vector<std::string>& columns,
               const std::vector<Json>& records) {
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
  out << '\n';
  for (const auto& record : records) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const auto it = record.find(columns[c]);
      out << (c ? "," : "") << (it == record.end() ? std::string("null") : csv_field(*it));
    }
    out << '\n';
  }
}

}  // namespace biphase::io
