#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "biphase/cli.hpp"
#include "biphase/geodesics.hpp"
#include "test_support.hpp"

using namespace biphase;
using biphase::io::Json;
using biphase::testing::angle_gap;
using biphase::testing::kPi;

namespace {

std::string data(const std::string& name) { return std::string(BIPHASE_TEST_DATA_DIR) + "/" + name; }

cli::CommandResult run(cli::Command command, const std::string& config) {
  return cli::execute(command, cli::load_scenario(data(config)));
}

std::string render(const cli::CommandResult& result, cli::Format format) {
  std::ostringstream out;
  cli::render(result, format, out);
  return out.str();
}

cli::Scenario parse(const char* text) { return cli::parse_scenario(Json::parse(text)); }

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) fields.push_back(cell);
    rows.push_back(fields);
  }
  return rows;
}

double number(const Json& j) { return j.get<double>(); }

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "biphase_cli_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("scenario parsing fills defaults and converts degrees") {
  const cli::Scenario s = cli::load_scenario(data("qwp_eigenvector.json"));
  REQUIRE(s.plates.size() == 1);
  CHECK(s.plates[0].delta == Catch::Approx(kPi / 4.0).margin(1e-15));
  CHECK(s.plates[0].chi == Catch::Approx(kPi / 8.0).margin(1e-15));
  CHECK(s.samples == 2001);
  REQUIRE(s.input_state);
  CHECK(std::abs(s.input_state->amplitudes().norm() - 1.0) <= 1e-15);
  CHECK(s.outputs == std::vector<cli::Quantity>{cli::Quantity::Phases, cli::Quantity::Eigen,
                                                cli::Quantity::Interference});

  const cli::Scenario minimal = parse(R"({"plates": [{"delta": 1, "chi": 0}]})");
  CHECK(minimal.outputs == std::vector<cli::Quantity>{cli::Quantity::Phases});
  CHECK(minimal.epsilon == 1e-3);
  CHECK_FALSE(minimal.sweep);
}

TEST_CASE("scenario parsing rejects malformed documents") {
  CHECK_THROWS_AS(cli::load_scenario(data("unknown_key.json")), cli::ConfigError);
  CHECK_THROWS_AS(cli::load_scenario(data("empty_grid.json")), cli::ConfigError);
  CHECK_THROWS_AS(cli::load_scenario(data("not_normalized.json")), cli::ConfigError);
  CHECK_THROWS_AS(cli::load_scenario(data("missing.json")), cli::ConfigError);
  CHECK_THROWS_AS(parse(R"([1, 2])"), cli::ConfigError);
  CHECK_THROWS_AS(parse(R"({"outputs": ["phases", "colour"]})"), cli::ConfigError);
  CHECK_THROWS_AS(parse(R"({"outputs": ["phases", "phases"]})"), cli::ConfigError);
  CHECK_THROWS_AS(parse(R"({"plates": [{"delta": 1}]})"), cli::ConfigError);
  CHECK_THROWS_AS(parse(R"({"plates": [{"delta": 1, "chi": 0, "tilt": 2}]})"), cli::ConfigError);
  CHECK_THROWS_AS(parse(R"({"plates": [{"delta": "1", "chi": 0}]})"), cli::ConfigError);
  CHECK_THROWS_AS(parse(R"({"samples": 2})"), cli::ConfigError);
  CHECK_THROWS_AS(parse(R"({"degrees": "yes"})"), cli::ConfigError);
  CHECK_THROWS_AS(
      parse(R"({"plates": [{"delta": 1, "chi": 0}],
                "sweep": {"parameter": "delta", "start": 0, "stop": 1, "count": 1}})"),
      cli::ConfigError);
  CHECK_THROWS_AS(
      parse(R"({"plates": [{"delta": 1, "chi": 0}],
                "sweep": {"parameter": "phi", "start": 0, "stop": 1, "count": 5}})"),
      cli::ConfigError);
  CHECK_THROWS_AS(
      parse(R"({"plates": [{"delta": 1, "chi": 0}],
                "sweep": {"parameter": "chi", "start": 0, "stop": 1, "count": 5, "plate": 1}})"),
      cli::ConfigError);
  CHECK_THROWS_AS(cli::command_from_string("plot"), cli::ConfigError);
  CHECK_THROWS_AS(cli::format_from_string("xml"), cli::ConfigError);
}

TEST_CASE("commands report missing scenario fields as configuration errors") {
  CHECK_THROWS_AS(cli::execute(cli::Command::Run, parse(R"({"plates": [{"delta": 1, "chi": 0}]})")),
                  cli::ConfigError);
  CHECK_THROWS_AS(cli::execute(cli::Command::Run, parse(R"({"input_state": {"basis": "PMZ", "amplitudes": [1, 0, 0]}})")),
                  cli::ConfigError);
  CHECK_THROWS_AS(cli::execute(cli::Command::Sweep, parse(R"({"plates": [{"delta": 1, "chi": 0}]})")),
                  cli::ConfigError);
  CHECK_THROWS_AS(cli::execute(cli::Command::Vertex, parse(R"({})")), cli::ConfigError);
  CHECK_THROWS_AS(cli::execute(cli::Command::Geodesic, parse(R"({})")), cli::ConfigError);
}

TEST_CASE("identity plate scenario") {
  const Json doc = run(cli::Command::Run, "identity.json").document;
  CHECK(number(doc["phases"]["pancharatnam"]) == 0.0);
  CHECK(number(doc["phases"]["dynamical"]) == 0.0);
  CHECK(number(doc["phases"]["geometric"]) == 0.0);
  CHECK(number(doc["phases"]["visibility"]) == Catch::Approx(1.0).margin(1e-15));
  CHECK(number(doc["interference"]["intensity"]) == Catch::Approx(4.0).margin(1e-14));
}

TEST_CASE("quarter-wave eigenvector scenario") {
  const Json doc = run(cli::Command::Run, "qwp_eigenvector.json").document;
  const Json& phases = doc["phases"];
  CHECK(number(phases["pancharatnam"]) == Catch::Approx(kPi / 2.0).margin(1e-10));
  CHECK(number(phases["dynamical"]) == Catch::Approx(kPi / 2.0).margin(1e-6));
  CHECK(std::abs(number(phases["geometric"])) <= 1e-6);
  CHECK(number(phases["visibility"]) == Catch::Approx(1.0).margin(1e-10));
  REQUIRE(doc["eigen"]["eigenpairs"].size() == 3);
  std::vector<double> args;
  for (const auto& pair : doc["eigen"]["eigenpairs"]) args.push_back(number(pair["argument"]));
  CHECK(args[0] == Catch::Approx(-kPi / 2.0).margin(1e-10));
  CHECK(args[1] == Catch::Approx(0.0).margin(1e-10));
  CHECK(args[2] == Catch::Approx(kPi / 2.0).margin(1e-10));
}

TEST_CASE("orthogonal end points are a numeric error") {
  CHECK_THROWS_AS(run(cli::Command::Run, "orthogonal.json"), IndeterminatePhaseError);
}

TEST_CASE("two-plate run splits phases per segment") {
  const Json doc = run(cli::Command::Run, "two_plates.json").document;
  const Json& phases = doc["phases"];
  REQUIRE(phases["segments"].size() == 2);
  const double sum = number(phases["segments"][0]["dynamical"]) + number(phases["segments"][1]["dynamical"]);
  CHECK(number(phases["dynamical"]) == Catch::Approx(sum).margin(1e-12));
  CHECK(number(doc["geodesic-check"]["segments"][0]["im_harmonic_analytic"]) <= 1e-12);
}

TEST_CASE("eigen sweep follows the spectrum law") {
  const cli::CommandResult result = run(cli::Command::Sweep, "eigen_sweep.json");
  CHECK(result.columns == std::vector<std::string>{"delta", "eigen_arg_1", "eigen_arg_2", "eigen_arg_3"});
  REQUIRE(result.records.size() == 31);
  for (const auto& record : result.records) {
    const double delta = number(record["delta"]);
    std::array<double, 3> got{number(record["eigen_arg_1"]), number(record["eigen_arg_2"]),
                              number(record["eigen_arg_3"])};
    for (double expected : {2.0 * delta, -2.0 * delta, 0.0}) {
      const double best = std::min({angle_gap(got[0], expected), angle_gap(got[1], expected),
                                    angle_gap(got[2], expected)});
      CHECK(best <= 1e-9);
    }
  }
}

TEST_CASE("sweep records indeterminate points as null") {
  const cli::CommandResult result = run(cli::Command::Sweep, "delta_sweep.json");
  REQUIRE(result.records.size() == 5);
  CHECK(result.records[2]["pancharatnam"].is_null());
  CHECK(result.records[2]["geometric"].is_null());
  CHECK(result.records[2]["visibility"].get<double>() <= 1e-12);
  CHECK_FALSE(result.records[1]["pancharatnam"].is_null());
  CHECK_FALSE(result.records[2]["eigen_arg_1"].is_null());
  const std::string csv = render(result, cli::Format::Csv);
  CHECK(read_csv(csv)[3][1] == "null");
}

TEST_CASE("s sweep shows the pi jump of the geometric phase") {
  const cli::CommandResult result = run(cli::Command::Sweep, "jump_sweep.json");
  REQUIRE(result.records.size() == 35);
  double biggest = 0.0;
  double biggest_continuous = 0.0;
  for (std::size_t k = 1; k < result.records.size(); ++k) {
    const Json& a = result.records[k - 1];
    const Json& b = result.records[k];
    biggest = std::max(biggest, std::abs(number(b["phi_g"]) - number(a["phi_g"])));
    biggest_continuous = std::max(
        biggest_continuous, std::abs(number(b["phi_g_continuous"]) - number(a["phi_g_continuous"])));
    // The curve-based geometric phase follows the continuous branch.
    CHECK(angle_gap(number(b["geometric"]), number(b["phi_g_continuous"])) <= 1e-6);
  }
  CHECK(std::abs(biggest - kPi) <= 0.05);
  CHECK(biggest_continuous <= 0.05);
}

TEST_CASE("run reports the jump block for a two-level input") {
  cli::Scenario s = cli::load_scenario(data("jump_sweep.json"));
  s.plates[0].delta = kPi / 4.0 + 0.1;
  s.outputs = {cli::Quantity::Jump};
  const Json doc = cli::execute(cli::Command::Run, s).document;
  CHECK(number(doc["jump"]["coupling"]) == Catch::Approx(std::sqrt(3.0) / 2.0).margin(1e-12));
  CHECK(std::abs(std::abs(number(doc["jump"]["jump"])) - kPi) <= 1e-2);

  s.plates[0].chi = 0.3;
  CHECK_THROWS_AS(cli::execute(cli::Command::Run, s), cli::ConfigError);
}

TEST_CASE("geodesic and vertex commands") {
  const Json geo = run(cli::Command::Geodesic, "geodesic.json").document;
  CHECK(number(geo["s0"]) == Catch::Approx(kPi / 2.0).margin(1e-15));
  CHECK(number(geo["length"]) == Catch::Approx(kPi / 2.0).margin(1e-6));
  CHECK(number(geo["analytic"]["geodesic_residual"]) <= 1e-9);
  CHECK(number(geo["finite_difference"]["geodesic_residual"]) <= 1e-5);

  const Json vertex = run(cli::Command::Vertex, "vertex.json").document;
  CHECK(number(vertex["vertex_phase"]) == Catch::Approx(-kPi / 4.0).margin(1e-12));
}

TEST_CASE("output is deterministic") {
  for (const char* config : {"two_plates.json", "jump_sweep.json"}) {
    const auto command = std::string(config) == "jump_sweep.json" ? cli::Command::Sweep : cli::Command::Run;
    for (auto format : {cli::Format::Json, cli::Format::Csv}) {
      CHECK(render(run(command, config), format) == render(run(command, config), format));
    }
  }
}

TEST_CASE("CSV and JSON carry identical numbers") {
  const cli::CommandResult result = run(cli::Command::Sweep, "jump_sweep.json");
  const Json doc = Json::parse(render(result, cli::Format::Json));
  const auto rows = read_csv(render(result, cli::Format::Csv));
  REQUIRE(rows.size() == doc["records"].size() + 1);
  const auto& header = rows[0];
  for (std::size_t r = 0; r < doc["records"].size(); ++r) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      const Json& value = doc["records"][r][header[c]];
      if (value.is_null()) {
        CHECK(rows[r + 1][c] == "null");
      } else {
        CHECK(std::stod(rows[r + 1][c]) == value.get<double>());
        CHECK(rows[r + 1][c] == io::format_number(value.get<double>()));
      }
    }
  }
}

TEST_CASE("a state printed as JSON reproduces the same results when read back") {
  const cli::CommandResult first = run(cli::Command::Run, "two_plates.json");
  cli::Scenario s = cli::load_scenario(data("two_plates.json"));
  const Json printed = Json::parse(render(first, cli::Format::Json));
  s.input_state = io::state_from_json(printed["input_state"]);
  const cli::CommandResult second = cli::execute(cli::Command::Run, s);
  CHECK(render(first, cli::Format::Json) == render(second, cli::Format::Json));

  // Chaining: the final state becomes the input of a follow-up run.
  s.input_state = io::state_from_json(printed["phases"]["final_state"]);
  s.plates = {{0.0, 0.0}};
  const Json doc = cli::execute(cli::Command::Run, s).document;
  CHECK(doc["input_state"] == printed["phases"]["final_state"]);
}

#ifdef BIPHASE_TOOL_PATH

namespace {

int tool(const std::string& arguments) {
  const std::string command = std::string(BIPHASE_TOOL_PATH) + " " + arguments + " 2>/dev/null";
  const int status = std::system(command.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("tool exit codes") {
  const auto out = (scratch_dir() / "out.json").string();
  CHECK(tool("run --config " + data("identity.json") + " --out " + out) == cli::kExitOk);
  CHECK(tool("run --config " + data("qwp_eigenvector.json") + " --out " + out + " --quiet") ==
        cli::kExitOk);
  CHECK(tool("run --config " + data("orthogonal.json") + " --out " + out) == cli::kExitNumeric);
  CHECK(tool("sweep --config " + data("empty_grid.json") + " --out " + out) == cli::kExitConfig);
  CHECK(tool("run --config " + data("unknown_key.json") + " --out " + out) == cli::kExitConfig);
  CHECK(tool("run --config " + data("missing.json") + " --out " + out) == cli::kExitConfig);
  CHECK(tool("run --out " + out) == cli::kExitConfig);
  CHECK(tool("explode --config " + data("identity.json")) == cli::kExitConfig);
  CHECK(tool("run --config " + data("identity.json") + " --format xml") == cli::kExitConfig);
  CHECK(tool("sweep --config " + data("identity.json") + " --out " + out) == cli::kExitConfig);
  CHECK(tool("sweep --config " + data("delta_sweep.json") + " --out " + out) == cli::kExitOk);
}

TEST_CASE("tool output is byte-identical across runs and matches the library") {
  const auto dir = scratch_dir();
  for (const char* format : {"json", "csv"}) {
    const auto a = (dir / (std::string("a.") + format)).string();
    const auto b = (dir / (std::string("b.") + format)).string();
    REQUIRE(tool("sweep --config " + data("jump_sweep.json") + " --format " + format + " --out " + a) == 0);
    REQUIRE(tool("sweep --config " + data("jump_sweep.json") + " --format " + format + " --out " + b) == 0);
    CHECK(slurp(a) == slurp(b));
    const auto expected = render(run(cli::Command::Sweep, "jump_sweep.json"),
                                 cli::format_from_string(format));
    CHECK(slurp(a) == expected);
  }
}

TEST_CASE("tool writes to stdout by default") {
  const auto captured = (scratch_dir() / "stdout.json").string();
  REQUIRE(tool("vertex --config " + data("vertex.json") + " > " + captured) == 0);
  const Json doc = Json::parse(slurp(captured));
  CHECK(doc["vertex_phase"].get<double>() == Catch::Approx(-kPi / 4.0).margin(1e-12));
}

#endif
