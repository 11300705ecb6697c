// biphase: phase analysis of biphoton states driven through phase plates.
//
//   biphase run|sweep|eigen|geodesic|vertex --config <path> [--out <path>]
//           [--format json|csv] [--quiet]

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI/CLI.hpp>

#include "biphase/cli.hpp"

namespace {

int fail(int code, const std::string& message) {
  std::cerr << "biphase: " << message << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace biphase;

  CLI::App app{"Pancharatnam, dynamical and geometric phases of biphotons under phase plates"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_path = "-";
  std::string format = "json";
  bool quiet = false;

  const std::pair<const char*, const char*> commands[] = {
      {"run", "Phases and other requested quantities for one scenario"},
      {"sweep", "Evaluate the requested quantities over a delta, chi or s grid"},
      {"eigen", "Eigenvalues and eigenvectors of the composed plate matrix"},
      {"geodesic", "Geodesic and horizontality residuals of a curve"},
      {"vertex", "Bargmann (vertex) phase of a closed polygon of states"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "Scenario JSON file")->required();
    sub->add_option("--out", out_path, "Output file ('-' for stdout)");
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_flag("--quiet", quiet, "Suppress progress messages");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitConfig;
  }

  const std::string command_name = app.get_subcommands().front()->get_name();
  try {
    const cli::Command command = cli::command_from_string(command_name);
    const cli::Scenario scenario = cli::load_scenario(config_path);
    const cli::CommandResult result = cli::execute(command, scenario);

    std::ostringstream text;
    cli::render(result, cli::format_from_string(format), text);
    if (out_path == "-") {
      std::cout << text.str();
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) return fail(cli::kExitConfig, "cannot write output file '" + out_path + "'");
      out << text.str();
      if (!quiet) {
        std::cerr << "biphase: " << command_name << " wrote " << result.records.size()
                  << " record(s) to " << out_path << '\n';
      }
    }
  } catch (const UsageError& e) {
    return fail(cli::kExitConfig, std::string("configuration error: ") + e.what());
  } catch (const NumericError& e) {
    return fail(cli::kExitNumeric, std::string("numeric error: ") + e.what());
  }
  return cli::kExitOk;
}
