#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qcons/commands.hpp"

namespace {

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantized consensus of multi-agent systems under DoS: conditions, simulation, sweeps"};
  app.require_subcommand(1);

  std::string scenario;
  std::string out_dir = ".";
  bool strict = false;
  bool plot = false;
  std::string axis;
  std::string values;
  unsigned jobs = 0;
  std::string example;

  auto* check = app.add_subcommand("check", "Evaluate every sufficient condition and write conditions.json");
  check->add_option("scenario", scenario, "Scenario JSON file")->required();
  check->add_option("--out", out_dir, "Output directory");

  auto* simulate = app.add_subcommand("simulate", "Run the closed loop; write trace.csv, summary.json, conditions.json");
  simulate->add_option("scenario", scenario, "Scenario JSON file")->required();
  simulate->add_option("--out", out_dir, "Output directory")->required();
  simulate->add_flag("--strict", strict, "Abort (exit 1) on the first quantizer saturation");
  simulate->add_flag("--plot", plot, "Also write delta.svg, theta.svg and symbols.svg");

  auto* sweep = app.add_subcommand("sweep", "Run one simulation per parameter value and write sweep.csv");
  sweep->add_option("scenario", scenario, "Scenario JSON file")->required();
  sweep->add_option("--axis", axis, "duty | gamma1 | gamma2 | R | seed")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required();
  sweep->add_option("--out", out_dir, "Output directory")->required();
  sweep->add_option("--jobs", jobs, "Concurrent runs (default: available cores)");

  auto* repro = app.add_subcommand("repro", "Run a shipped example and check its assertions");
  repro->add_option("name", example, "example-a | example-scalar | example-scalar-unquantized")->required();
  repro->add_option("--out", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    qcons::CommandResult result;
    if (*check) {
      result = qcons::cmd_check(scenario, out_dir, std::cout, std::cerr);
    } else if (*simulate) {
      result = qcons::cmd_simulate(scenario, out_dir, strict, plot, std::cout, std::cerr);
    } else if (*sweep) {
      result = qcons::cmd_sweep(scenario, axis, split_csv(values), out_dir, jobs, std::cout, std::cerr);
    } else if (*repro) {
      if (out_dir == ".") out_dir = "repro-" + example;
      result = qcons::cmd_repro(example, out_dir, std::cout, std::cerr);
    }
    if (qcons::log_level_from_env() == qcons::LogLevel::Debug) {
      for (const auto& p : result.artifacts) std::cerr << "wrote " << p.string() << "\n";
    }
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
