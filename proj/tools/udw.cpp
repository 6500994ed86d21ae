// udw: run detector-response scenarios from a JSON config or a built-in preset.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "udw/scenario.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw udw::cli::ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int execute(udw::cli::Scenario s, int jobs) {
  const auto sum = udw::cli::run_scenario(s, jobs, std::cout);
  std::cerr << (s.name.empty() ? "scenario" : s.name) << ": " << sum.rows << " rows";
  if (!sum.output_path.empty()) std::cerr << " -> " << sum.output_path;
  if (sum.warnings) std::cerr << " (" << sum.warnings << " warnings)";
  std::cerr << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unruh-DeWitt detector response to Fock wavepackets"};
  app.require_subcommand(1);

  std::string config_path, preset_name, out_path, format;
  double tol = 0.0;
  int jobs = 0;

  auto* run = app.add_subcommand("run", "run a scenario config");
  run->add_option("config", config_path, "scenario JSON file")->required();
  run->add_option("--out", out_path, "output path ('-' for stdout)");
  run->add_option("--tol", tol, "relative tolerance")->check(CLI::PositiveNumber);
  run->add_option("--jobs", jobs, "worker threads (default: all cores)")->check(CLI::NonNegativeNumber);

  auto* pre = app.add_subcommand("preset", "run a built-in preset");
  pre->add_option("name", preset_name, "preset name")->required();
  pre->add_option("--out", out_path, "output path ('-' for stdout)");
  pre->add_option("--tol", tol, "relative tolerance")->check(CLI::PositiveNumber);
  pre->add_option("--jobs", jobs, "worker threads (default: all cores)")->check(CLI::NonNegativeNumber);
  pre->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  auto* dump = pre->add_flag("--print-config", "print the preset as a config file instead of running it");

  auto* list = app.add_subcommand("list-presets", "list built-in presets");

  auto* val = app.add_subcommand("validate", "check a scenario config without running it");
  val->add_option("config", config_path, "scenario JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      std::cout << udw::cli::list_presets();
      return 0;
    }
    udw::cli::Scenario s;
    if (pre->parsed()) {
      s = udw::cli::preset(preset_name);
      if (!format.empty()) {
        s.format = format;
        if (s.output_path.size() > 4 && s.output_path.ends_with(".csv"))
          s.output_path = s.output_path.substr(0, s.output_path.size() - 4) + "." + format;
      }
      if (*dump) {
        std::cout << udw::cli::to_json(s).dump(2) << "\n";
        return 0;
      }
    } else {
      s = udw::cli::parse_scenario(read_file(config_path));
      if (val->parsed()) {
        const auto n = udw::cli::grid_points(s).size();
        std::cout << config_path << ": ok (" << udw::cli::to_string(s.kind) << ", " << n << " grid points)\n";
        return 0;
      }
    }
    if (!out_path.empty()) s.output_path = out_path == "-" ? "" : out_path;
    if (tol > 0.0) s.rel_tol = tol;
    return execute(std::move(s), jobs);
  } catch (const udw::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
