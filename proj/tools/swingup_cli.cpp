// Command-line front end for the swing-up simulator and correlation analysis.
//
//   swingup <trace|sweep|rabi|delay|optimize|g2|hom> --config run.json
//           [--threads N] [--output-dir DIR]
//
// SWINGUP_THREADS and SWINGUP_OUTPUT_DIR override the config file; the flags
// override both.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "swingup/commands.hpp"
#include "swingup/config.hpp"
#include "swingup/errors.hpp"

namespace {

struct Options {
  std::string config_path;
  int threads = -1;
  std::string output_dir;
};

int run(swingup::Subcommand command, const Options& opts) {
  try {
    swingup::RunConfig config = swingup::load_run_config(opts.config_path);
    if (const char* env = std::getenv("SWINGUP_THREADS")) {
      try {
        const int t = std::stoi(env);
        if (t < 0) throw std::invalid_argument("negative");
        config.threads = static_cast<unsigned>(t);
      } catch (const std::exception&) {
        throw swingup::ConfigError(std::string("SWINGUP_THREADS is not a thread count: ") + env);
      }
    }
    if (const char* env = std::getenv("SWINGUP_OUTPUT_DIR")) config.output_dir = env;
    if (opts.threads >= 0) config.threads = static_cast<unsigned>(opts.threads);
    if (!opts.output_dir.empty()) config.output_dir = opts.output_dir;

    const swingup::CommandResult result = swingup::run_command(command, config);
    nlohmann::json report = result.summary;
    report["files"] = nlohmann::json::array();
    for (const auto& f : result.files) report["files"].push_back(f.string());
    std::cout << report.dump(2) << "\n";
    return swingup::kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "swingup " << swingup::to_string(command) << ": " << e.what() << "\n";
    return swingup::exit_code_for(e);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Swing-up excitation simulator and photon correlation analysis"};
  app.require_subcommand(1);

  Options opts;
  const std::pair<swingup::Subcommand, const char*> commands[] = {
      {swingup::Subcommand::trace, "time-resolved occupation for one pulse pair"},
      {swingup::Subcommand::sweep, "fidelity map over second-pulse detuning and area ratio"},
      {swingup::Subcommand::rabi, "resonant Rabi curve and pi-pulse calibration"},
      {swingup::Subcommand::delay, "fidelity versus delay of the second pulse"},
      {swingup::Subcommand::optimize, "refine a fidelity maximum with Nelder-Mead"},
      {swingup::Subcommand::g2, "raw and background-corrected g2(0) from a histogram"},
      {swingup::Subcommand::hom, "HOM visibility from a correlation histogram"},
  };
  for (const auto& [cmd, help] : commands) {
    CLI::App* sub = app.add_subcommand(swingup::to_string(cmd), help);
    sub->add_option("-c,--config", opts.config_path, "JSON run configuration")->required();
    sub->add_option("-t,--threads", opts.threads, "thread cap for sweeps (0 = all cores)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("-o,--output-dir", opts.output_dir, "directory for data files");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : swingup::kExitConfig;
  }

  for (const auto& [cmd, help] : commands) {
    if (app.got_subcommand(swingup::to_string(cmd))) return run(cmd, opts);
  }
  return swingup::kExitConfig;
}
