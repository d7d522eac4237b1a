#pragma once

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "swingup/config.hpp"

namespace swingup {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitIo = 4;

struct CommandResult {
  std::vector<std::filesystem::path> files;
  nlohmann::json summary;
};

// Validates the configuration for `command`, runs it and writes its data files
// into config.output_dir. Data files carry no timestamps, so identical inputs
// give identical bytes.
CommandResult run_command(Subcommand command, const RunConfig& config);

// Maps an exception escaping run_command/load_run_config to an exit code.
int exit_code_for(const std::exception& error);

}  // namespace swingup
