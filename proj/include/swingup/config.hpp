#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "swingup/dynamics.hpp"
#include "swingup/photonstats.hpp"
#include "swingup/sweep.hpp"

namespace swingup {

enum class Subcommand { trace, sweep, rabi, delay, optimize, g2, hom };

std::optional<Subcommand> parse_subcommand(const std::string& name);
std::string to_string(Subcommand command);

struct SweepSection {
  std::vector<double> detuning_axis;
  std::vector<double> ratio_axis;
  bool normalize = false;
  bool image = true;
};

struct OptimizeSection {
  // Without an explicit seed the sweep section is run and its maximum is used.
  std::optional<std::pair<double, double>> seed;
  RefineOptions options;
};

enum class HistogramFormat { timetags, binned };

struct HistogramSection {
  std::filesystem::path input;
  HistogramFormat format = HistogramFormat::binned;
  double bin_width = 100.0;  // ps, time-tag input only
  std::optional<double> t0_offset;
  double rep_period = 12.5;  // ns
};

/// Everything one invocation needs. Loaded from a single JSON document with
/// the sections pulse1, pulse2, integration, sweep, rabi, delay, optimize,
/// histogram, windows, hom, output and an optional top-level threads cap.
/// Unknown keys are rejected.
struct RunConfig {
  SimConfig sim;
  std::optional<SweepSection> sweep;
  std::optional<std::vector<double>> rabi_areas;
  std::optional<std::vector<double>> delays;
  std::optional<OptimizeSection> optimize;
  std::optional<HistogramSection> histogram;
  WindowSpec windows;
  bool windows_given = false;
  double jitter = 150.0;  // ps

  std::filesystem::path output_dir = ".";
  std::string stem;  // empty: subcommand name
  unsigned threads = 0;

  // Canonical dump of the physics-relevant sections; stable across runs.
  std::string canonical;
  std::string hash_hex() const;
};

RunConfig parse_run_config(const nlohmann::json& document,
                           const std::filesystem::path& base_dir = ".");
RunConfig load_run_config(const std::filesystem::path& path);

// Throws ConfigError unless every block needed by `command` is present and
// passes its module validation, and the output directory is writable.
void check_run_config(const RunConfig& config, Subcommand command);

std::uint64_t fnv1a64(std::string_view data);

}  // namespace swingup
