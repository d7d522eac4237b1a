#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "swingup/dynamics.hpp"
#include "swingup/photonstats.hpp"
#include "swingup/sweep.hpp"

namespace swingup::io {

using nlohmann::json;

// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);
double parse_double(std::string_view text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

// RFC-4180-style rows; quoted fields are not needed by any format here and are rejected.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

json to_json(const PulseSpec& pulse);
PulseSpec pulse_from_json(const json& j);
json to_json(const SimConfig& config);
SimConfig sim_config_from_json(const json& j);

// t_ps,population,coherence_abs
std::string trajectory_csv(const Trajectory& trajectory);
// Only the sampled columns survive the round trip.
Trajectory parse_trajectory_csv(std::string_view text);

/// Sweep map as CSV. The first row holds the detuning axis after a corner
/// label, every following row starts with its ratio:
///   ratio\detuning_mev,d0,d1,...
///   r0,f00,f01,...
std::string sweep_csv(const SweepResult& result);
SweepResult parse_sweep_csv(std::string_view text, const SimConfig& base, bool normalized);

// {detuning_axis, ratio_axis, fidelity (rows per ratio), metadata}
json sweep_json(const SweepResult& result, const json& extra_metadata = json::object());
SweepResult sweep_from_json(const json& j);

// Binary PGM (P5), 8-bit, pixel = round(255 * fidelity). The top image row is
// the largest ratio.
std::string sweep_pgm(const SweepResult& result);

struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;
};
GrayImage parse_pgm(std::string_view data);

std::string rabi_csv(const RabiCurve& curve);
RabiCurve parse_rabi_csv(std::string_view text);

std::string delay_csv(const std::vector<DelayPoint>& series);
std::vector<DelayPoint> parse_delay_csv(std::string_view text);

json to_json(const StatResult& result);
StatResult stat_from_json(const json& j);

json to_json(const RefinedMaximum& refined);
RefinedMaximum refined_from_json(const json& j);

// Input histograms: a `delay_ps` column of time tags, or `bin_start_ps,count`.
std::vector<double> parse_timetag_csv(std::string_view text);
CorrelationHistogram parse_binned_csv(std::string_view text, double rep_period_ns);

}  // namespace swingup::io
