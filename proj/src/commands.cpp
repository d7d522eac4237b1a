#include "swingup/commands.hpp"

#include "swingup/errors.hpp"
#include "swingup/io.hpp"
#include "swingup/photonstats.hpp"
#include "swingup/sweep.hpp"

namespace swingup {

using nlohmann::json;

namespace {

std::filesystem::path output_path(const RunConfig& config, Subcommand command,
                                  const std::string& suffix) {
  const std::string stem = config.stem.empty() ? to_string(command) : config.stem;
  return config.output_dir / (stem + suffix);
}

json common_metadata(const RunConfig& config, Subcommand command) {
  return {{"command", to_string(command)},
          {"config_hash", config.hash_hex()},
          {"version", SWINGUP_VERSION}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

CommandResult write_json(const RunConfig& config, Subcommand command, const std::string& suffix,
                         const json& document, CommandResult result) {
  const auto path = output_path(config, command, suffix);
  io::write_file(path, dump(document));
  result.files.push_back(path);
  return result;
}

CommandResult cmd_trace(const RunConfig& config) {
  const Trajectory trajectory = evolve(config.sim);
  CommandResult result;
  const auto path = output_path(config, Subcommand::trace, ".csv");
  io::write_file(path, io::trajectory_csv(trajectory));
  result.files.push_back(path);
  result.summary = {{"final_population", trajectory.final_state.rho11},
                    {"samples", trajectory.times.size()},
                    {"steps", trajectory.steps},
                    {"max_trace_error", trajectory.max_trace_error},
                    {"max_purity_error", trajectory.max_purity_error}};
  return result;
}

SweepResult sweep_for(const RunConfig& config) {
  const SweepGrid grid{config.sweep->detuning_axis, config.sweep->ratio_axis, config.sim};
  return run_sweep(grid, SweepOptions{config.threads});
}

json maximum_json(const GridMaximum& m) {
  return {{"detuning_mev", m.detuning}, {"ratio", m.ratio}, {"fidelity", m.fidelity}};
}

CommandResult cmd_sweep(const RunConfig& config) {
  SweepResult result = sweep_for(config);
  const GridMaximum raw_max = find_maximum(result);
  if (config.sweep->normalize) result = normalize(result);
  const GridMaximum max = find_maximum(result);

  json meta = common_metadata(config, Subcommand::sweep);
  meta["argmax"] = maximum_json(max);
  meta["unnormalized_max_fidelity"] = raw_max.fidelity;

  CommandResult out;
  const auto csv = output_path(config, Subcommand::sweep, ".csv");
  io::write_file(csv, io::sweep_csv(result));
  out.files.push_back(csv);
  const auto js = output_path(config, Subcommand::sweep, ".json");
  io::write_file(js, dump(io::sweep_json(result, meta)));
  out.files.push_back(js);
  if (config.sweep->image) {
    const auto pgm = output_path(config, Subcommand::sweep, ".pgm");
    io::write_file(pgm, io::sweep_pgm(result));
    out.files.push_back(pgm);
  }
  out.summary = {{"argmax", maximum_json(max)}, {"cells", result.fidelity.size()}};
  return out;
}

CommandResult cmd_rabi(const RunConfig& config) {
  const RabiCurve curve = rabi_curve(*config.rabi_areas, config.sim);
  CommandResult out;
  const auto path = output_path(config, Subcommand::rabi, ".csv");
  io::write_file(path, io::rabi_csv(curve));
  out.files.push_back(path);
  out.summary = json::object();
  try {
    out.summary["pi_area"] = pi_calibration(curve);
  } catch (const DomainError&) {
    out.summary["pi_area"] = nullptr;
  }
  return out;
}

CommandResult cmd_delay(const RunConfig& config) {
  const auto series = delay_series(*config.delays, config.sim);
  CommandResult out;
  const auto path = output_path(config, Subcommand::delay, ".csv");
  io::write_file(path, io::delay_csv(series));
  out.files.push_back(path);
  out.summary = {{"points", series.size()}};
  return out;
}

CommandResult cmd_optimize(const RunConfig& config) {
  std::pair<double, double> seed;
  json seed_info;
  if (config.optimize->seed) {
    seed = *config.optimize->seed;
    seed_info = {{"source", "config"}};
  } else {
    const GridMaximum m = find_maximum(sweep_for(config));
    seed = {m.detuning, m.ratio};
    seed_info = {{"source", "grid"}, {"grid_max", maximum_json(m)}};
  }
  seed_info["detuning_mev"] = seed.first;
  seed_info["ratio"] = seed.second;
  const RefinedMaximum refined = refine_maximum(seed, config.sim, config.optimize->options);
  json doc = io::to_json(refined);
  json meta = common_metadata(config, Subcommand::optimize);
  meta["seed"] = seed_info;
  meta["base"] = io::to_json(config.sim);
  doc["metadata"] = meta;
  CommandResult out;
  out.summary = {{"fidelity", refined.fidelity}, {"truncated", refined.truncated}};
  return write_json(config, Subcommand::optimize, ".json", doc, std::move(out));
}

CorrelationHistogram load_histogram(const HistogramSection& h) {
  const std::string text = io::read_file(h.input);
  if (h.format == HistogramFormat::binned) return io::parse_binned_csv(text, h.rep_period);
  const auto events = io::parse_timetag_csv(text);
  return bin_timetags(events, h.bin_width, h.t0_offset, h.rep_period);
}

json stat_document(const StatResult& r, json meta) {
  json doc = io::to_json(r);
  doc["metadata"] = std::move(meta);
  return doc;
}

CommandResult cmd_g2(const RunConfig& config) {
  const CorrelationHistogram hist = load_histogram(*config.histogram);
  const StatResult raw = g2_raw(hist, config.windows);
  const StatResult corrected = g2_corrected(hist, config.windows);
  json meta = common_metadata(config, Subcommand::g2);
  CommandResult out;
  meta["kind"] = "g2_raw";
  out = write_json(config, Subcommand::g2, ".json", stat_document(raw, meta), std::move(out));
  meta["kind"] = "g2_corrected";
  out = write_json(config, Subcommand::g2, "_corrected.json", stat_document(corrected, meta),
                   std::move(out));
  out.summary = {{"raw", raw.value}, {"corrected", corrected.value}};
  return out;
}

CommandResult cmd_hom(const RunConfig& config) {
  const CorrelationHistogram hist = load_histogram(*config.histogram);
  WindowSpec win = config.windows;
  if (!config.windows_given) win.peak_window = hom_default_window_ns(hist.rep_period);
  const StatResult v = hom_visibility(hist, win, config.jitter);
  json meta = common_metadata(config, Subcommand::hom);
  meta["kind"] = "hom_visibility";
  meta["jitter_ps"] = config.jitter;
  CommandResult out;
  out.summary = {{"visibility", v.value}, {"error_low", v.error_low}, {"error_high", v.error_high}};
  return write_json(config, Subcommand::hom, ".json", stat_document(v, meta), std::move(out));
}

}  // namespace

CommandResult run_command(Subcommand command, const RunConfig& config) {
  check_run_config(config, command);
  switch (command) {
    case Subcommand::trace: return cmd_trace(config);
    case Subcommand::sweep: return cmd_sweep(config);
    case Subcommand::rabi: return cmd_rabi(config);
    case Subcommand::delay: return cmd_delay(config);
    case Subcommand::optimize: return cmd_optimize(config);
    case Subcommand::g2: return cmd_g2(config);
    case Subcommand::hom: return cmd_hom(config);
  }
  throw ConfigError("unknown subcommand");
}

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const ConfigError*>(&error)) return kExitConfig;
  if (dynamic_cast<const IoError*>(&error)) return kExitIo;
  if (dynamic_cast<const std::filesystem::filesystem_error*>(&error)) return kExitIo;
  if (dynamic_cast<const nlohmann::json::exception*>(&error)) return kExitIo;
  return kExitNumerical;
}

}  // namespace swingup
