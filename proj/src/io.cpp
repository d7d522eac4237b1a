#include "swingup/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "swingup/errors.hpp"

namespace swingup::io {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw IoError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.find('"') != std::string_view::npos) throw IoError("quoted CSV fields are not supported");
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.emplace_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

namespace {

void expect_header(const std::vector<std::vector<std::string>>& rows,
                   const std::vector<std::string>& header) {
  if (rows.empty() || rows.front() != header) {
    std::string want;
    for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
    throw IoError("expected CSV header '" + want + "'");
  }
}

std::vector<std::vector<double>> numeric_rows(const std::vector<std::vector<std::string>>& rows,
                                              std::size_t first, std::size_t width) {
  std::vector<std::vector<double>> out;
  for (std::size_t r = first; r < rows.size(); ++r) {
    if (rows[r].size() != width) {
      throw IoError("CSV row " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size()) +
                    " fields, expected " + std::to_string(width));
    }
    std::vector<double> v;
    v.reserve(width);
    for (const auto& field : rows[r]) v.push_back(parse_double(field));
    out.push_back(std::move(v));
  }
  return out;
}

const json& member(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw IoError(std::string("missing JSON field '") + key + "'");
  return j.at(key);
}

}  // namespace

json to_json(const PulseSpec& pulse) {
  return {{"detuning_mev", pulse.detuning},
          {"area_pi", pulse.area},
          {"fwhm_ps", pulse.fwhm},
          {"delay_ps", pulse.delay},
          {"phase_rad", pulse.phase}};
}

PulseSpec pulse_from_json(const json& j) {
  PulseSpec p;
  p.detuning = member(j, "detuning_mev").get<double>();
  p.area = member(j, "area_pi").get<double>();
  p.fwhm = member(j, "fwhm_ps").get<double>();
  p.delay = member(j, "delay_ps").get<double>();
  p.phase = member(j, "phase_rad").get<double>();
  return p;
}

json to_json(const SimConfig& config) {
  return {{"pulse1", to_json(config.pulse1)},
          {"pulse2", to_json(config.pulse2)},
          {"t_start_ps", config.t_start},
          {"t_end_ps", config.t_end},
          {"step_ps", config.step},
          {"mode", config.mode == StepMode::fixed ? "fixed" : "adaptive"},
          {"tolerance", config.tolerance},
          {"record_stride", config.record_stride}};
}

SimConfig sim_config_from_json(const json& j) {
  SimConfig c;
  c.pulse1 = pulse_from_json(member(j, "pulse1"));
  c.pulse2 = pulse_from_json(member(j, "pulse2"));
  c.t_start = member(j, "t_start_ps").get<double>();
  c.t_end = member(j, "t_end_ps").get<double>();
  c.step = member(j, "step_ps").get<double>();
  const auto mode = member(j, "mode").get<std::string>();
  if (mode != "fixed" && mode != "adaptive") throw IoError("unknown step mode '" + mode + "'");
  c.mode = mode == "fixed" ? StepMode::fixed : StepMode::adaptive;
  c.tolerance = member(j, "tolerance").get<double>();
  c.record_stride = member(j, "record_stride").get<std::size_t>();
  return c;
}

std::string trajectory_csv(const Trajectory& trajectory) {
  std::string out = "t_ps,population,coherence_abs\n";
  for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
    out += format_double(trajectory.times[k]);
    out += ',';
    out += format_double(trajectory.excited_population[k]);
    out += ',';
    out += format_double(trajectory.coherence_magnitude[k]);
    out += '\n';
  }
  return out;
}

Trajectory parse_trajectory_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  expect_header(rows, {"t_ps", "population", "coherence_abs"});
  Trajectory t;
  for (const auto& r : numeric_rows(rows, 1, 3)) {
    t.times.push_back(r[0]);
    t.excited_population.push_back(r[1]);
    t.coherence_magnitude.push_back(r[2]);
  }
  return t;
}

std::string sweep_csv(const SweepResult& result) {
  std::string out = "ratio\\detuning_mev";
  for (double d : result.grid.detuning_axis) out += ',' + format_double(d);
  out += '\n';
  for (std::size_t i = 0; i < result.rows(); ++i) {
    out += format_double(result.grid.ratio_axis[i]);
    for (std::size_t j = 0; j < result.cols(); ++j) out += ',' + format_double(result.at(i, j));
    out += '\n';
  }
  return out;
}

SweepResult parse_sweep_csv(std::string_view text, const SimConfig& base, bool normalized) {
  const auto rows = parse_csv(text);
  if (rows.empty() || rows.front().empty() || rows.front().front() != "ratio\\detuning_mev") {
    throw IoError("sweep CSV must start with 'ratio\\detuning_mev'");
  }
  SweepResult result;
  result.grid.base = base;
  result.normalized = normalized;
  for (std::size_t j = 1; j < rows.front().size(); ++j) {
    result.grid.detuning_axis.push_back(parse_double(rows.front()[j]));
  }
  for (const auto& r : numeric_rows(rows, 1, rows.front().size())) {
    result.grid.ratio_axis.push_back(r[0]);
    result.fidelity.insert(result.fidelity.end(), r.begin() + 1, r.end());
  }
  return result;
}

json sweep_json(const SweepResult& result, const json& extra_metadata) {
  json fidelity = json::array();
  for (std::size_t i = 0; i < result.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < result.cols(); ++j) row.push_back(result.at(i, j));
    fidelity.push_back(std::move(row));
  }
  json metadata = extra_metadata;
  metadata["base"] = to_json(result.grid.base);
  metadata["pulse1"] = to_json(result.grid.base.pulse1);
  metadata["step_ps"] = result.grid.base.step;
  metadata["normalized"] = result.normalized;
  metadata["version"] = SWINGUP_VERSION;
  return {{"detuning_axis", result.grid.detuning_axis},
          {"ratio_axis", result.grid.ratio_axis},
          {"fidelity", std::move(fidelity)},
          {"metadata", std::move(metadata)}};
}

SweepResult sweep_from_json(const json& j) {
  SweepResult result;
  result.grid.detuning_axis = member(j, "detuning_axis").get<std::vector<double>>();
  result.grid.ratio_axis = member(j, "ratio_axis").get<std::vector<double>>();
  const json& meta = member(j, "metadata");
  result.grid.base = sim_config_from_json(member(meta, "base"));
  result.normalized = member(meta, "normalized").get<bool>();
  const json& rows = member(j, "fidelity");
  if (rows.size() != result.grid.ratio_axis.size()) throw IoError("fidelity row count mismatch");
  for (const auto& row : rows) {
    if (row.size() != result.grid.detuning_axis.size()) {
      throw IoError("fidelity column count mismatch");
    }
    for (const auto& v : row) result.fidelity.push_back(v.get<double>());
  }
  return result;
}

std::string sweep_pgm(const SweepResult& result) {
  std::string out = "P5\n" + std::to_string(result.cols()) + " " + std::to_string(result.rows()) +
                    "\n255\n";
  const bool ratio_increasing =
      result.rows() < 2 || result.grid.ratio_axis[1] > result.grid.ratio_axis[0];
  for (std::size_t r = 0; r < result.rows(); ++r) {
    const std::size_t i = ratio_increasing ? result.rows() - 1 - r : r;
    for (std::size_t j = 0; j < result.cols(); ++j) {
      const double v = std::clamp(result.at(i, j), 0.0, 1.0);
      out += static_cast<char>(static_cast<std::uint8_t>(std::lround(255.0 * v)));
    }
  }
  return out;
}

GrayImage parse_pgm(std::string_view data) {
  std::istringstream in{std::string(data)};
  std::string magic;
  GrayImage img;
  int maxval = 0;
  in >> magic >> img.width >> img.height >> maxval;
  if (!in || magic != "P5" || maxval != 255) throw IoError("not an 8-bit binary PGM");
  in.get();
  img.pixels.resize(img.width * img.height);
  in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
  if (!in) throw IoError("truncated PGM pixel data");
  return img;
}

std::string rabi_csv(const RabiCurve& curve) {
  std::string out = "area_pi,population\n";
  for (std::size_t k = 0; k < curve.areas.size(); ++k) {
    out += format_double(curve.areas[k]) + ',' + format_double(curve.populations[k]) + '\n';
  }
  return out;
}

RabiCurve parse_rabi_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  expect_header(rows, {"area_pi", "population"});
  RabiCurve c;
  for (const auto& r : numeric_rows(rows, 1, 2)) {
    c.areas.push_back(r[0]);
    c.populations.push_back(r[1]);
  }
  return c;
}

std::string delay_csv(const std::vector<DelayPoint>& series) {
  std::string out = "delay_ps,fidelity\n";
  for (const auto& p : series) out += format_double(p.delay) + ',' + format_double(p.fidelity) + '\n';
  return out;
}

std::vector<DelayPoint> parse_delay_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  expect_header(rows, {"delay_ps", "fidelity"});
  std::vector<DelayPoint> out;
  for (const auto& r : numeric_rows(rows, 1, 2)) out.push_back({r[0], r[1]});
  return out;
}

json to_json(const StatResult& result) {
  json windows = json::array();
  for (const auto& w : result.windows_used) {
    windows.push_back({{"role", w.role}, {"center_ps", w.center}, {"width_ps", w.width}, {"area", w.area}});
  }
  return {{"value", result.value},
          {"error_low", result.error_low},
          {"error_high", result.error_high},
          {"windows_used", std::move(windows)},
          {"flags", result.flags}};
}

StatResult stat_from_json(const json& j) {
  StatResult r;
  r.value = member(j, "value").get<double>();
  r.error_low = member(j, "error_low").get<double>();
  r.error_high = member(j, "error_high").get<double>();
  r.flags = member(j, "flags").get<std::vector<std::string>>();
  for (const auto& w : member(j, "windows_used")) {
    r.windows_used.push_back({member(w, "role").get<std::string>(), member(w, "center_ps").get<double>(),
                              member(w, "width_ps").get<double>(), member(w, "area").get<double>()});
  }
  return r;
}

json to_json(const RefinedMaximum& refined) {
  return {{"detuning_mev", refined.detuning},
          {"ratio", refined.ratio},
          {"fidelity", refined.fidelity},
          {"seed_fidelity", refined.seed_fidelity},
          {"evaluations", refined.evaluations},
          {"converged", refined.converged},
          {"truncated", refined.truncated},
          {"scaling", {{"detuning_mev_per_unit", refined.detuning_scale},
                       {"ratio_per_unit", refined.ratio_scale}}}};
}

RefinedMaximum refined_from_json(const json& j) {
  RefinedMaximum r{};
  r.detuning = member(j, "detuning_mev").get<double>();
  r.ratio = member(j, "ratio").get<double>();
  r.fidelity = member(j, "fidelity").get<double>();
  r.seed_fidelity = member(j, "seed_fidelity").get<double>();
  r.evaluations = member(j, "evaluations").get<std::size_t>();
  r.converged = member(j, "converged").get<bool>();
  r.truncated = member(j, "truncated").get<bool>();
  const json& s = member(j, "scaling");
  r.detuning_scale = member(s, "detuning_mev_per_unit").get<double>();
  r.ratio_scale = member(s, "ratio_per_unit").get<double>();
  return r;
}

std::vector<double> parse_timetag_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  expect_header(rows, {"delay_ps"});
  std::vector<double> events;
  for (const auto& r : numeric_rows(rows, 1, 1)) events.push_back(r[0]);
  return events;
}

CorrelationHistogram parse_binned_csv(std::string_view text, double rep_period_ns) {
  const auto rows = parse_csv(text);
  expect_header(rows, {"bin_start_ps", "count"});
  const auto data = numeric_rows(rows, 1, 2);
  if (data.size() < 2) throw IoError("binned histogram needs at least two bins");
  CorrelationHistogram hist;
  hist.rep_period = rep_period_ns;
  hist.t0_offset = data[0][0];
  hist.bin_width = data[1][0] - data[0][0];
  for (std::size_t k = 0; k < data.size(); ++k) {
    const double expected = hist.t0_offset + hist.bin_width * static_cast<double>(k);
    if (std::abs(data[k][0] - expected) > 1e-6 * hist.bin_width) {
      throw IoError("binned histogram must have uniform, contiguous bins");
    }
    const double c = data[k][1];
    if (!(c >= 0.0) || c != std::floor(c)) throw IoError("bin counts must be non-negative integers");
    hist.counts.push_back(static_cast<std::uint64_t>(c));
  }
  hist.validate();
  return hist;
}

}  // namespace swingup::io
