#include "swingup/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "swingup/errors.hpp"
#include "swingup/io.hpp"

namespace swingup {

using nlohmann::json;

namespace {

constexpr std::pair<Subcommand, const char*> kNames[] = {
    {Subcommand::trace, "trace"}, {Subcommand::sweep, "sweep"},       {Subcommand::rabi, "rabi"},
    {Subcommand::delay, "delay"}, {Subcommand::optimize, "optimize"}, {Subcommand::g2, "g2"},
    {Subcommand::hom, "hom"}};

class Section {
public:
  Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
    if (!j_.is_object()) throw ConfigError("section '" + name_ + "' must be an object");
  }

  ~Section() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw ConfigError("unknown key '" + key + "' in section '" + name_ + "'");
    }
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(name_ + "." + key + " must be a number");
    return v.get<double>();
  }

  double required_number(const std::string& key) {
    if (!has(key)) throw ConfigError("missing " + name_ + "." + key);
    return number(key, 0.0);
  }

  long long integer(const std::string& key, long long fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) throw ConfigError(name_ + "." + key + " must be an integer");
    return v.get<long long>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError(name_ + "." + key + " must be true or false");
    return v.get<bool>();
  }

  std::string text(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(name_ + "." + key + " must be a string");
    return v.get<std::string>();
  }

  // Either an explicit list or {"min", "max", "points"}.
  std::vector<double> axis(const std::string& key) {
    if (!has(key)) throw ConfigError("missing " + name_ + "." + key);
    const json& v = j_.at(key);
    if (v.is_array()) {
      std::vector<double> out;
      for (const auto& e : v) {
        if (!e.is_number()) throw ConfigError(name_ + "." + key + " entries must be numbers");
        out.push_back(e.get<double>());
      }
      return out;
    }
    Section range(v, name_ + "." + key);
    const double lo = range.required_number("min");
    const double hi = range.required_number("max");
    const long long n = range.integer("points", 0);
    if (n < 1) throw ConfigError(name_ + "." + key + ".points must be >= 1");
    return linspace(lo, hi, static_cast<std::size_t>(n));
  }

  const std::string& name() const { return name_; }

private:
  const json& j_;
  std::string name_;
  std::set<std::string> seen_;
};

PulseSpec parse_pulse(Section s) {
  PulseSpec p;
  p.detuning = s.number("detuning_mev", 0.0);
  p.area = s.number("area_pi", 0.0);
  p.fwhm = s.number("fwhm_ps", 10.0);
  p.delay = s.number("delay_ps", 0.0);
  p.phase = s.number("phase_rad", 0.0);
  return p;
}

}  // namespace

std::optional<Subcommand> parse_subcommand(const std::string& name) {
  for (const auto& [cmd, n] : kNames) {
    if (name == n) return cmd;
  }
  return std::nullopt;
}

std::string to_string(Subcommand command) {
  for (const auto& [cmd, n] : kNames) {
    if (cmd == command) return n;
  }
  return "unknown";
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string RunConfig::hash_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical)));
  return buf;
}

RunConfig parse_run_config(const json& document, const std::filesystem::path& base_dir) {
  RunConfig rc;
  Section top(document, "config");

  if (top.has("pulse1")) rc.sim.pulse1 = parse_pulse(Section(top.raw("pulse1"), "pulse1"));
  if (top.has("pulse2")) rc.sim.pulse2 = parse_pulse(Section(top.raw("pulse2"), "pulse2"));

  if (top.has("integration")) {
    Section s(top.raw("integration"), "integration");
    rc.sim.t_start = s.number("t_start_ps", rc.sim.t_start);
    rc.sim.t_end = s.number("t_end_ps", rc.sim.t_end);
    rc.sim.step = s.number("step_ps", rc.sim.step);
    const std::string mode = s.text("mode", "fixed");
    if (mode == "fixed") {
      rc.sim.mode = StepMode::fixed;
    } else if (mode == "adaptive") {
      rc.sim.mode = StepMode::adaptive;
    } else {
      throw ConfigError("integration.mode must be 'fixed' or 'adaptive'");
    }
    rc.sim.tolerance = s.number("tolerance", rc.sim.tolerance);
    const long long stride = s.integer("record_stride", 1);
    if (stride < 1) throw ConfigError("integration.record_stride must be >= 1");
    rc.sim.record_stride = static_cast<std::size_t>(stride);
  }

  if (top.has("sweep")) {
    Section s(top.raw("sweep"), "sweep");
    SweepSection sw;
    sw.detuning_axis = s.axis("detuning_mev");
    sw.ratio_axis = s.axis("ratio");
    sw.normalize = s.boolean("normalize", false);
    sw.image = s.boolean("image", true);
    rc.sweep = std::move(sw);
  }

  if (top.has("rabi")) {
    Section s(top.raw("rabi"), "rabi");
    rc.rabi_areas = s.axis("areas_pi");
  }

  if (top.has("delay")) {
    Section s(top.raw("delay"), "delay");
    rc.delays = s.axis("delays_ps");
  }

  if (top.has("optimize")) {
    Section s(top.raw("optimize"), "optimize");
    OptimizeSection opt;
    const bool has_d = s.has("seed_detuning_mev");
    const bool has_r = s.has("seed_ratio");
    if (has_d != has_r) throw ConfigError("optimize needs both seed_detuning_mev and seed_ratio");
    if (has_d) {
      opt.seed = std::make_pair(s.required_number("seed_detuning_mev"), s.required_number("seed_ratio"));
    }
    const long long cap = s.integer("max_evaluations", 500);
    if (cap < 3) throw ConfigError("optimize.max_evaluations must be >= 3");
    opt.options.max_evaluations = static_cast<std::size_t>(cap);
    opt.options.tolerance = s.number("tolerance", opt.options.tolerance);
    opt.options.initial_step_detuning = s.number("initial_step_detuning_mev", opt.options.initial_step_detuning);
    opt.options.initial_step_ratio = s.number("initial_step_ratio", opt.options.initial_step_ratio);
    rc.optimize = opt;
  }

  if (top.has("histogram")) {
    Section s(top.raw("histogram"), "histogram");
    HistogramSection h;
    const std::string input = s.text("input", "");
    if (input.empty()) throw ConfigError("missing histogram.input");
    h.input = std::filesystem::path(input).is_absolute() ? std::filesystem::path(input) : base_dir / input;
    const std::string format = s.text("format", "binned");
    if (format == "binned") {
      h.format = HistogramFormat::binned;
    } else if (format == "timetags") {
      h.format = HistogramFormat::timetags;
    } else {
      throw ConfigError("histogram.format must be 'binned' or 'timetags'");
    }
    h.bin_width = s.number("bin_width_ps", h.bin_width);
    if (s.has("t0_offset_ps")) h.t0_offset = s.required_number("t0_offset_ps");
    h.rep_period = s.number("rep_period_ns", h.rep_period);
    rc.histogram = h;
  }

  if (top.has("windows")) {
    Section s(top.raw("windows"), "windows");
    rc.windows.peak_window = s.number("peak_window_ns", rc.windows.peak_window);
    rc.windows.background_window = s.number("background_window_ns", rc.windows.background_window);
    rc.windows.n_side_peaks = static_cast<int>(s.integer("n_side_peaks", rc.windows.n_side_peaks));
    const std::string loc = s.text("peak_location", "search");
    if (loc == "search") {
      rc.windows.location = PeakLocation::search;
    } else if (loc == "nominal") {
      rc.windows.location = PeakLocation::nominal;
    } else {
      throw ConfigError("windows.peak_location must be 'search' or 'nominal'");
    }
    rc.windows_given = true;
  }

  if (top.has("hom")) {
    Section s(top.raw("hom"), "hom");
    rc.jitter = s.number("jitter_ps", rc.jitter);
  }

  if (top.has("output")) {
    Section s(top.raw("output"), "output");
    const std::string dir = s.text("directory", ".");
    if (dir == ".") {
      rc.output_dir = base_dir;
    } else {
      rc.output_dir = std::filesystem::path(dir).is_absolute() ? std::filesystem::path(dir) : base_dir / dir;
    }
    rc.stem = s.text("stem", "");
  } else {
    rc.output_dir = base_dir;
  }

  if (top.has("threads")) {
    const long long t = top.integer("threads", 0);
    if (t < 0) throw ConfigError("threads must be >= 0");
    rc.threads = static_cast<unsigned>(t);
  }

  json canonical = document;
  canonical.erase("output");
  canonical.erase("threads");
  rc.canonical = canonical.dump();
  return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = io::read_file(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  json document;
  try {
    document = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_run_config(document, path.parent_path().empty() ? "." : path.parent_path());
}

void check_run_config(const RunConfig& config, Subcommand command) {
  auto need = [&](bool present, const char* section) {
    if (!present) throw ConfigError(to_string(command) + " requires a '" + section + "' section");
  };
  try {
    switch (command) {
      case Subcommand::trace:
        config.sim.validate();
        break;
      case Subcommand::sweep:
        need(config.sweep.has_value(), "sweep");
        SweepGrid{config.sweep->detuning_axis, config.sweep->ratio_axis, config.sim}.validate();
        break;
      case Subcommand::rabi:
        need(config.rabi_areas.has_value(), "rabi");
        config.sim.validate();
        if (config.sim.pulse1.detuning != 0.0 || config.sim.pulse2.area != 0.0) {
          throw ConfigError("rabi requires a single resonant pulse (pulse1.detuning_mev = 0, no pulse2)");
        }
        for (std::size_t k = 0; k < config.rabi_areas->size(); ++k) {
          const double a = (*config.rabi_areas)[k];
          if (!(a >= 0.0) || (k > 0 && !(a > (*config.rabi_areas)[k - 1]))) {
            throw ConfigError("rabi.areas_pi must be non-negative and strictly increasing");
          }
        }
        break;
      case Subcommand::delay:
        need(config.delays.has_value(), "delay");
        config.sim.validate();
        break;
      case Subcommand::optimize:
        need(config.optimize.has_value(), "optimize");
        config.sim.validate();
        if (config.optimize->seed) {
          const auto [d, r] = *config.optimize->seed;
          if (!(d < 0.0) || !(r > 0.0)) throw ConfigError("optimize seed needs detuning < 0 and ratio > 0");
        } else {
          need(config.sweep.has_value(), "sweep");
          SweepGrid{config.sweep->detuning_axis, config.sweep->ratio_axis, config.sim}.validate();
        }
        break;
      case Subcommand::g2:
        need(config.histogram.has_value(), "histogram");
        config.windows.validate(config.histogram->rep_period);
        if (!std::filesystem::exists(config.histogram->input)) {
          throw ConfigError("histogram input " + config.histogram->input.string() + " does not exist");
        }
        break;
      case Subcommand::hom:
        need(config.histogram.has_value(), "histogram");
        if (config.windows_given && !(config.windows.peak_window > 0.0)) {
          throw ConfigError("windows.peak_window_ns must be positive");
        }
        if (!(config.jitter >= 0.0)) throw ConfigError("hom.jitter_ps must be >= 0");
        if (!std::filesystem::exists(config.histogram->input)) {
          throw ConfigError("histogram input " + config.histogram->input.string() + " does not exist");
        }
        break;
    }
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }

  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec || !std::filesystem::is_directory(config.output_dir)) {
    throw ConfigError("output directory " + config.output_dir.string() + " is not usable");
  }
  const auto probe = config.output_dir / ".swingup-write-probe";
  {
    std::ofstream out(probe);
    if (!out) throw ConfigError("output directory " + config.output_dir.string() + " is not writable");
  }
  std::filesystem::remove(probe, ec);
}

}  // namespace swingup
