#include "swingup/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "swingup/errors.hpp"

namespace swingup {

std::vector<double> linspace(double first, double last, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {first};
  std::vector<double> out(n);
  const double span = last - first;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = first + span * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  out.back() = last;
  return out;
}

namespace {

void require_monotonic(const std::vector<double>& axis, const char* name) {
  if (axis.empty()) throw DomainError(std::string(name) + " must not be empty");
  for (double v : axis) {
    if (!std::isfinite(v)) throw DomainError(std::string(name) + " contains non-finite values");
  }
  if (axis.size() < 2) return;
  const bool increasing = axis[1] > axis[0];
  for (std::size_t i = 1; i < axis.size(); ++i) {
    if (increasing ? !(axis[i] > axis[i - 1]) : !(axis[i] < axis[i - 1])) {
      throw DomainError(std::string(name) + " must be strictly monotonic");
    }
  }
}

}  // namespace

void SweepGrid::validate() const {
  require_monotonic(detuning_axis, "detuning axis");
  require_monotonic(ratio_axis, "ratio axis");
  for (double r : ratio_axis) {
    if (r < 0.0) throw DomainError("ratio axis values must be non-negative");
  }
  base.validate();
}

SimConfig SweepGrid::cell_config(std::size_t ratio_index, std::size_t detuning_index) const {
  SimConfig cfg = base;
  cfg.pulse2.detuning = detuning_axis.at(detuning_index);
  cfg.pulse2.area = ratio_axis.at(ratio_index) * base.pulse1.area;
  return cfg;
}

SweepGrid default_grid(const SimConfig& base, std::size_t detuning_points,
                       std::size_t ratio_points) {
  return {linspace(-3.0, -0.92, detuning_points), linspace(0.44, 1.81, ratio_points), base};
}

SweepResult run_sweep(const SweepGrid& grid, const SweepOptions& options) {
  grid.validate();
  SweepResult result{grid, std::vector<double>(grid.ratio_axis.size() * grid.detuning_axis.size()),
                     false};
  const std::size_t cols = grid.detuning_axis.size();
  const std::size_t cells = result.fidelity.size();

  unsigned threads = options.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, cells));

  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::size_t failed_cell = cells;
  std::string failure_message;

  auto worker = [&] {
    for (std::size_t cell = next++; cell < cells; cell = next++) {
      const std::size_t i = cell / cols;
      const std::size_t j = cell % cols;
      try {
        result.fidelity[cell] = final_population(grid.cell_config(i, j));
      } catch (const std::exception& e) {
        std::lock_guard lock(failure_mutex);
        // Keep the lowest failing index so the report does not depend on scheduling.
        if (cell < failed_cell) {
          failed_cell = cell;
          failure_message = e.what();
        }
      }
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }

  if (failed_cell < cells) {
    const double detuning = grid.detuning_axis[failed_cell % cols];
    const double ratio = grid.ratio_axis[failed_cell / cols];
    std::ostringstream msg;
    msg << "sweep cell (detuning " << detuning << " meV, ratio " << ratio
        << ") failed: " << failure_message;
    throw SweepError(msg.str(), detuning, ratio);
  }
  return result;
}

SweepResult normalize(const SweepResult& result) {
  if (result.fidelity.empty()) throw DomainError("cannot normalize an empty map");
  const double peak = *std::max_element(result.fidelity.begin(), result.fidelity.end());
  if (!(peak > 0.0)) throw DomainError("cannot normalize an all-zero map");
  SweepResult out = result;
  for (double& v : out.fidelity) v /= peak;
  // Exact 1.0 at the maximum regardless of rounding in the division.
  for (std::size_t k = 0; k < out.fidelity.size(); ++k) {
    if (result.fidelity[k] == peak) out.fidelity[k] = 1.0;
  }
  out.normalized = true;
  return out;
}

GridMaximum find_maximum(const SweepResult& result) {
  if (result.fidelity.empty() || result.fidelity.size() != result.rows() * result.cols()) {
    throw DomainError("find_maximum requires a non-empty, well-formed result");
  }
  std::size_t best = 0;
  auto better = [&](std::size_t a, std::size_t b) {
    const double fa = result.fidelity[a];
    const double fb = result.fidelity[b];
    if (fa != fb) return fa > fb;
    const double da = std::abs(result.grid.detuning_axis[a % result.cols()]);
    const double db = std::abs(result.grid.detuning_axis[b % result.cols()]);
    if (da != db) return da < db;
    return result.grid.ratio_axis[a / result.cols()] < result.grid.ratio_axis[b / result.cols()];
  };
  for (std::size_t k = 1; k < result.fidelity.size(); ++k) {
    if (better(k, best)) best = k;
  }
  const std::size_t i = best / result.cols();
  const std::size_t j = best % result.cols();
  return {result.grid.detuning_axis[j], result.grid.ratio_axis[i], result.fidelity[best], i, j};
}

RabiCurve rabi_curve(const std::vector<double>& areas, const SimConfig& base) {
  if (base.pulse1.detuning != 0.0) {
    throw DomainError("Rabi calibration requires a resonant first pulse (detuning 0)");
  }
  if (base.pulse2.area != 0.0) {
    throw DomainError("Rabi calibration requires a single pulse (pulse2 area 0)");
  }
  if (areas.empty()) throw DomainError("Rabi curve needs at least one area");
  for (std::size_t k = 0; k < areas.size(); ++k) {
    if (!(areas[k] >= 0.0) || !std::isfinite(areas[k])) {
      throw DomainError("Rabi areas must be finite and non-negative");
    }
    if (k > 0 && !(areas[k] > areas[k - 1])) {
      throw DomainError("Rabi areas must be strictly increasing");
    }
  }
  RabiCurve curve{areas, {}};
  curve.populations.reserve(areas.size());
  for (double area : areas) {
    SimConfig cfg = base;
    cfg.pulse1.area = area;
    curve.populations.push_back(final_population(cfg));
  }
  return curve;
}

double pi_calibration(const RabiCurve& curve) {
  const auto& p = curve.populations;
  const auto& a = curve.areas;
  if (p.size() != a.size() || p.size() < 3) {
    throw DomainError("pi calibration needs a curve with at least three samples");
  }
  for (std::size_t k = 1; k + 1 < p.size(); ++k) {
    if (p[k] >= p[k - 1] && p[k] > p[k + 1]) {
      // Vertex of the parabola through the three samples.
      const double x0 = a[k - 1], x1 = a[k], x2 = a[k + 1];
      const double y0 = p[k - 1], y1 = p[k], y2 = p[k + 1];
      const double denom = (x0 - x1) * (x0 - x2) * (x1 - x2);
      const double ca = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom;
      const double cb = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom;
      if (ca >= 0.0) return x1;
      return -cb / (2.0 * ca);
    }
  }
  throw DomainError("Rabi curve has no interior maximum");
}

std::vector<DelayPoint> delay_series(const std::vector<double>& delays, const SimConfig& base) {
  base.validate();
  std::vector<DelayPoint> out;
  out.reserve(delays.size());
  for (double delay : delays) {
    SimConfig cfg = base;
    cfg.pulse2.delay = delay;
    out.push_back({delay, final_population(cfg)});
  }
  return out;
}

}  // namespace swingup
