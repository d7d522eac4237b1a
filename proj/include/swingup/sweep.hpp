#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "swingup/dynamics.hpp"

namespace swingup {

// n evenly spaced values from first to last inclusive; last is hit exactly.
std::vector<double> linspace(double first, double last, std::size_t n);

/// Detuning x area-ratio grid over the second pulse. Pulse 1 is taken from
/// `base`; pulse 2 keeps its fwhm, delay and phase from `base` and gets its
/// detuning and area (ratio * pulse1.area) per cell.
struct SweepGrid {
  std::vector<double> detuning_axis;  // hbar*Delta2 in meV
  std::vector<double> ratio_axis;     // alpha2 / alpha1
  SimConfig base;

  void validate() const;
  SimConfig cell_config(std::size_t ratio_index, std::size_t detuning_index) const;

  bool operator==(const SweepGrid&) const = default;
};

// Default grid: 64 x 64 over hbar*Delta2 in [-3, -0.92] meV, ratio in [0.44, 1.81].
SweepGrid default_grid(const SimConfig& base, std::size_t detuning_points = 64,
                       std::size_t ratio_points = 64);

struct SweepResult {
  SweepGrid grid;
  // Row-major, rows follow ratio_axis and columns follow detuning_axis.
  std::vector<double> fidelity;
  bool normalized = false;

  std::size_t rows() const { return grid.ratio_axis.size(); }
  std::size_t cols() const { return grid.detuning_axis.size(); }
  double at(std::size_t ratio_index, std::size_t detuning_index) const {
    return fidelity[ratio_index * cols() + detuning_index];
  }

  bool operator==(const SweepResult&) const = default;
};

struct SweepOptions {
  // 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

// Raised when a cell fails; carries the offending cell parameters.
class SweepError : public std::runtime_error {
public:
  SweepError(const std::string& what, double detuning, double ratio)
      : std::runtime_error(what), detuning_(detuning), ratio_(ratio) {}
  double detuning() const noexcept { return detuning_; }
  double ratio() const noexcept { return ratio_; }

private:
  double detuning_;
  double ratio_;
};

SweepResult run_sweep(const SweepGrid& grid, const SweepOptions& options = {});

SweepResult normalize(const SweepResult& result);

struct GridMaximum {
  double detuning;
  double ratio;
  double fidelity;
  std::size_t ratio_index;
  std::size_t detuning_index;
};

// Ties are broken by smallest |detuning|, then smallest ratio.
GridMaximum find_maximum(const SweepResult& result);

struct RefineOptions {
  std::size_t max_evaluations = 500;
  double tolerance = 1e-3;         // simplex extent per scaled coordinate
  double initial_step_detuning = 0.05;  // meV
  double initial_step_ratio = 0.05;
};

struct RefinedMaximum {
  double detuning;
  double ratio;
  double fidelity;
  double seed_fidelity;
  std::size_t evaluations;
  bool converged;
  // Evaluation budget exhausted, or the landscape around the seed was flat so
  // no ascent direction existed.
  bool truncated;
  // Coordinate scales: the simplex works on (detuning / detuning_scale, ratio / ratio_scale).
  double detuning_scale;
  double ratio_scale;

  bool operator==(const RefinedMaximum&) const = default;
};

RefinedMaximum refine_maximum(std::pair<double, double> seed, const SimConfig& base,
                              const RefineOptions& options = {});

struct RabiCurve {
  std::vector<double> areas;  // multiples of pi
  std::vector<double> populations;

  bool operator==(const RabiCurve&) const = default;
};

RabiCurve rabi_curve(const std::vector<double>& areas, const SimConfig& base);

// Area of the first local maximum of the curve, refined with a parabola through
// the neighbouring samples. This is the pi-pulse calibration point.
double pi_calibration(const RabiCurve& curve);

struct DelayPoint {
  double delay;
  double fidelity;

  bool operator==(const DelayPoint&) const = default;
};

std::vector<DelayPoint> delay_series(const std::vector<double>& delays, const SimConfig& base);

}  // namespace swingup
