#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "swingup/pulses.hpp"

namespace swingup {

/// State of the two-level system in the basis (|0>, |1>).
///
/// Only rho00, rho11 and rho01 are stored; rho10 is always conj(rho01), so the
/// matrix is Hermitian by construction.
struct DensityMatrix {
  double rho00 = 1.0;
  double rho11 = 0.0;
  std::complex<double> rho01{0.0, 0.0};

  static DensityMatrix ground() { return {}; }

  std::complex<double> rho10() const { return std::conj(rho01); }
  std::complex<double> at(int row, int col) const;

  double trace() const { return rho00 + rho11; }
  double purity() const { return rho00 * rho00 + rho11 * rho11 + 2.0 * std::norm(rho01); }
  // Ascending.
  std::array<double, 2> eigenvalues() const;

  bool operator==(const DensityMatrix&) const = default;
};

enum class StepMode { fixed, adaptive };

struct TimeWindow {
  double start;
  double end;
};

struct SimConfig {
  PulseSpec pulse1;
  PulseSpec pulse2;
  double t_start = -40.0;  // ps
  double t_end = 40.0;     // ps
  double step = 1e-3;      // ps; initial step in adaptive mode
  StepMode mode = StepMode::fixed;
  double tolerance = 1e-10;  // per-step local error target, adaptive mode only
  std::size_t record_stride = 1;

  void validate() const;

  // Configured window, widened where needed so that both pulse centers +-3 sigma
  // are covered.
  TimeWindow integration_window() const;

  bool operator==(const SimConfig&) const = default;
};

// Rows/cols in the (|0>, |1>) basis, in rad/ps (H / hbar).
using Matrix2c = std::array<std::array<std::complex<double>, 2>, 2>;

Matrix2c hamiltonian(double t, const SimConfig& config);

struct Trajectory {
  std::vector<double> times;
  std::vector<double> excited_population;
  std::vector<double> coherence_magnitude;
  DensityMatrix final_state;
  // Worst |Tr rho - 1| and |Tr rho^2 - 1| over every integrator step, not only
  // recorded samples.
  double max_trace_error = 0.0;
  double max_purity_error = 0.0;
  std::size_t steps = 0;
};

// Trace drift above this aborts an evolution with IntegrationError.
inline constexpr double kMaxTraceDrift = 1e-6;

Trajectory evolve(const SimConfig& config);

// Same integration as evolve() without storing samples; returns <1|rho(t_f)|1>
// clamped into [0, 1].
double final_population(const SimConfig& config);

}  // namespace swingup
