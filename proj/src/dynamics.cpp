#include "swingup/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "swingup/errors.hpp"

namespace swingup {

std::complex<double> DensityMatrix::at(int row, int col) const {
  if (row == 0 && col == 0) return rho00;
  if (row == 1 && col == 1) return rho11;
  if (row == 0 && col == 1) return rho01;
  if (row == 1 && col == 0) return rho10();
  throw DomainError("density matrix index out of range");
}

std::array<double, 2> DensityMatrix::eigenvalues() const {
  const double mean = 0.5 * (rho00 + rho11);
  const double half_gap = 0.5 * (rho00 - rho11);
  const double radius = std::sqrt(half_gap * half_gap + std::norm(rho01));
  return {mean - radius, mean + radius};
}

void SimConfig::validate() const {
  pulse1.validate();
  pulse2.validate();
  if (!std::isfinite(t_start) || !std::isfinite(t_end) || !(t_start < t_end)) {
    throw DomainError("integration window requires t_start < t_end");
  }
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw DomainError("integration step must be positive");
  }
  if (step > t_end - t_start) {
    throw DomainError("integration step exceeds the integration window");
  }
  if (mode == StepMode::adaptive && !(tolerance > 0.0)) {
    throw DomainError("adaptive tolerance must be positive");
  }
  if (record_stride < 1) {
    throw DomainError("record_stride must be at least 1");
  }
}

TimeWindow SimConfig::integration_window() const {
  TimeWindow window{t_start, t_end};
  for (const PulseSpec* pulse : {&pulse1, &pulse2}) {
    if (pulse == &pulse2 && pulse2.area == 0.0) continue;
    const double reach = 3.0 * pulse->sigma();
    window.start = std::min(window.start, pulse->delay - reach);
    window.end = std::max(window.end, pulse->delay + reach);
  }
  return window;
}

Matrix2c hamiltonian(double t, const SimConfig& config) {
  config.validate();
  const DriveSample omega = composite_field(t, config.pulse1, config.pulse2);
  Matrix2c h{};
  h[0][0] = 0.0;
  h[0][1] = 0.5 * std::conj(omega);
  h[1][0] = 0.5 * omega;
  h[1][1] = -config.pulse1.angular_detuning();
  return h;
}

namespace {

struct State {
  double p0;
  double p1;
  std::complex<double> c;
};

State axpy(const State& y, double h, const State& k) {
  return {y.p0 + h * k.p0, y.p1 + h * k.p1, y.c + h * k.c};
}

// Right-hand side of d rho / dt = -i [H, rho] with H = [[0, g*], [g, d]],
// g = Omega / 2 and d = -Delta1 / hbar.
class VonNeumann {
public:
  explicit VonNeumann(const SimConfig& config)
      : drive_(config.pulse1, config.pulse2), diag_(-config.pulse1.angular_detuning()) {}

  DriveSample drive(double t) const { return drive_(t); }

  State rhs(const DriveSample& omega, const State& y) const {
    const std::complex<double> g = 0.5 * omega;
    const double flow = 2.0 * std::imag(g * y.c);
    const std::complex<double> dc =
        std::complex<double>(0.0, -1.0) * (std::conj(g) * (y.p1 - y.p0) - diag_ * y.c);
    return {-flow, flow, dc};
  }

  State rk4(double t, double h, const State& y, const DriveSample& omega_start,
            DriveSample* omega_end) const {
    const DriveSample omega_mid = drive(t + 0.5 * h);
    *omega_end = drive(t + h);
    const State k1 = rhs(omega_start, y);
    const State k2 = rhs(omega_mid, axpy(y, 0.5 * h, k1));
    const State k3 = rhs(omega_mid, axpy(y, 0.5 * h, k2));
    const State k4 = rhs(*omega_end, axpy(y, h, k3));
    const double w = h / 6.0;
    return {y.p0 + w * (k1.p0 + 2.0 * k2.p0 + 2.0 * k3.p0 + k4.p0),
            y.p1 + w * (k1.p1 + 2.0 * k2.p1 + 2.0 * k3.p1 + k4.p1),
            y.c + w * (k1.c + 2.0 * k2.c + 2.0 * k3.c + k4.c)};
  }

private:
  BichromaticDrive drive_;
  double diag_;
};

DensityMatrix to_matrix(const State& y) { return {y.p0, y.p1, y.c}; }

class Monitor {
public:
  void check(const State& y, double t) {
    const DensityMatrix rho = to_matrix(y);
    const double trace_error = std::abs(rho.trace() - 1.0);
    const double purity_error = std::abs(rho.purity() - 1.0);
    if (!(trace_error <= kMaxTraceDrift)) {
      std::ostringstream msg;
      msg << "integration failed at t = " << t << " ps: trace drift " << trace_error
          << " exceeds " << kMaxTraceDrift;
      throw IntegrationError(msg.str(), trace_error);
    }
    max_trace = std::max(max_trace, trace_error);
    max_purity = std::max(max_purity, purity_error);
  }

  double max_trace = 0.0;
  double max_purity = 0.0;
};

// Drives the integration and hands every accepted step to `on_step(t, state)`.
template <class OnStep>
State integrate(const SimConfig& config, Monitor& monitor, std::size_t& steps, OnStep&& on_step) {
  config.validate();
  const VonNeumann system(config);
  const TimeWindow window = config.integration_window();
  State y{1.0, 0.0, {0.0, 0.0}};
  on_step(window.start, y);

  if (config.mode == StepMode::fixed) {
    const double span = window.end - window.start;
    const auto n = static_cast<std::size_t>(std::ceil(span / config.step - 1e-9));
    const double h = span / static_cast<double>(n);
    DriveSample omega = system.drive(window.start);
    for (std::size_t k = 0; k < n; ++k) {
      const double t = window.start + static_cast<double>(k) * h;
      DriveSample omega_next;
      y = system.rk4(t, h, y, omega, &omega_next);
      omega = omega_next;
      const double t_next = (k + 1 == n) ? window.end : window.start + static_cast<double>(k + 1) * h;
      monitor.check(y, t_next);
      on_step(t_next, y);
    }
    steps = n;
    return y;
  }

  // Step doubling: one full RK4 step against two half steps.
  double t = window.start;
  double h = config.step;
  const double h_min = 1e-9 * (window.end - window.start);
  steps = 0;
  while (t < window.end) {
    h = std::min(h, window.end - t);
    DriveSample scratch;
    const DriveSample omega0 = system.drive(t);
    const State full = system.rk4(t, h, y, omega0, &scratch);
    DriveSample omega_half;
    const State half = system.rk4(t, 0.5 * h, y, omega0, &omega_half);
    const State twice = system.rk4(t + 0.5 * h, 0.5 * h, half, omega_half, &scratch);
    const double err = std::max({std::abs(twice.p0 - full.p0), std::abs(twice.p1 - full.p1),
                                 std::abs(twice.c - full.c)}) /
                       15.0;
    if (err <= config.tolerance || h <= h_min) {
      t = (h == window.end - t) ? window.end : t + h;
      // Local extrapolation is skipped so the accepted state stays the RK4 one.
      y = twice;
      ++steps;
      monitor.check(y, t);
      on_step(t, y);
    }
    const double factor = err > 0.0 ? 0.9 * std::pow(config.tolerance / err, 0.2) : 4.0;
    h = std::max(h_min, h * std::clamp(factor, 0.1, 4.0));
  }
  return y;
}

}  // namespace

Trajectory evolve(const SimConfig& config) {
  Trajectory out;
  Monitor monitor;
  std::size_t index = 0;
  double last_time = 0.0;
  State last{};
  bool last_recorded = false;
  const std::size_t stride = std::max<std::size_t>(1, config.record_stride);
  const State final = integrate(config, monitor, out.steps, [&](double t, const State& y) {
    last_recorded = (index % stride == 0);
    if (last_recorded) {
      out.times.push_back(t);
      out.excited_population.push_back(y.p1);
      out.coherence_magnitude.push_back(std::abs(y.c));
    }
    last_time = t;
    last = y;
    ++index;
  });
  // Always close the trajectory on the final time.
  if (!last_recorded) {
    out.times.push_back(last_time);
    out.excited_population.push_back(last.p1);
    out.coherence_magnitude.push_back(std::abs(last.c));
  }
  out.final_state = to_matrix(final);
  out.max_trace_error = monitor.max_trace;
  out.max_purity_error = monitor.max_purity;
  return out;
}

double final_population(const SimConfig& config) {
  Monitor monitor;
  std::size_t steps = 0;
  const State final = integrate(config, monitor, steps, [](double, const State&) {});
  // Rounding can leave the population a few ulp outside [0, 1].
  return std::clamp(final.p1, 0.0, 1.0);
}

}  // namespace swingup
