#pragma once

#include <complex>

namespace swingup {

// Reduced Planck constant in meV*ps. Detunings given in meV become angular
// frequencies in rad/ps after division by this constant.
inline constexpr double kHbarMeVps = 0.6582119569;

inline constexpr double kPi = 3.14159265358979323846;

/// One Gaussian pulse of the bichromatic drive.
///
/// Units: detuning in meV (red detuning negative), area in multiples of pi,
/// intensity FWHM and center delay in ps, carrier phase in rad.
struct PulseSpec {
  double detuning = 0.0;
  double area = 0.0;
  double fwhm = 10.0;
  double delay = 0.0;
  double phase = 0.0;

  // Throws DomainError unless fwhm > 0, area >= 0 and all fields are finite.
  void validate() const;

  double sigma() const;
  double angular_detuning() const { return detuning / kHbarMeVps; }

  bool operator==(const PulseSpec&) const = default;
};

// Complex Rabi amplitude in rad/ps, in the frame rotating with pulse 1.
using DriveSample = std::complex<double>;

double fwhm_to_sigma(double fwhm);

// Real Gaussian envelope (area*pi)/sqrt(2 pi sigma^2) exp(-(t - delay)^2 / (2 sigma^2)).
double gaussian_envelope(double t, const PulseSpec& spec);

/// Precomputed two-color drive. Pulse 1 defines the rotating frame, so only
/// pulse 2 carries the beat exp(-i (w2 - w1) t + i phi2). The carrier phase
/// of pulse 1 is ignored.
class BichromaticDrive {
public:
  BichromaticDrive(const PulseSpec& pulse1, const PulseSpec& pulse2);

  DriveSample operator()(double t) const noexcept;

  double beat_frequency() const noexcept { return beat_; }

private:
  struct Envelope {
    double peak;
    double center;
    double inv_two_sigma_sq;
    double at(double t) const noexcept;
  };

  Envelope first_;
  Envelope second_;
  double beat_;
  double phase_;
  bool second_active_;
};

DriveSample composite_field(double t, const PulseSpec& pulse1, const PulseSpec& pulse2);

}  // namespace swingup
