#include "swingup/pulses.hpp"

#include <cmath>
#include <string>

#include "swingup/errors.hpp"

namespace swingup {

void PulseSpec::validate() const {
  if (!std::isfinite(detuning) || !std::isfinite(area) || !std::isfinite(fwhm) ||
      !std::isfinite(delay) || !std::isfinite(phase)) {
    throw DomainError("pulse parameters must be finite");
  }
  if (!(fwhm > 0.0)) {
    throw DomainError("pulse fwhm must be positive, got " + std::to_string(fwhm));
  }
  if (area < 0.0) {
    throw DomainError("pulse area must be non-negative, got " + std::to_string(area));
  }
}

double PulseSpec::sigma() const { return fwhm_to_sigma(fwhm); }

double fwhm_to_sigma(double fwhm) {
  if (!(fwhm > 0.0) || !std::isfinite(fwhm)) {
    throw DomainError("fwhm must be positive and finite, got " + std::to_string(fwhm));
  }
  return fwhm / std::sqrt(4.0 * std::log(2.0));
}

double gaussian_envelope(double t, const PulseSpec& spec) {
  spec.validate();
  const double sigma = spec.sigma();
  const double dt = t - spec.delay;
  return spec.area * kPi / std::sqrt(2.0 * kPi * sigma * sigma) *
         std::exp(-dt * dt / (2.0 * sigma * sigma));
}

double BichromaticDrive::Envelope::at(double t) const noexcept {
  const double dt = t - center;
  return peak * std::exp(-dt * dt * inv_two_sigma_sq);
}

namespace {

auto make_envelope(const PulseSpec& spec) {
  const double sigma = spec.sigma();
  struct Parts {
    double peak, center, inv;
  };
  return Parts{spec.area * kPi / std::sqrt(2.0 * kPi * sigma * sigma), spec.delay,
               1.0 / (2.0 * sigma * sigma)};
}

}  // namespace

BichromaticDrive::BichromaticDrive(const PulseSpec& pulse1, const PulseSpec& pulse2) {
  pulse1.validate();
  pulse2.validate();
  const auto e1 = make_envelope(pulse1);
  const auto e2 = make_envelope(pulse2);
  first_ = {e1.peak, e1.center, e1.inv};
  second_ = {e2.peak, e2.center, e2.inv};
  beat_ = (pulse2.detuning - pulse1.detuning) / kHbarMeVps;
  phase_ = pulse2.phase;
  second_active_ = pulse2.area > 0.0;
}

DriveSample BichromaticDrive::operator()(double t) const noexcept {
  DriveSample value{first_.at(t), 0.0};
  if (second_active_) {
    value += second_.at(t) * std::polar(1.0, phase_ - beat_ * t);
  }
  return value;
}

DriveSample composite_field(double t, const PulseSpec& pulse1, const PulseSpec& pulse2) {
  return BichromaticDrive(pulse1, pulse2)(t);
}

}  // namespace swingup
