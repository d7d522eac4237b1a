#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace swingup {

/// Binned coincidence histogram. Bin k covers
/// [t0_offset + k * bin_width, t0_offset + (k + 1) * bin_width) in ps.
struct CorrelationHistogram {
  double bin_width = 100.0;  // ps
  std::vector<std::uint64_t> counts;
  double t0_offset = 0.0;    // ps
  double rep_period = 12.5;  // ns, spacing between neighbouring peaks

  void validate() const;
  double span_start() const { return t0_offset; }
  double span_end() const { return t0_offset + bin_width * static_cast<double>(counts.size()); }
  std::uint64_t total() const;

  // Counts inside [from, to) ps; bins cut by a window edge contribute in
  // proportion to their overlap.
  double integrate(double from, double to) const;

  bool operator==(const CorrelationHistogram&) const = default;
};

enum class PeakLocation {
  nominal,  // peaks exactly at multiples of rep_period
  search,   // common offset from the side-peak maxima within +-rep_period/4
};

struct WindowSpec {
  double peak_window = 6.0;        // ns, full width per peak
  double background_window = 4.5;  // ns, full width per inter-peak region
  int n_side_peaks = 6;            // total, split evenly to both sides
  PeakLocation location = PeakLocation::search;

  void validate(double rep_period_ns) const;
};

struct StatResult {
  double value = 0.0;
  double error_low = 0.0;
  double error_high = 0.0;
  std::vector<std::string> flags;

  // Windows actually integrated, as (center, width) in ps.
  struct Window {
    std::string role;
    double center;
    double width;
    double area;
    bool operator==(const Window&) const = default;
  };
  std::vector<Window> windows_used;

  bool has_flag(const std::string& flag) const;
  bool operator==(const StatResult&) const = default;
};

// Events before t0_offset are rejected. Without an explicit offset the first
// bin starts at floor(min(events) / bin_width) * bin_width.
CorrelationHistogram bin_timetags(std::span<const double> events, double bin_width,
                                  std::optional<double> t0_offset = std::nullopt,
                                  double rep_period_ns = 12.5);

// Center peak over the mean of the side peaks; error value / sqrt(A_center).
StatResult g2_raw(const CorrelationHistogram& hist, const WindowSpec& win);

// Background from the inter-peak regions, rescaled to the peak window and
// subtracted from every peak area. The error is A_center,raw / A_side,raw^2 as
// used for the published corrected values, which is not a propagated
// uncertainty.
StatResult g2_corrected(const CorrelationHistogram& hist, const WindowSpec& win);

// Default HOM integration width: half the distance between the two peaks that
// neighbour the center one, i.e. one peak spacing.
double hom_default_window_ns(double peak_spacing_ns);

// v = 1 - 2 A_center / (A_left + A_right). Peaks sit at 0 and +-rep_period.
// Asymmetric errors are the envelope of the Poissonian error and the shifts
// produced by widening/narrowing the window by `jitter` ps.
StatResult hom_visibility(const CorrelationHistogram& hist, const WindowSpec& win, double jitter);

}  // namespace swingup
