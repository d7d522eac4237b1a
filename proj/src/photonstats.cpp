#include "swingup/photonstats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "swingup/errors.hpp"

namespace swingup {

namespace {

constexpr double kPsPerNs = 1000.0;

}  // namespace

void CorrelationHistogram::validate() const {
  if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
    throw DomainError("histogram bin width must be positive");
  }
  if (!std::isfinite(t0_offset)) throw DomainError("histogram offset must be finite");
  if (!(rep_period > 0.0) || !std::isfinite(rep_period)) {
    throw DomainError("histogram repetition period must be positive");
  }
}

std::uint64_t CorrelationHistogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

double CorrelationHistogram::integrate(double from, double to) const {
  if (from < span_start() - 1e-9 || to > span_end() + 1e-9) {
    throw DomainError("integration window [" + std::to_string(from) + ", " + std::to_string(to) +
                      ") ps lies outside the histogram span");
  }
  if (!(to > from)) return 0.0;
  const double first = std::floor((from - t0_offset) / bin_width);
  const double last = std::ceil((to - t0_offset) / bin_width);
  const auto k0 = static_cast<std::size_t>(std::max(0.0, first));
  const auto k1 = static_cast<std::size_t>(std::min<double>(last, counts.size()));
  double area = 0.0;
  for (std::size_t k = k0; k < k1; ++k) {
    const double lo = t0_offset + bin_width * static_cast<double>(k);
    const double hi = lo + bin_width;
    const double overlap = std::min(hi, to) - std::max(lo, from);
    if (overlap <= 0.0) continue;
    area += static_cast<double>(counts[k]) * (overlap >= bin_width ? 1.0 : overlap / bin_width);
  }
  return area;
}

void WindowSpec::validate(double rep_period_ns) const {
  if (!(peak_window > 0.0) || !(background_window > 0.0)) {
    throw DomainError("integration windows must be positive");
  }
  if (peak_window > rep_period_ns) {
    throw DomainError("peak window must not exceed the peak spacing");
  }
  if (n_side_peaks < 2 || n_side_peaks % 2 != 0) {
    throw DomainError("n_side_peaks must be a positive even number");
  }
}

bool StatResult::has_flag(const std::string& flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

CorrelationHistogram bin_timetags(std::span<const double> events, double bin_width,
                                  std::optional<double> t0_offset, double rep_period_ns) {
  CorrelationHistogram hist;
  hist.bin_width = bin_width;
  hist.rep_period = rep_period_ns;
  hist.t0_offset = t0_offset.value_or(0.0);
  hist.validate();
  for (double e : events) {
    if (!std::isfinite(e)) throw DomainError("time tags must be finite");
  }
  if (events.empty()) return hist;

  const auto [lo, hi] = std::minmax_element(events.begin(), events.end());
  if (!t0_offset) {
    hist.t0_offset = std::floor(*lo / bin_width) * bin_width;
  } else if (*lo < *t0_offset) {
    throw DomainError("time tag precedes the histogram offset");
  }
  const auto bins = static_cast<std::size_t>(std::floor((*hi - hist.t0_offset) / bin_width)) + 1;
  hist.counts.assign(bins, 0);
  for (double e : events) {
    auto k = static_cast<std::size_t>(std::floor((e - hist.t0_offset) / bin_width));
    // Guard against rounding when e sits exactly on the final edge.
    k = std::min(k, bins - 1);
    ++hist.counts[k];
  }
  return hist;
}

namespace {

struct PeakLayout {
  double offset;  // ps, common shift applied to every nominal position
  std::vector<int> side_orders;
};

// Position of the highest bin within +-spacing/4 of the nominal center.
double local_maximum(const CorrelationHistogram& hist, double nominal, double spacing) {
  const double from = nominal - spacing / 4.0;
  const double to = nominal + spacing / 4.0;
  double best_center = nominal;
  std::uint64_t best = 0;
  bool found = false;
  for (std::size_t k = 0; k < hist.counts.size(); ++k) {
    const double center = hist.t0_offset + hist.bin_width * (static_cast<double>(k) + 0.5);
    if (center < from || center > to) continue;
    if (!found || hist.counts[k] > best) {
      best = hist.counts[k];
      best_center = center;
      found = true;
    }
  }
  return best_center;
}

PeakLayout locate_peaks(const CorrelationHistogram& hist, PeakLocation location, int per_side) {
  const double spacing = hist.rep_period * kPsPerNs;
  PeakLayout layout{0.0, {}};
  for (int k = 1; k <= per_side; ++k) {
    layout.side_orders.push_back(-k);
    layout.side_orders.push_back(k);
  }
  std::sort(layout.side_orders.begin(), layout.side_orders.end());
  if (location == PeakLocation::search) {
    std::vector<double> shifts;
    for (int order : layout.side_orders) {
      const double nominal = order * spacing;
      shifts.push_back(local_maximum(hist, nominal, spacing) - nominal);
    }
    std::sort(shifts.begin(), shifts.end());
    const std::size_t n = shifts.size();
    layout.offset = n % 2 ? shifts[n / 2] : 0.5 * (shifts[n / 2 - 1] + shifts[n / 2]);
  }
  return layout;
}

double window_area(const CorrelationHistogram& hist, double center, double width) {
  return hist.integrate(center - 0.5 * width, center + 0.5 * width);
}

struct PeakAreas {
  double center;
  std::vector<double> sides;
  double side_mean;
};

PeakAreas peak_areas(const CorrelationHistogram& hist, const WindowSpec& win,
                     const PeakLayout& layout, StatResult& out) {
  const double spacing = hist.rep_period * kPsPerNs;
  const double width = win.peak_window * kPsPerNs;
  PeakAreas areas{};
  areas.center = window_area(hist, layout.offset, width);
  out.windows_used.push_back({"center", layout.offset, width, areas.center});
  for (int order : layout.side_orders) {
    const double c = layout.offset + order * spacing;
    const double a = window_area(hist, c, width);
    areas.sides.push_back(a);
    out.windows_used.push_back({"side", c, width, a});
  }
  areas.side_mean = std::accumulate(areas.sides.begin(), areas.sides.end(), 0.0) /
                    static_cast<double>(areas.sides.size());
  return areas;
}

}  // namespace

StatResult g2_raw(const CorrelationHistogram& hist, const WindowSpec& win) {
  hist.validate();
  win.validate(hist.rep_period);
  StatResult out;
  const PeakLayout layout = locate_peaks(hist, win.location, win.n_side_peaks / 2);
  const PeakAreas areas = peak_areas(hist, win, layout, out);
  if (!(areas.side_mean > 0.0)) throw DomainError("g2: side peaks have zero area");
  out.value = areas.center / areas.side_mean;
  if (areas.center > 0.0) {
    out.error_low = out.error_high = out.value / std::sqrt(areas.center);
  } else {
    out.flags.push_back("zero_center_counts");
  }
  return out;
}

StatResult g2_corrected(const CorrelationHistogram& hist, const WindowSpec& win) {
  hist.validate();
  win.validate(hist.rep_period);
  if (win.peak_window + win.background_window > hist.rep_period) {
    throw DomainError("background windows must lie strictly between the peak windows");
  }
  StatResult out;
  const int per_side = win.n_side_peaks / 2;
  const PeakLayout layout = locate_peaks(hist, win.location, per_side);
  const PeakAreas raw = peak_areas(hist, win, layout, out);
  if (!(raw.side_mean > 0.0)) throw DomainError("g2: side peaks have zero area");

  // Inter-peak regions midway between neighbouring peaks, per_side on each side.
  const double spacing = hist.rep_period * kPsPerNs;
  const double bg_width = win.background_window * kPsPerNs;
  double bg_sum = 0.0;
  int bg_count = 0;
  for (int k = 1; k <= per_side; ++k) {
    for (int sign : {-1, 1}) {
      const double c = layout.offset + sign * (k - 0.5) * spacing;
      const double a = window_area(hist, c, bg_width);
      out.windows_used.push_back({"background", c, bg_width, a});
      bg_sum += a;
      ++bg_count;
    }
  }
  const double background = bg_sum / bg_count * (win.peak_window / win.background_window);

  bool clamped = false;
  auto subtract = [&](double area) {
    const double v = area - background;
    if (v < 0.0) {
      clamped = true;
      return 0.0;
    }
    return v;
  };
  const double center = subtract(raw.center);
  double side_sum = 0.0;
  for (double s : raw.sides) side_sum += subtract(s);
  const double side_mean = side_sum / static_cast<double>(raw.sides.size());
  if (clamped) out.flags.push_back("negative_area_clamped");

  if (!(side_mean > 0.0)) {
    out.flags.push_back("degenerate");
    out.value = 0.0;
    return out;
  }
  out.value = center / side_mean;
  if (raw.center == 0.0) out.flags.push_back("zero_center_counts");
  out.error_low = out.error_high = raw.center / (raw.side_mean * raw.side_mean);
  return out;
}

double hom_default_window_ns(double peak_spacing_ns) { return peak_spacing_ns; }

namespace {

struct HomAreas {
  double center, left, right;
};

HomAreas hom_areas(const CorrelationHistogram& hist, double offset, double width) {
  const double spacing = hist.rep_period * kPsPerNs;
  return {window_area(hist, offset, width), window_area(hist, offset - spacing, width),
          window_area(hist, offset + spacing, width)};
}

double visibility(const HomAreas& a) { return 1.0 - 2.0 * a.center / (a.left + a.right); }

}  // namespace

StatResult hom_visibility(const CorrelationHistogram& hist, const WindowSpec& win, double jitter) {
  hist.validate();
  if (!(win.peak_window > 0.0)) throw DomainError("HOM window must be positive");
  if (!(jitter >= 0.0) || !std::isfinite(jitter)) throw DomainError("jitter must be >= 0");
  const PeakLayout layout = locate_peaks(hist, win.location, 1);
  const double width = win.peak_window * kPsPerNs;

  StatResult out;
  const HomAreas a = hom_areas(hist, layout.offset, width);
  const double spacing = hist.rep_period * kPsPerNs;
  out.windows_used.push_back({"center", layout.offset, width, a.center});
  out.windows_used.push_back({"left", layout.offset - spacing, width, a.left});
  out.windows_used.push_back({"right", layout.offset + spacing, width, a.right});
  const double sides = a.left + a.right;
  if (!(sides > 0.0)) throw DomainError("HOM: left and right peaks have zero area");
  out.value = visibility(a);

  // Poissonian propagation with var(A) = A for each window.
  const double poisson = std::sqrt(4.0 * a.center / (sides * sides) +
                                   4.0 * a.center * a.center / (sides * sides * sides));
  double up = poisson;
  double down = poisson;
  if (jitter > 0.0) {
    for (double w : {width - jitter, width + jitter}) {
      if (!(w > 0.0)) throw DomainError("jitter exceeds the HOM integration window");
      const HomAreas shifted = hom_areas(hist, layout.offset, w);
      if (!(shifted.left + shifted.right > 0.0)) continue;
      const double delta = visibility(shifted) - out.value;
      up = std::max(up, delta);
      down = std::max(down, -delta);
    }
  }
  out.error_low = down;
  out.error_high = up;
  if (a.center == 0.0) out.flags.push_back("zero_center_counts");
  return out;
}

}  // namespace swingup
