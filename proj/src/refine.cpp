#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "swingup/errors.hpp"
#include "swingup/sweep.hpp"

namespace swingup {

namespace {

// Scaled coordinates: detuning in meV, area ratio dimensionless.
constexpr double kDetuningScale = 1.0;
constexpr double kRatioScale = 1.0;

struct Vertex {
  std::array<double, 2> x;
  double value;
};

}  // namespace

RefinedMaximum refine_maximum(std::pair<double, double> seed, const SimConfig& base,
                              const RefineOptions& options) {
  const auto [seed_detuning, seed_ratio] = seed;
  if (!(seed_detuning < 0.0) || !(seed_ratio > 0.0)) {
    throw DomainError("refine_maximum seed must have detuning < 0 and ratio > 0");
  }
  base.validate();

  std::size_t evaluations = 0;
  double lowest_seen = std::numeric_limits<double>::infinity();
  double highest_seen = -std::numeric_limits<double>::infinity();

  // Maximization is done on the negated fidelity. Points outside the physical
  // domain are never accepted.
  auto objective = [&](const std::array<double, 2>& x) {
    const double detuning = x[0] * kDetuningScale;
    const double ratio = x[1] * kRatioScale;
    if (!(detuning < 0.0) || !(ratio > 0.0)) return std::numeric_limits<double>::infinity();
    SimConfig cfg = base;
    cfg.pulse2.detuning = detuning;
    cfg.pulse2.area = ratio * base.pulse1.area;
    ++evaluations;
    const double f = final_population(cfg);
    lowest_seen = std::min(lowest_seen, f);
    highest_seen = std::max(highest_seen, f);
    return -f;
  };

  const std::array<double, 2> x0{seed_detuning / kDetuningScale, seed_ratio / kRatioScale};
  std::array<Vertex, 3> simplex{};
  simplex[0] = {x0, objective(x0)};
  const double seed_value = -simplex[0].value;
  {
    std::array<double, 2> x1 = x0;
    x1[0] += options.initial_step_detuning / kDetuningScale;
    if (!(x1[0] * kDetuningScale < 0.0)) x1[0] = x0[0] - options.initial_step_detuning / kDetuningScale;
    std::array<double, 2> x2 = x0;
    x2[1] += options.initial_step_ratio / kRatioScale;
    simplex[1] = {x1, objective(x1)};
    simplex[2] = {x2, objective(x2)};
  }

  auto by_value = [](const Vertex& a, const Vertex& b) { return a.value < b.value; };
  auto extent_small = [&] {
    for (int d = 0; d < 2; ++d) {
      double lo = simplex[0].x[d], hi = lo;
      for (const Vertex& v : simplex) {
        lo = std::min(lo, v.x[d]);
        hi = std::max(hi, v.x[d]);
      }
      if (hi - lo >= options.tolerance) return false;
    }
    return true;
  };
  auto blend = [](const std::array<double, 2>& origin, const std::array<double, 2>& toward,
                  double factor) {
    return std::array<double, 2>{origin[0] + factor * (toward[0] - origin[0]),
                                 origin[1] + factor * (toward[1] - origin[1])};
  };

  bool converged = false;
  while (true) {
    std::sort(simplex.begin(), simplex.end(), by_value);
    if (extent_small()) {
      converged = true;
      break;
    }
    if (evaluations >= options.max_evaluations) break;

    const std::array<double, 2> centroid{0.5 * (simplex[0].x[0] + simplex[1].x[0]),
                                         0.5 * (simplex[0].x[1] + simplex[1].x[1])};
    Vertex& worst = simplex[2];
    const Vertex reflected{blend(centroid, worst.x, -1.0), 0.0};
    const double fr = objective(reflected.x);

    if (fr < simplex[0].value) {
      const std::array<double, 2> xe = blend(centroid, worst.x, -2.0);
      const double fe = objective(xe);
      worst = fe < fr ? Vertex{xe, fe} : Vertex{reflected.x, fr};
      continue;
    }
    if (fr < simplex[1].value) {
      worst = {reflected.x, fr};
      continue;
    }
    if (fr < worst.value) {
      const std::array<double, 2> xc = blend(centroid, reflected.x, 0.5);
      const double fc = objective(xc);
      if (fc <= fr) {
        worst = {xc, fc};
        continue;
      }
    } else {
      const std::array<double, 2> xc = blend(centroid, worst.x, 0.5);
      const double fc = objective(xc);
      if (fc < worst.value) {
        worst = {xc, fc};
        continue;
      }
    }
    for (std::size_t k = 1; k < simplex.size(); ++k) {
      simplex[k].x = blend(simplex[0].x, simplex[k].x, 0.5);
      simplex[k].value = objective(simplex[k].x);
    }
  }

  std::sort(simplex.begin(), simplex.end(), by_value);
  const Vertex& best = simplex[0];
  RefinedMaximum out{};
  out.detuning = best.x[0] * kDetuningScale;
  out.ratio = best.x[1] * kRatioScale;
  out.fidelity = -best.value;
  out.seed_fidelity = seed_value;
  out.evaluations = evaluations;
  out.detuning_scale = kDetuningScale;
  out.ratio_scale = kRatioScale;
  // A landscape that never changed value gives no ascent information; the
  // collapse of the simplex there is not a located maximum.
  const bool flat = highest_seen == lowest_seen;
  out.converged = converged && !flat;
  out.truncated = !out.converged;
  return out;
}

}  // namespace swingup
