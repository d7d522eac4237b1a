#include <doctest.h>

#include <cmath>

#include "swingup/errors.hpp"
#include "swingup/sweep.hpp"

using namespace swingup;

namespace {

SimConfig swing_up_base() {
  SimConfig c;
  c.pulse1 = {-0.7, 8.0, 10.0, 0.0, 0.0};
  c.pulse2 = {0.0, 0.0, 10.0, 0.0, 0.0};
  return c;
}

SweepResult literal_map(std::vector<double> detunings, std::vector<double> ratios,
                        std::vector<double> values) {
  SweepResult r;
  r.grid = {std::move(detunings), std::move(ratios), swing_up_base()};
  r.fidelity = std::move(values);
  return r;
}

}  // namespace

TEST_SUITE("sweep") {
  TEST_CASE("linspace") {
    const auto v = linspace(-3.0, -0.92, 64);
    CHECK(v.size() == 64);
    CHECK(v.front() == -3.0);
    CHECK(v.back() == -0.92);
    CHECK(linspace(1.0, 2.0, 1) == std::vector<double>{1.0});
    CHECK(linspace(1.0, 2.0, 0).empty());
  }

  TEST_CASE("grid validation") {
    SweepGrid g{{-2.0, -1.0}, {1.0, 1.0}, swing_up_base()};
    CHECK_THROWS_AS(g.validate(), DomainError);
    g.ratio_axis = {};
    CHECK_THROWS_AS(g.validate(), DomainError);
    g.ratio_axis = {0.5, 1.0};
    g.detuning_axis = {-1.0, -2.0, -1.5};
    CHECK_THROWS_AS(run_sweep(g), DomainError);
    g.detuning_axis = {-1.0, -2.0};
    CHECK_NOTHROW(g.validate());
    CHECK(default_grid(swing_up_base()).detuning_axis.size() == 64);
  }

  TEST_CASE("run_sweep: single cell at the optimum") {
    const SweepResult r = run_sweep({{-2.05}, {1.1}, swing_up_base()});
    REQUIRE(r.fidelity.size() == 1);
    CHECK(std::abs(r.fidelity[0] - 0.97) <= 0.03);
    CHECK_FALSE(r.normalized);
  }

  TEST_CASE("run_sweep: zero drive gives an all-zero map") {
    SimConfig base = swing_up_base();
    base.pulse1.area = 0.0;
    const SweepResult r = run_sweep({{-3.0, -2.0, -1.0}, {0.0}, base});
    for (double v : r.fidelity) CHECK(v == 0.0);
  }

  TEST_CASE("run_sweep: cells equal independent evaluations, any thread count") {
    SimConfig base = swing_up_base();
    base.step = 4e-3;
    const SweepGrid grid{{-2.15, -2.05, -1.95}, {1.0, 1.1, 1.2}, base};
    const SweepResult serial = run_sweep(grid, {1});
    const SweepResult parallel = run_sweep(grid, {4});
    CHECK(serial.fidelity == parallel.fidelity);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        SimConfig cell = base;
        cell.pulse2.detuning = grid.detuning_axis[j];
        cell.pulse2.area = grid.ratio_axis[i] * base.pulse1.area;
        CHECK(serial.at(i, j) == final_population(cell));
      }
    }
  }

  TEST_CASE("run_sweep: failing cell names its parameters") {
    SimConfig base = swing_up_base();
    base.pulse1.fwhm = 1.0;
    base.pulse2.fwhm = 1.0;
    base.step = 0.5;
    base.pulse1.area = 1.0;
    try {
      (void)run_sweep({{-2.0, -1.0}, {0.1, 400.0}, base}, {2});
      FAIL("expected SweepError");
    } catch (const SweepError& e) {
      CHECK(e.ratio() == 400.0);
      CHECK(e.detuning() == -2.0);
      CHECK(std::string(e.what()).find("ratio 400") != std::string::npos);
    }
  }

  TEST_CASE("normalize") {
    const SweepResult n = normalize(literal_map({-2.0, -1.0}, {1.0}, {0.2, 0.4}));
    CHECK(n.fidelity == std::vector<double>{0.5, 1.0});
    CHECK(n.normalized);
    CHECK(normalize(n).fidelity == n.fidelity);
    CHECK_THROWS_AS(normalize(literal_map({-2.0, -1.0}, {1.0}, {0.0, 0.0})), DomainError);

    const SweepResult odd = literal_map({-2.0, -1.5, -1.0}, {1.0}, {0.3, 0.7, 0.1});
    const SweepResult odd_n = normalize(odd);
    CHECK(*std::max_element(odd_n.fidelity.begin(), odd_n.fidelity.end()) == 1.0);
  }

  TEST_CASE("normalize preserves the argmax of a simulated map") {
    SimConfig base = swing_up_base();
    base.step = 4e-3;
    const SweepResult r = run_sweep({linspace(-2.4, -1.8, 4), linspace(1.0, 1.6, 3), base});
    const GridMaximum before = find_maximum(r);
    const GridMaximum after = find_maximum(normalize(r));
    CHECK(before.detuning_index == after.detuning_index);
    CHECK(before.ratio_index == after.ratio_index);
    CHECK(after.fidelity == 1.0);
  }

  TEST_CASE("find_maximum") {
    SUBCASE("single nonzero cell") {
      const GridMaximum m = find_maximum(literal_map({-3.0, -2.0, -1.0}, {0.5, 1.0}, {0, 0, 0, 0, 0.4, 0}));
      CHECK(m.detuning == -2.0);
      CHECK(m.ratio == 1.0);
      CHECK(m.fidelity == 0.4);
    }
    SUBCASE("ties prefer smaller |detuning|, then smaller ratio") {
      GridMaximum m = find_maximum(literal_map({-3.0, -2.0, -1.0}, {0.5}, {0.9, 0.2, 0.9}));
      CHECK(m.detuning == -1.0);
      m = find_maximum(literal_map({-2.0}, {1.5, 0.5, 1.0}, {0.9, 0.9, 0.9}));
      CHECK(m.ratio == 0.5);
    }
    SUBCASE("malformed") {
      CHECK_THROWS_AS(find_maximum(literal_map({-1.0}, {1.0}, {})), DomainError);
    }
  }

  TEST_CASE("rabi curve") {
    SimConfig base = swing_up_base();
    base.pulse1.detuning = 0.0;

    const RabiCurve c = rabi_curve({0.0, 1.0, 2.0}, base);
    CHECK(std::abs(c.populations[0]) < 1e-6);
    CHECK(std::abs(c.populations[1] - 1.0) < 1e-6);
    CHECK(std::abs(c.populations[2]) < 1e-6);
    CHECK(std::abs(rabi_curve({0.5}, base).populations[0] - 0.5) < 1e-6);

    const auto areas = linspace(0.0, 4.0, 41);
    const RabiCurve dense = rabi_curve(areas, base);
    for (std::size_t k = 0; k < areas.size(); ++k) {
      CHECK(std::abs(dense.populations[k] - std::pow(std::sin(areas[k] * kPi / 2.0), 2)) < 1e-6);
    }
    CHECK(pi_calibration(dense) == doctest::Approx(1.0).epsilon(1e-6));
    // Off-grid maximum: the parabola lands near 1 but not exactly on a sample.
    const RabiCurve coarse = rabi_curve({0.0, 0.45, 0.9, 1.35, 1.8}, base);
    CHECK(std::abs(pi_calibration(coarse) - 1.0) < 0.05);

    CHECK_THROWS_AS(rabi_curve({0.0, 1.0}, swing_up_base()), DomainError);
    SimConfig two = base;
    two.pulse2.area = 1.0;
    CHECK_THROWS_AS(rabi_curve({1.0}, two), DomainError);
    CHECK_THROWS_AS(rabi_curve({1.0, 1.0}, base), DomainError);
    CHECK_THROWS_AS(pi_calibration(RabiCurve{{0.0, 1.0, 2.0}, {0.0, 0.5, 1.0}}), DomainError);
  }

  TEST_CASE("delay series") {
    SimConfig base = swing_up_base();
    base.pulse2.detuning = -2.1415873015873013;
    base.pulse2.area = 8.0 * 1.4185714285714288;
    const auto near = delay_series({0.0, 2.0, 4.0}, base);
    REQUIRE(near.size() == 3);
    for (const auto& p : near) CHECK(p.fidelity > 0.9);
    CHECK(near[1].delay == 2.0);

    base.pulse2.detuning = -2.05;
    base.pulse2.area = 8.8;
    const auto far = delay_series({0.0, 10.0}, base);
    CHECK(std::abs(far[0].fidelity - 0.97) <= 0.03);
    // Step-halved state-vector oracle (dt = 0.5 fs).
    CHECK(std::abs(far[1].fidelity - 0.234348866649300) < 1e-9);
    CHECK(far[0].fidelity - far[1].fidelity > 0.5);
  }
}
