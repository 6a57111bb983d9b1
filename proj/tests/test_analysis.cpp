#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ecogame/analysis.hpp"
#include "ecogame/integrator.hpp"

using namespace ecogame;

namespace {

bool contains(const std::vector<FixedPointRecord>& records,
              const SystemState& s, double tol = 1e-9) {
  return std::any_of(records.begin(), records.end(), [&](const auto& r) {
    return std::abs(r.state.x - s.x) <= tol &&
           std::abs(r.state.n - s.n) <= tol && std::abs(r.state.y - s.y) <= tol;
  });
}

std::vector<double> uniform_grid(int count) {
  std::vector<double> grid;
  for (int k = 0; k < count; ++k) grid.push_back(k / double(count - 1));
  return grid;
}

}  // namespace

TEST_CASE("hawk-dove fixed points") {
  const auto records = find_fixed_points(hawk_dove_scenario().model);
  for (const FixedPointRecord& r : records) {
    CHECK(r.residual < kFixedPointResidual);
    CHECK(coupled_rhs(r.state, hawk_dove_scenario().model).max_abs() <
          kFixedPointResidual);
  }

  SUBCASE("the balance mix x = 1/3 is a segment of equilibria at y = 0") {
    for (double n : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      CHECK(contains(records, {1.0 / 3.0, n, 0.0}));
    }
    const auto it = std::find_if(records.begin(), records.end(), [](auto& r) {
      return std::abs(r.state.x - 1.0 / 3.0) < 1e-12 && r.state.n == 0.5;
    });
    REQUIRE(it != records.end());
    CHECK(it->environment_family);
    CHECK(it->label() == "x=0.333333 n=* y=0");
    CHECK(it->distance_to({1.0 / 3.0, 0.9, 0.0}) < 1e-15);
  }

  SUBCASE("replenished mixed point x = v1/c1") {
    CHECK(contains(records, {0.7, 1.0, 1.0}));
  }

  SUBCASE("sorted and free of duplicates") {
    for (std::size_t i = 1; i < records.size(); ++i) {
      const SystemState& a = records[i - 1].state;
      const SystemState& b = records[i].state;
      CHECK(std::tie(a.x, a.n, a.y) < std::tie(b.x, b.n, b.y));
    }
  }
}

TEST_CASE("nonnegative payoffs make every corner stationary") {
  const auto records = find_fixed_points(prisoners_dilemma_scenario().model);
  for (double x : {0.0, 1.0}) {
    for (double n : {0.0, 1.0}) {
      for (double y : {0.0, 1.0}) {
        CAPTURE(x);
        CAPTURE(n);
        CAPTURE(y);
        CHECK(contains(records, {x, n, y}, 0.0));
      }
    }
  }
  for (const FixedPointRecord& r : records) {
    if (r.kind == FixedPointKind::kCorner) CHECK(r.residual == 0.0);
  }
}

TEST_CASE("prisoner's dilemma has replenished equilibria at opinion corners") {
  const auto records = find_fixed_points(prisoners_dilemma_scenario().model);
  const bool found =
      std::any_of(records.begin(), records.end(), [](const auto& r) {
        return r.state.n == 1.0 && (r.state.y == 0.0 || r.state.y == 1.0);
      });
  CHECK(found);
}

TEST_CASE("zero trust keeps every replicator and environment null") {
  ModelParams m = hawk_dove_scenario().model;
  m.trust = {};
  const auto records = find_fixed_points(m);
  for (double y : {0.0, 1.0}) {
    std::vector<double> xs = {0.0, 1.0};
    if (auto mixed = mixed_equilibrium(interpolate(m.game, y))) {
      xs.push_back(*mixed);
    }
    for (double x : xs) {
      for (double n : {0.0, 1.0}) {
        CAPTURE(x);
        CAPTURE(y);
        CHECK(contains(records, {x, n, y}));
      }
    }
  }
}

TEST_CASE("kinds describe which coordinates are interior") {
  const auto records = find_fixed_points(hawk_dove_scenario().model);
  for (const FixedPointRecord& r : records) {
    const auto inner = [](double v) { return v > 1e-12 && v < 1 - 1e-12; };
    const int count = inner(r.state.x) + inner(r.state.n) + inner(r.state.y);
    switch (r.kind) {
      case FixedPointKind::kCorner:
        CHECK(count == 0);
        break;
      case FixedPointKind::kMixed:
        CHECK(count >= 2);
        break;
      default:
        CHECK(count == 1);
    }
  }
}

TEST_CASE("basin scan of the hawk-dove opinion axis") {
  const Scenario sc = hawk_dove_scenario();

  SUBCASE("the two published starts land on different attractors") {
    const std::vector<double> grid = {0.45, 0.7};
    const BasinMap map = basin_scan(sc, Axis::kY0, grid);
    REQUIRE(map.cells.size() == 2);
    REQUIRE(map.cells[0].resolved());
    REQUIRE(map.cells[1].resolved());
    CHECK(map.fixed_points[*map.cells[0].fixed_point].state.x ==
          doctest::Approx(1.0 / 3.0));
    CHECK(map.fixed_points[*map.cells[1].fixed_point].state.x ==
          doctest::Approx(0.7));
  }

  SUBCASE("a start on a fixed point keeps that label") {
    const Scenario at_fixed = with_initial(with_initial(sc, Axis::kX0, 0.7),
                                           Axis::kN0, 1.0);
    const std::vector<double> grid = {1.0};
    const BasinMap map = basin_scan(at_fixed, Axis::kY0, grid);
    REQUIRE(map.cells[0].resolved());
    CHECK(map.cells[0].label == "x=0.7 n=1 y=1");
  }

  SUBCASE("eleven points give a single monotone switch") {
    const std::vector<double> grid = uniform_grid(11);
    const BasinMap map = basin_scan(sc, Axis::kY0, grid);
    for (const BasinCell& cell : map.cells) CHECK(cell.resolved());
    CHECK(map.label_switches() == 1);
    CHECK(map.cells.front().label != map.cells.back().label);
  }

  SUBCASE("parallel and serial scans agree") {
    const std::vector<double> grid = uniform_grid(13);
    const BasinMap serial = basin_scan(sc, Axis::kY0, grid, 1);
    const BasinMap parallel = basin_scan(sc, Axis::kY0, grid, 4);
    REQUIRE(serial.cells.size() == parallel.cells.size());
    for (std::size_t i = 0; i < serial.cells.size(); ++i) {
      CHECK(serial.cells[i].terminal == parallel.cells[i].terminal);
      CHECK(serial.cells[i].label == parallel.cells[i].label);
      CHECK(serial.cells[i].converged == parallel.cells[i].converged);
    }
  }

  CHECK_THROWS(basin_scan(sc, Axis::kY0, std::vector<double>{1.5}));
}

TEST_CASE("basin cells record failures without aborting the scan") {
  Scenario sc = hawk_dove_scenario();
  sc.settings.dt = 3.0;
  sc.settings.t_max = 300.0;
  const std::vector<double> grid = {0.2, 0.8};
  const BasinMap map = basin_scan(sc, Axis::kY0, grid);
  REQUIRE(map.cells.size() == 2);
  for (const BasinCell& cell : map.cells) {
    CHECK_FALSE(cell.error.empty());
    CHECK_FALSE(cell.resolved());
  }
}

TEST_CASE("fixed-point closure of converged scan cells") {
  for (const Scenario& sc :
       {hawk_dove_scenario(), prisoners_dilemma_scenario()}) {
    const BasinMap map = basin_scan(sc, Axis::kY0, uniform_grid(11));
    for (const BasinCell& cell : map.cells) {
      CAPTURE(cell.value);
      if (!cell.converged) {
        CHECK_FALSE(cell.resolved());
        continue;
      }
      const auto match = nearest_fixed_point(map.fixed_points, *cell.terminal);
      REQUIRE(match.has_value());
      CHECK(match->distance <= kLabelRadius);
    }
  }
}

TEST_CASE("threshold bisection on the hawk-dove opinion axis") {
  const Scenario sc = hawk_dove_scenario();
  const BoundaryEstimate est = threshold_bisect(sc, Axis::kY0, 0.45, 0.7);
  CHECK(est.hi - est.lo < kBisectWidth);
  CHECK(est.lo_label != est.hi_label);
  CHECK(est.boundary > est.lo);
  CHECK(est.boundary < est.hi);
  MESSAGE("measured y0 boundary: " << est.boundary);

  SUBCASE("final bracket still separates the attractors") {
    const auto fps = find_fixed_points(sc.model);
    CHECK(evaluate_cell(sc, Axis::kY0, est.lo, fps).label == est.lo_label);
    CHECK(evaluate_cell(sc, Axis::kY0, est.hi, fps).label == est.hi_label);
  }

  SUBCASE("a tight bracket around the boundary is consistent") {
    const BoundaryEstimate again = threshold_bisect(
        sc, Axis::kY0, est.lo - 1e-5, est.hi + 1e-5);
    CHECK(again.boundary >= est.lo - 1e-5);
    CHECK(again.boundary <= est.hi + 1e-5);
  }

  SUBCASE("swapping the two games swaps the attractor sides") {
    Scenario swapped = sc;
    std::swap(swapped.model.game.depleted, swapped.model.game.replenished);
    const auto fps = find_fixed_points(swapped.model);
    const BasinCell low = evaluate_cell(swapped, Axis::kY0, 0.0, fps);
    const BasinCell high = evaluate_cell(swapped, Axis::kY0, 1.0, fps);
    REQUIRE(low.resolved());
    REQUIRE(high.resolved());
    // y = 0 now plays the v = 7, c = 10 game and y = 1 the v = 4, c = 12 one.
    CHECK(fps[*low.fixed_point].state.x == doctest::Approx(0.7));
    CHECK(fps[*high.fixed_point].state.x == doctest::Approx(1.0 / 3.0));
    const BoundaryEstimate mirrored =
        threshold_bisect(swapped, Axis::kY0, 0.0, 1.0);
    CHECK(mirrored.lo_label == low.label);
    CHECK(mirrored.hi_label == high.label);
    MESSAGE("swapped-game y0 boundary: " << mirrored.boundary);
  }

  CHECK_THROWS_AS(threshold_bisect(sc, Axis::kY0, 0.6, 0.7), AnalysisError);
  CHECK_THROWS_AS(threshold_bisect(sc, Axis::kY0, 0.7, 0.6),
                  std::invalid_argument);
}

TEST_CASE("axis names") {
  CHECK(parse_axis("x0") == Axis::kX0);
  CHECK(parse_axis("n0") == Axis::kN0);
  CHECK(parse_axis("y0") == Axis::kY0);
  CHECK(to_string(Axis::kN0) == "n0");
  CHECK_THROWS(parse_axis("z0"));
}
