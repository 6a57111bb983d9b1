#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ecogame/dynamics.hpp"
#include "ecogame/scenario.hpp"

namespace ecogame {

// Records are kept only when ||coupled_rhs||_inf falls below this.
inline constexpr double kFixedPointResidual = 1e-10;
// A terminal state is attributed to a fixed point within this distance.
inline constexpr double kLabelRadius = 1e-3;

enum class FixedPointKind {
  kCorner,               // x, n, y all on cube faces
  kReplicatorInterior,   // only x interior
  kEnvironmentInterior,  // only n interior
  kOpinionInterior,      // only y interior
  kMixed,                // two or more interior coordinates
};

std::string_view to_string(FixedPointKind kind);

struct FixedPointRecord {
  SystemState state;
  double residual = 0.0;
  FixedPointKind kind = FixedPointKind::kCorner;
  // The point belongs to a segment of equilibria with n free in [0, 1]
  // (strategy mix balances replenishment against depletion). Distances and
  // labels then ignore n.
  bool environment_family = false;

  /// Attractor identity used for basin labels. Points of one environment
  /// family share a label.
  std::string label() const;

  /// Sup-norm distance to the point, or to the n-segment for a family.
  double distance_to(const SystemState& state) const;
};

/// Enumerates candidate equilibria from the null sets of the three equations
/// and keeps those whose residual is below kFixedPointResidual. Sorted by
/// (x, n, y).
std::vector<FixedPointRecord> find_fixed_points(const ModelParams& params);

struct FixedPointMatch {
  std::size_t index = 0;
  double distance = 0.0;
};

/// Closest record regardless of distance; nullopt only for an empty list.
std::optional<FixedPointMatch> nearest_fixed_point(
    std::span<const FixedPointRecord> records, const SystemState& state);

enum class Axis { kX0, kN0, kY0 };

std::string_view to_string(Axis axis);
Axis parse_axis(std::string_view text);

/// Copy of `scenario` with one initial coordinate replaced.
Scenario with_initial(const Scenario& scenario, Axis axis, double value);

struct BasinCell {
  double value = 0.0;
  std::optional<SystemState> terminal;
  bool converged = false;
  // Set when the run converged within kLabelRadius of a fixed point.
  std::optional<std::size_t> fixed_point;
  std::string label;
  // Simulation failure message; empty on success.
  std::string error;

  bool resolved() const { return fixed_point.has_value(); }
};

struct BasinMap {
  Axis axis = Axis::kY0;
  std::vector<double> grid;
  std::vector<BasinCell> cells;
  std::vector<FixedPointRecord> fixed_points;

  /// Label changes between consecutive resolved cells.
  std::size_t label_switches() const;
};

/// Simulates one initial condition and attributes its terminal state.
BasinCell evaluate_cell(const Scenario& scenario, Axis axis, double value,
                        std::span<const FixedPointRecord> fixed_points);

/// One simulation per grid value. Cells run on up to `threads` workers
/// (0 = hardware concurrency); results are assembled in grid order.
BasinMap basin_scan(const Scenario& scenario, Axis axis,
                    std::span<const double> grid, unsigned threads = 0);

class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BoundaryEstimate {
  double boundary = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::string lo_label;
  std::string hi_label;
  int iterations = 0;
};

inline constexpr double kBisectWidth = 1e-4;

/// Bisects the initial-condition axis between two differently labelled
/// endpoints until the bracket is narrower than kBisectWidth or max_iters
/// halvings have been done.
BoundaryEstimate threshold_bisect(const Scenario& scenario, Axis axis,
                                  double lo, double hi, int max_iters = 64);

}  // namespace ecogame
