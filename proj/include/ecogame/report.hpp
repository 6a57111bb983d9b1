#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ecogame/analysis.hpp"
#include "ecogame/integrator.hpp"

namespace ecogame {

inline constexpr std::string_view kTrajectoryCsvHeader =
    "t,x,n,y,u1,u2,u_avg,p12,p21";

/// 17 significant digits, locale independent.
std::string format_number(double value);

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

/// Marker row appended to a CSV whose simulation stopped early.
void write_truncation_marker(std::ostream& out, std::string_view reason);

/// Standalone 800x600 SVG with x(t), n(t), y(t) polylines and a legend.
void write_trajectory_svg(std::ostream& out, const Trajectory& trajectory,
                          std::string_view title);

nlohmann::json state_json(const SystemState& state);
nlohmann::json fixed_point_json(const FixedPointRecord& record);

/// Summary keys: terminal, converged, t_converged, nearest_fixed_point,
/// residual.
nlohmann::json simulation_summary(const Scenario& scenario,
                                  const Trajectory& trajectory,
                                  std::span<const FixedPointRecord> records);

std::string basin_csv_header(Axis axis);
void write_basin_csv(std::ostream& out, const BasinMap& map);

/// Per-cell results plus `boundary` (null unless a single switch was
/// bisected).
nlohmann::json sweep_summary(const BasinMap& map,
                             const std::optional<BoundaryEstimate>& boundary,
                             std::string_view boundary_note);

}  // namespace ecogame
