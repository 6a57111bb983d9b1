#include "ecogame/commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include "ecogame/config.hpp"
#include "ecogame/integrator.hpp"
#include "ecogame/report.hpp"

namespace ecogame {

namespace {

// Writes `content` and reports whether the file is complete on disk.
bool write_file(const std::filesystem::path& path, const std::string& content,
                std::ostream& log) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    log << "error: cannot open " << path << " for writing\n";
    return false;
  }
  out << content;
  out.close();
  if (!out) {
    log << "error: failed writing " << path << '\n';
    return false;
  }
  return true;
}

double parse_grid_number(std::string_view token, std::string_view whole) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc{} ||
      ptr != token.data() + token.size()) {
    throw std::invalid_argument("malformed grid spec '" + std::string(whole) +
                                "'");
  }
  return value;
}

}  // namespace

std::vector<double> GridSpec::values() const {
  if (count == 1) return {lo};
  std::vector<double> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    out.push_back(k == count - 1 ? hi : lo + (hi - lo) * k / (count - 1));
  }
  return out;
}

GridSpec parse_grid(std::string_view text) {
  const auto first = text.find(':');
  const auto second = first == std::string_view::npos
                          ? std::string_view::npos
                          : text.find(':', first + 1);
  if (second == std::string_view::npos ||
      text.find(':', second + 1) != std::string_view::npos) {
    throw std::invalid_argument("grid spec must be lo:hi:count, got '" +
                                std::string(text) + "'");
  }
  GridSpec g;
  g.lo = parse_grid_number(text.substr(0, first), text);
  g.hi = parse_grid_number(text.substr(first + 1, second - first - 1), text);
  const double count = parse_grid_number(text.substr(second + 1), text);
  if (!(0.0 <= g.lo && g.lo < g.hi && g.hi <= 1.0)) {
    throw std::invalid_argument("grid spec needs 0 <= lo < hi <= 1");
  }
  if (!(count >= 1.0 && count <= 1e6 && count == std::floor(count))) {
    throw std::invalid_argument("grid count must be a positive integer");
  }
  g.count = static_cast<int>(count);
  return g;
}

int run_simulate(const Scenario& scenario, const SimulateOutputs& outputs,
                 std::ostream& log) {
  const auto records = find_fixed_points(scenario.model);
  Trajectory traj;
  std::string failure;
  try {
    traj = simulate(scenario);
  } catch (const IntegrationError& e) {
    failure = e.what();
    if (e.partial()) traj = *e.partial();
  }

  std::ostringstream csv;
  write_trajectory_csv(csv, traj);
  if (!failure.empty()) write_truncation_marker(csv, failure);
  bool written = write_file(outputs.csv, csv.str(), log);

  if (outputs.json) {
    nlohmann::json summary =
        traj.times.empty() ? nlohmann::json::object()
                           : simulation_summary(scenario, traj, records);
    if (!failure.empty()) summary["error"] = failure;
    written = write_file(*outputs.json, summary.dump(2) + "\n", log) && written;
  }
  if (outputs.svg && !traj.times.empty()) {
    std::ostringstream svg;
    write_trajectory_svg(svg, traj, scenario.label);
    written = write_file(*outputs.svg, svg.str(), log) && written;
  }

  if (!failure.empty()) {
    log << "error: simulation failed: " << failure << '\n';
    return kExitSimulation;
  }
  log << scenario.label << ": terminal x=" << format_number(traj.terminal.x)
      << " n=" << format_number(traj.terminal.n)
      << " y=" << format_number(traj.terminal.y)
      << (traj.converged ? " (converged)" : " (not converged)") << '\n';
  return written ? kExitOk : kExitIo;
}

int run_sweep(const Scenario& scenario, Axis axis, const GridSpec& grid,
              const SweepOutputs& outputs, std::ostream& log,
              unsigned threads) {
  const std::vector<double> values = grid.values();
  const BasinMap map = basin_scan(scenario, axis, values, threads);

  std::optional<BoundaryEstimate> boundary;
  std::string note;
  if (map.label_switches() == 1) {
    const BasinCell* previous = nullptr;
    for (const BasinCell& cell : map.cells) {
      if (!cell.resolved()) continue;
      if (previous && previous->label != cell.label) {
        try {
          boundary = threshold_bisect(scenario, axis, previous->value,
                                      cell.value);
        } catch (const std::exception& e) {
          note = std::string("bisection failed: ") + e.what();
        }
        break;
      }
      previous = &cell;
    }
  } else {
    note = std::to_string(map.label_switches()) +
           " label switches; boundary bisection needs exactly one";
  }

  std::ostringstream csv;
  write_basin_csv(csv, map);
  bool written = write_file(outputs.csv, csv.str(), log);
  if (outputs.json) {
    written = write_file(*outputs.json,
                         sweep_summary(map, boundary, note).dump(2) + "\n",
                         log) &&
              written;
  }

  std::size_t failures = 0;
  for (const BasinCell& cell : map.cells) failures += !cell.error.empty();
  log << "sweep over " << to_string(axis) << ": " << map.cells.size()
      << " cells, " << map.label_switches() << " label switch(es)";
  if (boundary) log << ", boundary " << format_number(boundary->boundary);
  log << '\n';
  if (failures == map.cells.size()) {
    log << "error: every sweep cell failed\n";
    return kExitSimulation;
  }
  return written ? kExitOk : kExitIo;
}

int run_fixed_points(const Scenario& scenario,
                     const std::filesystem::path& json, std::ostream& log) {
  nlohmann::json list = nlohmann::json::array();
  const auto records = find_fixed_points(scenario.model);
  for (const FixedPointRecord& rec : records) {
    list.push_back(fixed_point_json(rec));
  }
  log << records.size() << " fixed points\n";
  return write_file(json, list.dump(2) + "\n", log) ? kExitOk : kExitIo;
}

int run_preset(std::string_view name, const std::filesystem::path& out,
               std::ostream& log) {
  return write_file(out, preset_config_text(name), log) ? kExitOk : kExitIo;
}

}  // namespace ecogame
