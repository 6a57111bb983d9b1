#include "ecogame/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

namespace ecogame {

namespace {

std::string svg_coord(double v) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                       std::chars_format::fixed, 2);
  return std::string(buf.data(), end);
}

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

}  // namespace

std::string format_number(double value) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(),
                                       value, std::chars_format::general, 17);
  return std::string(buf.data(), end);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << kTrajectoryCsvHeader << '\n';
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const SystemState& s = traj.states[i];
    const DerivedSample& d = traj.derived[i];
    for (double v : {traj.times[i], s.x, s.n, s.y, d.u1, d.u2, d.u_avg, d.p12}) {
      out << format_number(v) << ',';
    }
    out << format_number(d.p21) << '\n';
  }
}

void write_truncation_marker(std::ostream& out, std::string_view reason) {
  std::string flat(reason);
  std::replace(flat.begin(), flat.end(), '\n', ' ');
  out << "# truncated: " << flat << '\n';
}

void write_trajectory_svg(std::ostream& out, const Trajectory& traj,
                          std::string_view title) {
  constexpr double kWidth = 800, kHeight = 600;
  constexpr double kLeft = 70, kRight = 30, kTop = 50, kBottom = 60;
  constexpr double kPlotW = kWidth - kLeft - kRight;
  constexpr double kPlotH = kHeight - kTop - kBottom;
  const double t_end =
      traj.times.empty() ? 1.0 : std::max(traj.times.back(), 1e-12);

  auto px = [&](double t) { return kLeft + kPlotW * t / t_end; };
  auto py = [&](double v) { return kTop + kPlotH * (1.0 - v); };

  out << R"(<svg xmlns="http://www.w3.org/2000/svg" width="800" height="600" viewBox="0 0 800 600">)"
      << '\n'
      << R"(<rect width="800" height="600" fill="white"/>)" << '\n'
      << R"(<text x="400" y="28" text-anchor="middle" font-family="sans-serif" font-size="18">)"
      << xml_escape(title) << "</text>\n"
      << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kPlotW
      << "\" height=\"" << kPlotH << R"(" fill="none" stroke="black"/>)"
      << '\n';

  for (double v : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    out << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << svg_coord(py(v))
        << "\" x2=\"" << kLeft << "\" y2=\"" << svg_coord(py(v))
        << R"(" stroke="black"/>)"
        << "<text x=\"" << kLeft - 8 << "\" y=\"" << svg_coord(py(v) + 4)
        << R"(" text-anchor="end" font-family="sans-serif" font-size="12">)"
        << v << "</text>\n";
  }
  for (int k = 0; k <= 4; ++k) {
    const double t = t_end * k / 4.0;
    std::ostringstream label;
    label << t;
    out << "<line x1=\"" << svg_coord(px(t)) << "\" y1=\"" << kTop + kPlotH
        << "\" x2=\"" << svg_coord(px(t)) << "\" y2=\"" << kTop + kPlotH + 5
        << R"(" stroke="black"/>)"
        << "<text x=\"" << svg_coord(px(t)) << "\" y=\"" << kTop + kPlotH + 20
        << R"(" text-anchor="middle" font-family="sans-serif" font-size="12">)"
        << label.str() << "</text>\n";
  }
  out << R"(<text x="400" y="590" text-anchor="middle" font-family="sans-serif" font-size="14">t</text>)"
      << '\n';

  struct Series {
    const char* name;
    const char* color;
    double SystemState::*field;
  };
  constexpr Series kSeries[] = {{"x (strategy 1)", "#1f77b4", &SystemState::x},
                                {"n (environment)", "#2ca02c", &SystemState::n},
                                {"y (opinion m1)", "#d62728", &SystemState::y}};
  for (const Series& series : kSeries) {
    out << "<polyline fill=\"none\" stroke=\"" << series.color
        << R"(" stroke-width="2" points=")";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      if (i) out << ' ';
      out << svg_coord(px(traj.times[i])) << ','
          << svg_coord(py(traj.states[i].*series.field));
    }
    out << "\"/>\n";
  }

  double legend_y = kTop + 20;
  for (const Series& series : kSeries) {
    out << "<line x1=\"600\" y1=\"" << legend_y << "\" x2=\"630\" y2=\""
        << legend_y << "\" stroke=\"" << series.color
        << R"(" stroke-width="2"/>)"
        << "<text x=\"636\" y=\"" << legend_y + 4
        << R"(" font-family="sans-serif" font-size="12">)" << series.name
        << "</text>\n";
    legend_y += 18;
  }
  out << "</svg>\n";
}

nlohmann::json state_json(const SystemState& s) {
  return {{"x", s.x}, {"n", s.n}, {"y", s.y}};
}

nlohmann::json fixed_point_json(const FixedPointRecord& rec) {
  return {{"x", rec.state.x},
          {"n", rec.state.n},
          {"y", rec.state.y},
          {"residual", rec.residual},
          {"kind", std::string(to_string(rec.kind))},
          {"environment_family", rec.environment_family},
          {"label", rec.label()}};
}

nlohmann::json simulation_summary(const Scenario& scenario,
                                  const Trajectory& traj,
                                  std::span<const FixedPointRecord> records) {
  nlohmann::json j;
  j["label"] = scenario.label;
  j["terminal"] = state_json(traj.terminal);
  j["converged"] = traj.converged;
  j["t_converged"] = traj.t_converged ? nlohmann::json(*traj.t_converged)
                                      : nlohmann::json(nullptr);
  j["t_end"] = traj.times.empty() ? 0.0 : traj.times.back();
  if (const auto match = nearest_fixed_point(records, traj.terminal)) {
    nlohmann::json fp = fixed_point_json(records[match->index]);
    fp["distance"] = match->distance;
    fp["within_label_radius"] = match->distance <= kLabelRadius;
    j["nearest_fixed_point"] = fp;
  } else {
    j["nearest_fixed_point"] = nullptr;
  }
  j["residual"] = coupled_rhs(traj.terminal, scenario.model).max_abs();
  return j;
}

std::string basin_csv_header(Axis axis) {
  return std::string(to_string(axis)) + ",x,n,y,label,converged,status";
}

void write_basin_csv(std::ostream& out, const BasinMap& map) {
  out << basin_csv_header(map.axis) << '\n';
  for (const BasinCell& cell : map.cells) {
    out << format_number(cell.value) << ',';
    if (cell.terminal) {
      out << format_number(cell.terminal->x) << ','
          << format_number(cell.terminal->n) << ','
          << format_number(cell.terminal->y) << ',';
    } else {
      out << ",,,";
    }
    std::string status = "ok";
    if (!cell.error.empty()) {
      status = "error: " + cell.error;
    } else if (!cell.converged) {
      status = "not converged";
    } else if (!cell.resolved()) {
      status = "unresolved";
    }
    // Labels and messages never contain quotes of their own; commas do.
    std::replace(status.begin(), status.end(), '"', '\'');
    std::replace(status.begin(), status.end(), '\n', ' ');
    out << cell.label << ',' << (cell.converged ? "true" : "false") << ",\""
        << status << "\"\n";
  }
}

nlohmann::json sweep_summary(const BasinMap& map,
                             const std::optional<BoundaryEstimate>& boundary,
                             std::string_view boundary_note) {
  nlohmann::json j;
  j["axis"] = std::string(to_string(map.axis));
  j["grid"] = map.grid;
  nlohmann::json cells = nlohmann::json::array();
  std::size_t failures = 0;
  for (const BasinCell& cell : map.cells) {
    nlohmann::json c;
    c["value"] = cell.value;
    c["terminal"] = cell.terminal ? state_json(*cell.terminal)
                                  : nlohmann::json(nullptr);
    c["converged"] = cell.converged;
    c["label"] = cell.resolved() ? nlohmann::json(cell.label)
                                 : nlohmann::json(nullptr);
    if (!cell.error.empty()) {
      c["error"] = cell.error;
      ++failures;
    }
    cells.push_back(std::move(c));
  }
  j["cells"] = std::move(cells);
  j["failed_cells"] = failures;
  j["label_switches"] = map.label_switches();
  if (boundary) {
    j["boundary"] = boundary->boundary;
    j["boundary_bracket"] = {boundary->lo, boundary->hi};
    j["boundary_labels"] = {boundary->lo_label, boundary->hi_label};
  } else {
    j["boundary"] = nullptr;
  }
  if (!boundary_note.empty()) j["boundary_note"] = std::string(boundary_note);
  nlohmann::json fps = nlohmann::json::array();
  for (const FixedPointRecord& rec : map.fixed_points) {
    fps.push_back(fixed_point_json(rec));
  }
  j["fixed_points"] = std::move(fps);
  return j;
}

}  // namespace ecogame
