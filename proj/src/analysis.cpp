#include "ecogame/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>
#include <tuple>

#include "ecogame/integrator.hpp"

namespace ecogame {

namespace {

constexpr double kFaceTolerance = 1e-12;
constexpr double kDuplicateRadius = 1e-9;
constexpr int kOpinionScanPoints = 1000;
constexpr double kFamilySamples[] = {0.0, 0.25, 0.5, 0.75, 1.0};

bool interior(double v) {
  return v > kFaceTolerance && v < 1.0 - kFaceTolerance;
}

double sup_distance(const SystemState& a, const SystemState& b) {
  return std::max(
      {std::abs(a.x - b.x), std::abs(a.n - b.n), std::abs(a.y - b.y)});
}

FixedPointKind classify(const SystemState& s) {
  const int count = interior(s.x) + interior(s.n) + interior(s.y);
  if (count == 0) return FixedPointKind::kCorner;
  if (count > 1) return FixedPointKind::kMixed;
  if (interior(s.x)) return FixedPointKind::kReplicatorInterior;
  if (interior(s.n)) return FixedPointKind::kEnvironmentInterior;
  return FixedPointKind::kOpinionInterior;
}

double residual(const SystemState& s, const ModelParams& params) {
  return detail::coupled_rhs(s, params).max_abs();
}

// Replicator null for x given y: x = 0, x = 1, or the interior root of A_y.
std::optional<double> x_on_branch(int branch, double y,
                                  const ModelParams& params) {
  if (branch == 0) return 0.0;
  if (branch == 1) return 1.0;
  return mixed_equilibrium(detail::lerp(params.game, y));
}

// y S1 - (1 - y) S2. For y in (0, 1) the opinion equation vanishes exactly
// where this does.
double opinion_balance(const SystemState& s, const ModelParams& params) {
  const Payoff2x2 a = detail::lerp(
      params.game, params.protocol == ProtocolMatrix::kOpinion ? s.y : s.n);
  return s.y * detail::opinion_weighted_payoff(1, s, a, params.trust) -
         (1.0 - s.y) * detail::opinion_weighted_payoff(2, s, a, params.trust);
}

// Roots of f on (0, 1): scan a uniform grid for sign changes, then bisect.
// f may return nullopt where it is undefined; such points break brackets.
// A run of exact zeros yields its first point; f vanishing on the whole grid
// is a continuum that no finite list represents, so nothing is returned.
template <typename F>
std::vector<double> scan_roots(F&& f) {
  std::vector<double> roots;
  std::optional<double> prev_value;
  double prev_t = 0.0;
  bool all_zero = true;
  for (int k = 1; k < kOpinionScanPoints; ++k) {
    const double t = static_cast<double>(k) / kOpinionScanPoints;
    const std::optional<double> value = f(t);
    if (!value || *value != 0.0) all_zero = false;
    if (value && *value == 0.0) {
      if (!(prev_value && *prev_value == 0.0)) roots.push_back(t);
    } else if (value && prev_value && *prev_value != 0.0 &&
               std::signbit(*value) != std::signbit(*prev_value)) {
      double lo = prev_t;
      double hi = t;
      bool lo_negative = std::signbit(*prev_value);
      bool ok = true;
      for (int iter = 0; iter < 200 && hi - lo > 0.0; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const std::optional<double> fm = f(mid);
        if (!fm) {
          ok = false;
          break;
        }
        if (*fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if (std::signbit(*fm) == lo_negative) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      if (ok) roots.push_back(0.5 * (lo + hi));
    }
    prev_value = value;
    prev_t = t;
  }
  if (all_zero) roots.clear();
  return roots;
}

}  // namespace

std::string_view to_string(FixedPointKind kind) {
  switch (kind) {
    case FixedPointKind::kCorner:
      return "corner";
    case FixedPointKind::kReplicatorInterior:
      return "replicator-interior";
    case FixedPointKind::kEnvironmentInterior:
      return "environment-interior";
    case FixedPointKind::kOpinionInterior:
      return "opinion-interior";
    case FixedPointKind::kMixed:
      return "mixed";
  }
  return "unknown";
}

std::string FixedPointRecord::label() const {
  char buffer[96];
  if (environment_family) {
    std::snprintf(buffer, sizeof buffer, "x=%.6g n=* y=%.6g", state.x,
                  state.y);
  } else {
    std::snprintf(buffer, sizeof buffer, "x=%.6g n=%.6g y=%.6g", state.x,
                  state.n, state.y);
  }
  return buffer;
}

double FixedPointRecord::distance_to(const SystemState& s) const {
  if (environment_family) {
    return std::max(std::abs(state.x - s.x), std::abs(state.y - s.y));
  }
  return sup_distance(state, s);
}

std::vector<FixedPointRecord> find_fixed_points(const ModelParams& params) {
  validate(params);
  const double theta = params.env.theta;
  const double psi = params.env.psi;
  // Strategy mix at which replenishment and depletion cancel.
  const double x_balance = -psi / (theta - psi);

  std::vector<SystemState> candidates;

  for (double y : {0.0, 1.0}) {
    for (int branch = 0; branch < 3; ++branch) {
      const std::optional<double> x = x_on_branch(branch, y, params);
      if (!x) continue;
      for (double n : kFamilySamples) candidates.push_back({*x, n, y});
    }
  }

  for (int branch = 0; branch < 3; ++branch) {
    for (double n : kFamilySamples) {
      auto balance = [&](double y) -> std::optional<double> {
        const std::optional<double> x = x_on_branch(branch, y, params);
        if (!x) return std::nullopt;
        return opinion_balance({*x, n, y}, params);
      };
      for (double y : scan_roots(balance)) {
        if (const auto x = x_on_branch(branch, y, params)) {
          candidates.push_back({*x, n, y});
        }
      }
    }
  }

  // Interior replicator root sitting on the balance mix: n is then free for
  // the first two equations and the opinion equation picks n.
  auto branch_offset = [&](double y) -> std::optional<double> {
    const std::optional<double> x = x_on_branch(2, y, params);
    if (!x) return std::nullopt;
    return *x - x_balance;
  };
  for (double y : scan_roots(branch_offset)) {
    auto balance = [&](double n) -> std::optional<double> {
      return opinion_balance({x_balance, n, y}, params);
    };
    for (double n : scan_roots(balance)) {
      candidates.push_back({x_balance, n, y});
    }
  }

  std::vector<FixedPointRecord> records;
  for (const SystemState& c : candidates) {
    if (!c.in_unit_cube()) continue;
    const double r = residual(c, params);
    if (!(r < kFixedPointResidual)) continue;
    const bool duplicate =
        std::any_of(records.begin(), records.end(), [&](const auto& rec) {
          return sup_distance(rec.state, c) < kDuplicateRadius;
        });
    if (!duplicate) records.push_back({c, r, classify(c), false});
  }

  // A point on the balance mix whose residual vanishes at every sampled n is
  // reported as a segment of equilibria.
  for (FixedPointRecord& rec : records) {
    if (std::abs(rec.state.x - x_balance) > kDuplicateRadius) continue;
    rec.environment_family =
        std::all_of(std::begin(kFamilySamples), std::end(kFamilySamples),
                    [&](double n) {
                      return residual({rec.state.x, n, rec.state.y}, params) <
                             kFixedPointResidual;
                    });
  }

  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.state.x, a.state.n, a.state.y) <
           std::tie(b.state.x, b.state.n, b.state.y);
  });
  return records;
}

std::optional<FixedPointMatch> nearest_fixed_point(
    std::span<const FixedPointRecord> records, const SystemState& state) {
  std::optional<FixedPointMatch> best;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const double d = records[i].distance_to(state);
    if (!best || d < best->distance) best = FixedPointMatch{i, d};
  }
  return best;
}

std::string_view to_string(Axis axis) {
  switch (axis) {
    case Axis::kX0:
      return "x0";
    case Axis::kN0:
      return "n0";
    case Axis::kY0:
      return "y0";
  }
  return "unknown";
}

Axis parse_axis(std::string_view text) {
  if (text == "x0") return Axis::kX0;
  if (text == "n0") return Axis::kN0;
  if (text == "y0") return Axis::kY0;
  throw std::invalid_argument("axis must be one of x0, n0, y0; got '" +
                              std::string(text) + "'");
}

Scenario with_initial(const Scenario& scenario, Axis axis, double value) {
  Scenario out = scenario;
  switch (axis) {
    case Axis::kX0:
      out.initial.x = value;
      break;
    case Axis::kN0:
      out.initial.n = value;
      break;
    case Axis::kY0:
      out.initial.y = value;
      break;
  }
  return out;
}

BasinCell evaluate_cell(const Scenario& scenario, Axis axis, double value,
                        std::span<const FixedPointRecord> fixed_points) {
  BasinCell cell;
  cell.value = value;
  try {
    const Trajectory traj = simulate(with_initial(scenario, axis, value));
    cell.terminal = traj.terminal;
    cell.converged = traj.converged;
  } catch (const IntegrationError& e) {
    cell.error = e.what();
    if (e.partial()) cell.terminal = e.partial()->terminal;
    return cell;
  } catch (const std::exception& e) {
    cell.error = e.what();
    return cell;
  }
  if (!cell.converged) return cell;
  const auto match = nearest_fixed_point(fixed_points, *cell.terminal);
  if (match && match->distance <= kLabelRadius) {
    cell.fixed_point = match->index;
    cell.label = fixed_points[match->index].label();
  }
  return cell;
}

std::size_t BasinMap::label_switches() const {
  std::size_t switches = 0;
  const BasinCell* previous = nullptr;
  for (const BasinCell& cell : cells) {
    if (!cell.resolved()) continue;
    if (previous && previous->label != cell.label) ++switches;
    previous = &cell;
  }
  return switches;
}

BasinMap basin_scan(const Scenario& scenario, Axis axis,
                    std::span<const double> grid, unsigned threads) {
  for (double v : grid) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("basin grid values must lie in [0, 1]");
    }
  }
  BasinMap map;
  map.axis = axis;
  map.grid.assign(grid.begin(), grid.end());
  map.fixed_points = find_fixed_points(scenario.model);
  map.cells.resize(grid.size());

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, std::max<std::size_t>(1, grid.size()));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      map.cells[i] = evaluate_cell(scenario, axis, grid[i], map.fixed_points);
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return map;
}

BoundaryEstimate threshold_bisect(const Scenario& scenario, Axis axis,
                                  double lo, double hi, int max_iters) {
  if (!(lo < hi)) {
    throw std::invalid_argument("threshold_bisect needs lo < hi");
  }
  const auto fixed_points = find_fixed_points(scenario.model);
  auto label_at = [&](double v) {
    BasinCell cell = evaluate_cell(scenario, axis, v, fixed_points);
    if (!cell.resolved()) {
      char buffer[64];
      std::snprintf(buffer, sizeof buffer, "%s = %.17g",
                    std::string(to_string(axis)).c_str(), v);
      throw AnalysisError(std::string("unresolved cell at ") + buffer +
                          (cell.error.empty() ? "" : ": " + cell.error));
    }
    return cell.label;
  };

  BoundaryEstimate est;
  est.lo = lo;
  est.hi = hi;
  est.lo_label = label_at(lo);
  est.hi_label = label_at(hi);
  if (est.lo_label == est.hi_label) {
    throw AnalysisError("no boundary: both endpoints reach " + est.lo_label);
  }
  while (est.hi - est.lo >= kBisectWidth && est.iterations < max_iters) {
    const double mid = 0.5 * (est.lo + est.hi);
    const std::string label = label_at(mid);
    if (label == est.lo_label) {
      est.lo = mid;
    } else if (label == est.hi_label) {
      est.hi = mid;
    } else {
      throw AnalysisError("third attractor " + label + " inside the bracket");
    }
    ++est.iterations;
  }
  est.boundary = 0.5 * (est.lo + est.hi);
  return est;
}

}  // namespace ecogame
