#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ecogame/dynamics.hpp"
#include "ecogame/scenario.hpp"

namespace ecogame {

/// Quantities recorded alongside each state. Payoffs use the replicator game
/// A_y; protocol rates use the game selected by ModelParams::protocol.
struct DerivedSample {
  double u1 = 0.0;
  double u2 = 0.0;
  double u_avg = 0.0;
  double p12 = 0.0;
  double p21 = 0.0;

  friend bool operator==(const DerivedSample&, const DerivedSample&) = default;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<SystemState> states;
  std::vector<DerivedSample> derived;
  bool converged = false;
  std::optional<double> t_converged;
  SystemState terminal;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

enum class Scheme { kRk4, kEuler };

/// Thrown by the steppers and by simulate(). When raised from simulate() it
/// carries the samples recorded up to the last valid time.
class IntegrationError : public std::runtime_error {
 public:
  enum class Kind { kNonFinite, kProjectionOvershoot };

  IntegrationError(Kind kind, const std::string& what);

  Kind kind() const { return kind_; }
  std::optional<double> last_valid_time() const { return last_valid_time_; }
  const Trajectory* partial() const { return partial_.get(); }

  IntegrationError with_context(double last_valid_time,
                                Trajectory partial) const;

 private:
  Kind kind_;
  std::optional<double> last_valid_time_;
  std::shared_ptr<const Trajectory> partial_;
};

DerivedSample derive(const SystemState& state, const ModelParams& params);

/// Snaps rounding-scale overshoot back onto the cube faces.
SystemState project_to_cube(const SystemState& state, double tolerance);

/// Classical fourth-order Runge-Kutta step followed by cube projection.
SystemState rk4_step(const SystemState& state, const ModelParams& params,
                     double dt, double projection_tolerance = 1e-9);

/// Forward Euler step followed by cube projection.
SystemState euler_step(const SystemState& state, const ModelParams& params,
                       double dt, double projection_tolerance = 1e-9);

/// Fixed-step integration from scenario.initial until t_max or until the
/// derivative norm stays below eps_stationary for hold_time. Bit-for-bit
/// deterministic for equal inputs.
Trajectory simulate(const Scenario& scenario, Scheme scheme = Scheme::kRk4);

}  // namespace ecogame
