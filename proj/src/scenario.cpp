#include "ecogame/scenario.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ecogame {

void validate(const IntegratorSettings& s) {
  if (!(std::isfinite(s.dt) && s.dt > 0.0)) {
    throw std::invalid_argument("dt must be positive");
  }
  if (!(std::isfinite(s.t_max) && s.t_max >= s.dt)) {
    throw std::invalid_argument("t_max must be finite and at least dt");
  }
  if (s.record_every < 1) {
    throw std::invalid_argument("record_every must be a positive integer");
  }
  if (!(std::isfinite(s.eps_stationary) && s.eps_stationary > 0.0)) {
    throw std::invalid_argument("eps_stationary must be positive");
  }
  if (!(std::isfinite(s.hold_time) && s.hold_time >= 0.0)) {
    throw std::invalid_argument("hold_time must be nonnegative");
  }
  if (!(std::isfinite(s.projection_tolerance) &&
        s.projection_tolerance > 0.0)) {
    throw std::invalid_argument("projection_tolerance must be positive");
  }
}

void validate(const Scenario& scenario) {
  if (scenario.label.empty()) {
    throw std::invalid_argument("scenario label must be nonempty");
  }
  validate(scenario.model);
  validate(scenario.settings);
  if (!scenario.initial.is_finite() || !scenario.initial.in_unit_cube()) {
    throw std::invalid_argument("initial state must lie in [0, 1]^3");
  }
}

Scenario hawk_dove_scenario() {
  Scenario s;
  s.label = "hawk-dove";
  s.model.game = {hawk_dove_matrix(4.0, 12.0), hawk_dove_matrix(7.0, 10.0)};
  s.model.env = {2.0, -1.0};
  s.model.trust = {0.5, 0.0, 0.0, 0.5};
  s.initial = {0.5, 0.3, 0.45};
  return s;
}

Scenario prisoners_dilemma_scenario() {
  Scenario s;
  s.label = "prisoners-dilemma";
  s.model.game = {{3.5, 1.0, 2.0, 0.75}, {4.0, 1.0, 4.5, 1.25}};
  s.model.env = {2.0, -1.0};
  s.model.trust = {0.5, 0.0, 0.0, 0.5};
  s.initial = {0.5, 0.3, 0.6};
  return s;
}

Scenario preset_scenario(std::string_view name) {
  if (name == "hawk-dove") return hawk_dove_scenario();
  if (name == "prisoners-dilemma") return prisoners_dilemma_scenario();
  throw std::invalid_argument("unknown preset '" + std::string(name) +
                              "' (expected hawk-dove or prisoners-dilemma)");
}

}  // namespace ecogame
