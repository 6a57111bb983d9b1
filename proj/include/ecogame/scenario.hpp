#pragma once

#include <string>
#include <string_view>

#include "ecogame/dynamics.hpp"

namespace ecogame {

struct IntegratorSettings {
  double dt = 0.01;
  double t_max = 500.0;
  int record_every = 10;
  // Convergence: ||rhs||_inf below eps_stationary for at least hold_time.
  double eps_stationary = 1e-8;
  double hold_time = 1.0;
  // Overshoot past a cube face snapped back after each step; more is an error.
  double projection_tolerance = 1e-9;

  friend bool operator==(const IntegratorSettings&,
                         const IntegratorSettings&) = default;
};

/// A complete problem instance.
struct Scenario {
  std::string label = "custom";
  ModelParams model;
  SystemState initial;
  IntegratorSettings settings;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

void validate(const IntegratorSettings& settings);
void validate(const Scenario& scenario);

/// Hawk-Dove experiment: v0 = 4, c0 = 12 depleted, v1 = 7, c1 = 10
/// replenished, theta = 2, psi = -1, B = diag(0.5, 0.5), start (0.5, 0.3, y0).
/// The experiment varies y0; the preset uses 0.45.
Scenario hawk_dove_scenario();

/// Prisoner's Dilemma experiment, start (0.5, 0.3, 0.6).
Scenario prisoners_dilemma_scenario();

/// Preset by CLI name ("hawk-dove" or "prisoners-dilemma").
Scenario preset_scenario(std::string_view name);

}  // namespace ecogame
