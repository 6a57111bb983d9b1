#pragma once

#include "ecogame/game_core.hpp"

namespace ecogame {

// Overshoot outside the unit cube tolerated by coupled_rhs.
inline constexpr double kCubeTolerance = 1e-9;

/// Point of the coupled system: strategy-1 share x, environment n, and
/// share y of agents holding opinion m1.
struct SystemState {
  double x = 0.0;
  double n = 0.0;
  double y = 0.0;

  bool is_finite() const;
  bool in_unit_cube(double tolerance = 0.0) const;

  friend bool operator==(const SystemState&, const SystemState&) = default;
};

/// b_ij: confidence of opinion-i holders in strategy-j players.
struct TrustMatrix {
  double b11 = 0.0;
  double b12 = 0.0;
  double b21 = 0.0;
  double b22 = 0.0;

  double at(int opinion, int strategy) const;

  friend bool operator==(const TrustMatrix&, const TrustMatrix&) = default;
};

/// Logistic resource feedback: strategy-1 players replenish at `theta`,
/// strategy-2 players deplete at rate `psi` (nonpositive).
struct EnvParams {
  double theta = 2.0;
  double psi = -1.0;

  friend bool operator==(const EnvParams&, const EnvParams&) = default;
};

struct StateDerivative {
  double dx = 0.0;
  double dn = 0.0;
  double dy = 0.0;

  double max_abs() const;
  bool is_finite() const;
};

/// Which interpolated game feeds the opinion imitation protocol.
enum class ProtocolMatrix {
  kEnvironment,  // A_n, weighted by the environment state
  kOpinion,      // A_y, the same game the replicator line uses
};

/// Reading of the protocol bracket [z]_0^1.
enum class ClampMode {
  kUnitInterval,  // max(0, min(1, z))
  kPositivePart,  // max(0, z)
};

/// Everything the right-hand side needs apart from the state.
struct ModelParams {
  GamePair game;
  EnvParams env;
  TrustMatrix trust;
  ProtocolMatrix protocol = ProtocolMatrix::kEnvironment;
  ClampMode clamp = ClampMode::kUnitInterval;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

void validate(const TrustMatrix& trust);
void validate(const EnvParams& env);
void validate(const ModelParams& params);

double replicator_rhs(const SystemState& state, const Payoff2x2& a_eff);

double environment_rhs(const SystemState& state, const EnvParams& env);

/// Trust-weighted payoff of an opinion holder:
/// x u(e^1) b_{i1} + (1 - x) u(e^2) b_{i2}.
double opinion_weighted_payoff(int opinion, const SystemState& state,
                               const Payoff2x2& a_eff,
                               const TrustMatrix& trust);

/// p_ij = [y_j S_j - y_i S_i]_0^1 for a switch from opinion i to opinion j.
double imitation_rate(int from, int to, const SystemState& state,
                      const Payoff2x2& a_eff, const TrustMatrix& trust,
                      ClampMode clamp = ClampMode::kUnitInterval);

/// (1 - y) p21 - y p12.
double opinion_rhs(const SystemState& state, const Payoff2x2& a_eff,
                   const TrustMatrix& trust,
                   ClampMode clamp = ClampMode::kUnitInterval);

/// Game driving the replicator line: interpolated by the opinion share y.
Payoff2x2 replicator_matrix(const SystemState& state, const GamePair& game);

/// Game feeding the imitation protocol under the configured mode.
Payoff2x2 protocol_matrix(const SystemState& state, const ModelParams& params);

/// Full coupled right-hand side. Throws std::domain_error when the state
/// leaves the unit cube by more than kCubeTolerance.
StateDerivative coupled_rhs(const SystemState& state,
                            const ModelParams& params);

namespace detail {

// Same arithmetic as the public operations without the domain checks.
double replicator_rhs(const SystemState& state, const Payoff2x2& a_eff);
double opinion_weighted_payoff(int opinion, const SystemState& state,
                               const Payoff2x2& a_eff,
                               const TrustMatrix& trust);
double imitation_rate(int from, int to, const SystemState& state,
                      const Payoff2x2& a_eff, const TrustMatrix& trust,
                      ClampMode clamp);
double opinion_rhs(const SystemState& state, const Payoff2x2& a_eff,
                   const TrustMatrix& trust, ClampMode clamp);
StateDerivative coupled_rhs(const SystemState& state,
                            const ModelParams& params);

}  // namespace detail

}  // namespace ecogame
