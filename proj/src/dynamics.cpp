#include "ecogame/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ecogame {

namespace {

void check_opinion(int opinion) {
  if (opinion != 1 && opinion != 2) {
    throw std::out_of_range("opinion index must be 1 or 2, got " +
                            std::to_string(opinion));
  }
}

double share(int opinion, double y) { return opinion == 1 ? y : 1.0 - y; }

double apply_clamp(double z, ClampMode mode) {
  if (mode == ClampMode::kPositivePart) return std::max(0.0, z);
  return std::clamp(z, 0.0, 1.0);
}

}  // namespace

bool SystemState::is_finite() const {
  return std::isfinite(x) && std::isfinite(n) && std::isfinite(y);
}

bool SystemState::in_unit_cube(double tolerance) const {
  auto inside = [tolerance](double v) {
    return v >= -tolerance && v <= 1.0 + tolerance;
  };
  return inside(x) && inside(n) && inside(y);
}

double TrustMatrix::at(int opinion, int strategy) const {
  check_opinion(opinion);
  if (strategy != 1 && strategy != 2) {
    throw std::out_of_range("strategy index must be 1 or 2, got " +
                            std::to_string(strategy));
  }
  if (opinion == 1) return strategy == 1 ? b11 : b12;
  return strategy == 1 ? b21 : b22;
}

double StateDerivative::max_abs() const {
  return std::max({std::abs(dx), std::abs(dn), std::abs(dy)});
}

bool StateDerivative::is_finite() const {
  return std::isfinite(dx) && std::isfinite(dn) && std::isfinite(dy);
}

void validate(const TrustMatrix& trust) {
  for (double b : {trust.b11, trust.b12, trust.b21, trust.b22}) {
    if (!(b >= 0.0 && b <= 1.0)) {
      throw std::invalid_argument("trust matrix entries must lie in [0, 1]");
    }
  }
}

void validate(const EnvParams& env) {
  if (!(std::isfinite(env.theta) && env.theta > 0.0)) {
    throw std::invalid_argument("replenishment rate theta must be positive");
  }
  if (!(std::isfinite(env.psi) && env.psi <= 0.0)) {
    throw std::invalid_argument("depletion rate psi must be nonpositive");
  }
}

void validate(const ModelParams& params) {
  validate(params.game);
  validate(params.env);
  validate(params.trust);
}

namespace detail {

double replicator_rhs(const SystemState& s, const Payoff2x2& a_eff) {
  const double advantage =
      row_payoff(a_eff, 1, s.x) - row_payoff(a_eff, 2, s.x);
  return s.x * (1.0 - s.x) * advantage;
}

double opinion_weighted_payoff(int opinion, const SystemState& s,
                               const Payoff2x2& a_eff,
                               const TrustMatrix& trust) {
  const bool first = opinion == 1;
  return s.x * row_payoff(a_eff, 1, s.x) * (first ? trust.b11 : trust.b21) +
         (1.0 - s.x) * row_payoff(a_eff, 2, s.x) *
             (first ? trust.b12 : trust.b22);
}

double imitation_rate(int from, int to, const SystemState& s,
                      const Payoff2x2& a_eff, const TrustMatrix& trust,
                      ClampMode clamp) {
  const double gain =
      share(to, s.y) * detail::opinion_weighted_payoff(to, s, a_eff, trust) -
      share(from, s.y) * detail::opinion_weighted_payoff(from, s, a_eff, trust);
  return apply_clamp(gain, clamp);
}

double opinion_rhs(const SystemState& s, const Payoff2x2& a_eff,
                   const TrustMatrix& trust, ClampMode clamp) {
  const double p12 = detail::imitation_rate(1, 2, s, a_eff, trust, clamp);
  const double p21 = detail::imitation_rate(2, 1, s, a_eff, trust, clamp);
  return (1.0 - s.y) * p21 - s.y * p12;
}

StateDerivative coupled_rhs(const SystemState& s, const ModelParams& params) {
  const double protocol_weight =
      params.protocol == ProtocolMatrix::kOpinion ? s.y : s.n;
  return {detail::replicator_rhs(s, lerp(params.game, s.y)),
          ecogame::environment_rhs(s, params.env),
          detail::opinion_rhs(s, lerp(params.game, protocol_weight), params.trust,
                      params.clamp)};
}

}  // namespace detail

namespace {

void check_state(const SystemState& s) {
  if (!s.is_finite() || !s.in_unit_cube(kDomainTolerance)) {
    std::ostringstream msg;
    msg << "state (x=" << s.x << ", n=" << s.n << ", y=" << s.y
        << ") lies outside the unit cube";
    throw std::domain_error(msg.str());
  }
}

}  // namespace

double replicator_rhs(const SystemState& s, const Payoff2x2& a_eff) {
  check_state(s);
  return detail::replicator_rhs(s, a_eff);
}

double environment_rhs(const SystemState& s, const EnvParams& env) {
  return s.n * (1.0 - s.n) * (env.theta * s.x + env.psi * (1.0 - s.x));
}

double opinion_weighted_payoff(int opinion, const SystemState& s,
                               const Payoff2x2& a_eff,
                               const TrustMatrix& trust) {
  check_opinion(opinion);
  check_state(s);
  return detail::opinion_weighted_payoff(opinion, s, a_eff, trust);
}

double imitation_rate(int from, int to, const SystemState& s,
                      const Payoff2x2& a_eff, const TrustMatrix& trust,
                      ClampMode clamp) {
  check_opinion(from);
  check_opinion(to);
  if (from == to) {
    throw std::invalid_argument("imitation rate needs two distinct opinions");
  }
  check_state(s);
  return detail::imitation_rate(from, to, s, a_eff, trust, clamp);
}

double opinion_rhs(const SystemState& s, const Payoff2x2& a_eff,
                   const TrustMatrix& trust, ClampMode clamp) {
  check_state(s);
  return detail::opinion_rhs(s, a_eff, trust, clamp);
}

Payoff2x2 replicator_matrix(const SystemState& s, const GamePair& game) {
  return interpolate(game, s.y);
}

Payoff2x2 protocol_matrix(const SystemState& s, const ModelParams& params) {
  return interpolate(params.game, params.protocol == ProtocolMatrix::kOpinion
                                      ? s.y
                                      : s.n);
}

StateDerivative coupled_rhs(const SystemState& s, const ModelParams& params) {
  if (!s.is_finite() || !s.in_unit_cube(kCubeTolerance)) {
    std::ostringstream msg;
    msg << "state (x=" << s.x << ", n=" << s.n << ", y=" << s.y
        << ") escaped the unit cube; integration blew up";
    throw std::domain_error(msg.str());
  }
  return detail::coupled_rhs(s, params);
}

}  // namespace ecogame
