#include "ecogame/integrator.hpp"

#include <cmath>
#include <sstream>

namespace ecogame {

namespace {

SystemState advance(const SystemState& s, const StateDerivative& d,
                    double h) {
  return {s.x + h * d.dx, s.n + h * d.dn, s.y + h * d.dy};
}

StateDerivative stage(const SystemState& s, const ModelParams& params,
                      const char* scheme, int index) {
  const StateDerivative d = detail::coupled_rhs(s, params);
  if (d.is_finite()) return d;
  const char* component = !std::isfinite(d.dx)   ? "dx"
                          : !std::isfinite(d.dn) ? "dn"
                                                 : "dy";
  std::ostringstream msg;
  msg << "non-finite " << component << " in " << scheme << " stage " << index;
  throw IntegrationError(IntegrationError::Kind::kNonFinite, msg.str());
}

double rhs_norm(const SystemState& s, const ModelParams& params) {
  return detail::coupled_rhs(s, params).max_abs();
}

}  // namespace

IntegrationError::IntegrationError(Kind kind, const std::string& what)
    : std::runtime_error(what), kind_(kind) {}

IntegrationError IntegrationError::with_context(double last_valid_time,
                                                Trajectory partial) const {
  std::ostringstream msg;
  msg << what() << " (last valid time t=" << last_valid_time << ")";
  IntegrationError error(kind_, msg.str());
  error.last_valid_time_ = last_valid_time;
  error.partial_ = std::make_shared<const Trajectory>(std::move(partial));
  return error;
}

DerivedSample derive(const SystemState& s, const ModelParams& params) {
  const Payoff2x2 game = detail::lerp(params.game, s.y);
  const Payoff2x2 protocol = detail::lerp(
      params.game, params.protocol == ProtocolMatrix::kOpinion ? s.y : s.n);
  DerivedSample out;
  out.u1 = detail::row_payoff(game, 1, s.x);
  out.u2 = detail::row_payoff(game, 2, s.x);
  out.u_avg = s.x * out.u1 + (1.0 - s.x) * out.u2;
  out.p12 = detail::imitation_rate(1, 2, s, protocol, params.trust,
                                   params.clamp);
  out.p21 = detail::imitation_rate(2, 1, s, protocol, params.trust,
                                   params.clamp);
  return out;
}

SystemState project_to_cube(const SystemState& s, double tolerance) {
  if (!s.is_finite()) {
    throw IntegrationError(IntegrationError::Kind::kNonFinite,
                           "state became non-finite");
  }
  auto snap = [tolerance](double v, const char* name) {
    if (v >= 0.0 && v <= 1.0) return v;
    if (v > -tolerance && v < 0.0) return 0.0;
    if (v > 1.0 && v < 1.0 + tolerance) return 1.0;
    std::ostringstream msg;
    msg << name << " = " << v << " overshot the unit cube by more than "
        << tolerance << "; reduce dt";
    throw IntegrationError(IntegrationError::Kind::kProjectionOvershoot,
                           msg.str());
  };
  return {snap(s.x, "x"), snap(s.n, "n"), snap(s.y, "y")};
}

SystemState rk4_step(const SystemState& s, const ModelParams& params,
                     double dt, double projection_tolerance) {
  const StateDerivative k1 = stage(s, params, "RK4", 1);
  const StateDerivative k2 = stage(advance(s, k1, dt / 2), params, "RK4", 2);
  const StateDerivative k3 = stage(advance(s, k2, dt / 2), params, "RK4", 3);
  const StateDerivative k4 = stage(advance(s, k3, dt), params, "RK4", 4);
  const SystemState next{
      s.x + dt / 6 * (k1.dx + 2 * k2.dx + 2 * k3.dx + k4.dx),
      s.n + dt / 6 * (k1.dn + 2 * k2.dn + 2 * k3.dn + k4.dn),
      s.y + dt / 6 * (k1.dy + 2 * k2.dy + 2 * k3.dy + k4.dy)};
  return project_to_cube(next, projection_tolerance);
}

SystemState euler_step(const SystemState& s, const ModelParams& params,
                       double dt, double projection_tolerance) {
  const StateDerivative k = stage(s, params, "Euler", 1);
  return project_to_cube(advance(s, k, dt), projection_tolerance);
}

Trajectory simulate(const Scenario& scenario, Scheme scheme) {
  validate(scenario);
  const ModelParams& params = scenario.model;
  const IntegratorSettings& cfg = scenario.settings;

  const auto steps =
      std::max<long long>(1, std::llround(cfg.t_max / cfg.dt));
  const auto hold_steps =
      static_cast<long long>(std::ceil(cfg.hold_time / cfg.dt - 1e-9));

  Trajectory traj;
  auto record = [&](long long step, const SystemState& s) {
    traj.times.push_back(static_cast<double>(step) * cfg.dt);
    traj.states.push_back(s);
    traj.derived.push_back(derive(s, params));
  };

  SystemState state = scenario.initial;
  long long step = 0;
  long long last_recorded = 0;
  record(0, state);

  // First step of the current run of sub-threshold derivative norms.
  long long calm_since = rhs_norm(state, params) < cfg.eps_stationary ? 0 : -1;
  if (calm_since == 0 && hold_steps == 0) {
    traj.converged = true;
    traj.t_converged = 0.0;
  }

  while (!traj.converged && step < steps) {
    try {
      state = scheme == Scheme::kRk4
                  ? rk4_step(state, params, cfg.dt, cfg.projection_tolerance)
                  : euler_step(state, params, cfg.dt, cfg.projection_tolerance);
    } catch (const IntegrationError& e) {
      // `state` still holds the last valid point.
      if (last_recorded != step) record(step, state);
      traj.terminal = state;
      throw e.with_context(static_cast<double>(step) * cfg.dt,
                           std::move(traj));
    }
    ++step;

    if (rhs_norm(state, params) < cfg.eps_stationary) {
      if (calm_since < 0) calm_since = step;
      if (step - calm_since >= hold_steps) {
        traj.converged = true;
        traj.t_converged = static_cast<double>(step) * cfg.dt;
      }
    } else {
      calm_since = -1;
    }

    if (step % cfg.record_every == 0 || traj.converged || step == steps) {
      record(step, state);
      last_recorded = step;
    }
  }
  traj.terminal = state;
  return traj;
}

}  // namespace ecogame
