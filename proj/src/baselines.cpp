#include "uavjrc/baselines.hpp"

#include <algorithm>
#include <cmath>

namespace uavjrc {

namespace {

SwarmState fixed_power_start(const ScenarioConfig& cfg) {
  SwarmState s = initial_swarm(cfg);
  for (auto& u : s.uavs) u.gamma = cfg.baseline_gamma;
  return s;
}

// FROC only answers for rate and separation; ORFC for everything.
RunResult finish(RunResult result, SwarmState state, const ScenarioConfig& cfg, bool rate_and_spacing_only) {
  const ConstraintReport report = check_constraints(state, cfg);
  result.converged = rate_and_spacing_only
                         ? report.entry(ConstraintId::C2).pass() && report.entry(ConstraintId::C3).pass()
                         : report.all_satisfied;
  result.objective = weighted_objective(state, cfg);
  result.final = std::move(state);
  return result;
}

}  // namespace

RayPlacement place_on_ray(const Position3D& target, const Position3D& fbs, double range,
                          const ScenarioConfig& cfg) {
  const FlightBox& b = cfg.bounds;
  const Position3D ray = fbs - target;
  const double length = norm(ray);
  if (!(length > 0.0)) throw DegenerateGeometry("place_on_ray: FBS coincides with the target");

  RayPlacement out;
  out.distance = range;
  out.pos = target + (range / length) * ray;

  // Too high for the FBS to keep its clearance: slide down the sphere to the
  // ceiling, staying on the FBS side of the target.
  const double ceiling = b.h_max - cfg.fbs_clearance_dh;
  if (out.pos.h > ceiling) {
    const double horizontal = std::hypot(ray.x, ray.y);
    const double ux = horizontal > 0.0 ? ray.x / horizontal : 1.0;
    const double uy = horizontal > 0.0 ? ray.y / horizontal : 0.0;
    const double rho = std::sqrt(std::max(range * range - ceiling * ceiling, 0.0));
    out.pos = {target.x + rho * ux, target.y + rho * uy, ceiling};
  }

  const Position3D boxed{std::clamp(out.pos.x, b.x_min, b.x_max), std::clamp(out.pos.y, b.y_min, b.y_max),
                         out.pos.h};
  if (boxed != out.pos) {
    out.pos = boxed;
    out.distance = distance3d(boxed, target);
    out.clamped = true;
  }
  return out;
}

std::vector<RayPlacement> froc_placements(const SwarmState& s, const ScenarioConfig& cfg) {
  const double range = radar_range(radar_power(cfg, cfg.baseline_gamma), cfg.radar);
  std::vector<RayPlacement> placed;
  placed.reserve(s.uavs.size());

  for (std::size_t m = 0; m < s.uavs.size(); ++m) {
    const Position3D& target = cfg.targets[s.uavs[m].target_index];
    RayPlacement p = place_on_ray(target, s.fbs, range, cfg);
    const Position3D unit = (1.0 / norm(p.pos - target)) * (p.pos - target);

    auto collides = [&] {
      return std::any_of(placed.begin(), placed.end(), [&](const RayPlacement& q) {
        return distance3d(p.pos, q.pos) < cfg.safe_distance_dg;
      });
    };
    while (collides() && p.distance > cfg.algo.delta_r) {
      p.distance -= cfg.algo.delta_r;
      p.pos = target + p.distance * unit;
      p.clamped = true;
    }
    placed.push_back(p);
  }
  return placed;
}

RunResult froc_solve(const ScenarioConfig& cfg) {
  RunResult result;
  SwarmState state = fixed_power_start(cfg);
  const std::size_t count = state.uavs.size();
  result.trace.push_back(make_trace(state, cfg, std::vector<UavAction>(count)));

  for (std::size_t t = 1; t <= cfg.algo.max_outer_iters_Tm; ++t) {
    const auto placed = froc_placements(state, cfg);
    double moved = 0.0;
    for (std::size_t m = 0; m < count; ++m) {
      moved = std::max(moved, distance3d(placed[m].pos, state.uavs[m].pos));
      state.uavs[m].pos = placed[m].pos;
    }

    const FbsOptimization fbs = fbs_optimize_detailed(state, cfg);
    state.fbs = fbs.position;
    state.iteration = t;

    IterationTrace row = make_trace(state, cfg, std::vector<UavAction>(count));
    row.fbs_objective_before = fbs.start_objective;
    row.fbs_objective_after = fbs.objective;
    row.fbs_converged = fbs.converged;
    result.trace.push_back(std::move(row));
    result.iterations_used = t;

    if (moved < kFrocSettleTolerance) break;
  }
  return finish(std::move(result), std::move(state), cfg, true);
}

RunResult orfc_solve(const ScenarioConfig& cfg) {
  RunResult result;
  SwarmState state = fixed_power_start(cfg);
  const std::size_t count = state.uavs.size();
  result.trace.push_back(make_trace(state, cfg, std::vector<UavAction>(count)));

  for (std::size_t t = 1; t <= cfg.algo.max_outer_iters_Tm; ++t) {
    const SwarmState snapshot = state;
    const auto rates = uplink_rates(snapshot, snapshot.fbs, cfg);
    if (std::all_of(rates.begin(), rates.end(), [&](double r) { return r >= cfg.comm.rate_min_Rmin; })) {
      break;
    }

    std::vector<UavAction> actions(count);
    for (std::size_t m = 0; m < count; ++m) {
      if (rates[m] >= cfg.comm.rate_min_Rmin) continue;
      const ActionEvaluation move = evaluate_action(m, ActionKind::MoveTowardFbs, snapshot, cfg);
      if (move.feasible) {
        actions[m] = {ActionKind::MoveTowardFbs, move.predicted_reward, false};
        state.uavs[m] = move.hypothetical;
      } else {
        actions[m].stalled = true;
      }
    }

    const FbsOptimization fbs = fbs_optimize_detailed(state, cfg);
    state.fbs = fbs.position;
    state.iteration = t;

    IterationTrace row = make_trace(state, cfg, std::move(actions));
    row.fbs_objective_before = fbs.start_objective;
    row.fbs_objective_after = fbs.objective;
    row.fbs_converged = fbs.converged;
    result.trace.push_back(std::move(row));
    result.iterations_used = t;

    if (state == SwarmState{snapshot.uavs, snapshot.fbs, t}) break;
  }
  return finish(std::move(result), std::move(state), cfg, false);
}

}  // namespace uavjrc
