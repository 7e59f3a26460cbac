#include "uavjrc/solver.hpp"

#include <algorithm>
#include <cmath>

namespace uavjrc {

namespace {

// Rate of UAV m when its state is replaced by `candidate`; every other UAV
// keeps its snapshot state.
double rate_with(std::size_t m, const UavState& candidate, const SwarmState& snapshot,
                 const ScenarioConfig& cfg) {
  const std::size_t count = snapshot.uavs.size();
  std::vector<double> p_comm(count);
  std::vector<double> gains(count);
  for (std::size_t k = 0; k < count; ++k) {
    const UavState& u = k == m ? candidate : snapshot.uavs[k];
    p_comm[k] = comm_power(cfg, u.gamma);
    gains[k] = channel_gain(distance3d(u.pos, snapshot.fbs), cfg.comm);
  }
  return data_rate(sinr(m, p_comm, gains, cfg.comm, cfg.radar.tx_gain_gT, cfg.interference), cfg.comm);
}

double snr_of(const UavState& u, const ScenarioConfig& cfg) {
  return radar_snr(radar_power(cfg, u.gamma), distance3d(u.pos, cfg.targets[u.target_index]), cfg.radar);
}

bool within_range(const UavState& u, const ScenarioConfig& cfg) {
  const double p_r = radar_power(cfg, u.gamma);
  if (!(p_r > 0.0)) return false;
  const double d = distance3d(u.pos, cfg.targets[u.target_index]);
  return d <= radar_range(p_r, cfg.radar) * (1.0 + kRangeRelTol);
}

bool inside_box(const Position3D& p, const FlightBox& b) {
  return p.x >= b.x_min && p.x <= b.x_max && p.y >= b.y_min && p.y <= b.y_max && p.h > 0.0 &&
         p.h <= b.h_max;
}

// Rejects positions that come (or stay) closer than d_g to a snapshot UAV
// while shrinking that gap.
bool keeps_separation(std::size_t m, const Position3D& next, const SwarmState& snapshot,
                      const ScenarioConfig& cfg) {
  const Position3D& now = snapshot.uavs[m].pos;
  for (std::size_t k = 0; k < snapshot.uavs.size(); ++k) {
    if (k == m) continue;
    const Position3D& other = snapshot.uavs[k].pos;
    const double after = distance3d(next, other);
    if (after < cfg.safe_distance_dg && after < distance3d(now, other)) return false;
  }
  return true;
}

double norm3(const std::array<double, 3>& g) { return std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]); }

}  // namespace

std::string to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::IncreasePower:
      return "a1";
    case ActionKind::MoveTowardFbs:
      return "a2";
    case ActionKind::Hold:
      return "hold";
  }
  return "?";
}

double reward(const LinkSample& before, const LinkSample& after) {
  double rate_term = 0.0;
  if (before.rate > 0.0) {
    rate_term = (after.rate - before.rate) / before.rate;
  } else if (after.rate > 0.0) {
    return kBootstrapReward;
  }
  const double snr_term = before.snr > 0.0 ? (before.snr - after.snr) / before.snr : 0.0;
  return rate_term - snr_term;
}

ActionEvaluation evaluate_action(std::size_t m, ActionKind kind, const SwarmState& snapshot,
                                 const ScenarioConfig& cfg) {
  const UavState& current = snapshot.uavs.at(m);
  ActionEvaluation eval;
  eval.hypothetical = current;

  switch (kind) {
    case ActionKind::IncreasePower:
      if (current.gamma >= 1.0) return eval;
      eval.hypothetical.gamma = std::min(current.gamma + cfg.algo.delta_gamma, 1.0);
      break;
    case ActionKind::MoveTowardFbs: {
      const Position3D to_fbs = snapshot.fbs - current.pos;
      const double gap = norm(to_fbs);
      // Direction undefined at the FBS; a step longer than the gap would pass it.
      if (!(gap > cfg.algo.delta_r)) return eval;
      eval.hypothetical.pos = current.pos + (cfg.algo.delta_r / gap) * to_fbs;
      break;
    }
    case ActionKind::Hold:
      eval.feasible = true;
      return eval;
  }

  const UavState& next = eval.hypothetical;
  eval.feasible = next.gamma >= 0.0 && next.gamma <= 1.0 && within_range(next, cfg) &&
                  keeps_separation(m, next.pos, snapshot, cfg);
  if (next.pos != current.pos) {
    eval.feasible = eval.feasible && inside_box(next.pos, cfg.bounds) && next.pos.h < snapshot.fbs.h;
  }
  if (!eval.feasible) return eval;

  const LinkSample before{rate_with(m, current, snapshot, cfg), snr_of(current, cfg)};
  const LinkSample after{rate_with(m, next, snapshot, cfg), snr_of(next, cfg)};
  eval.predicted_reward = reward(before, after);
  return eval;
}

UavStep uav_step(std::size_t m, const SwarmState& snapshot, const ScenarioConfig& cfg) {
  const UavState& current = snapshot.uavs.at(m);
  if (within_range(current, cfg) && rate_with(m, current, snapshot, cfg) >= cfg.comm.rate_min_Rmin) {
    return {UavAction{ActionKind::Hold, 0.0, false}, current};
  }

  const ActionEvaluation power = evaluate_action(m, ActionKind::IncreasePower, snapshot, cfg);
  const ActionEvaluation move = evaluate_action(m, ActionKind::MoveTowardFbs, snapshot, cfg);

  if (power.feasible && (!move.feasible || power.predicted_reward >= move.predicted_reward)) {
    return {UavAction{ActionKind::IncreasePower, power.predicted_reward, false}, power.hypothetical};
  }
  if (move.feasible) {
    return {UavAction{ActionKind::MoveTowardFbs, move.predicted_reward, false}, move.hypothetical};
  }
  return {UavAction{ActionKind::Hold, 0.0, true}, current};
}

double fbs_objective(const Position3D& fbs, const SwarmState& snapshot, const ScenarioConfig& cfg) {
  return order_free_sum(uplink_rates(snapshot, fbs, cfg));
}

std::array<double, 3> fbs_gradient(const Position3D& fbs, const SwarmState& snapshot,
                                   const ScenarioConfig& cfg) {
  const FlightBox& b = cfg.bounds;
  const double step = cfg.algo.fd_step;
  const std::array<double, 3> lo{b.x_min, b.y_min, 0.0};
  const std::array<double, 3> hi{b.x_max, b.y_max, b.h_max};
  const std::array<double, 3> at{fbs.x, fbs.y, fbs.h};

  std::array<double, 3> grad{};
  for (std::size_t axis = 0; axis < 3; ++axis) {
    const double up = std::min(at[axis] + step, hi[axis]);
    const double down = std::max(at[axis] - step, lo[axis]);
    if (!(up > down)) continue;
    Position3D plus = fbs;
    Position3D minus = fbs;
    double* plus_coord[3] = {&plus.x, &plus.y, &plus.h};
    double* minus_coord[3] = {&minus.x, &minus.y, &minus.h};
    *plus_coord[axis] = up;
    *minus_coord[axis] = down;
    grad[axis] = (fbs_objective(plus, snapshot, cfg) - fbs_objective(minus, snapshot, cfg)) / (up - down);
  }
  return grad;
}

double fbs_altitude_floor(const SwarmState& snapshot, const ScenarioConfig& cfg) {
  double highest = 0.0;
  for (const auto& u : snapshot.uavs) highest = std::max(highest, u.pos.h);
  return std::min(highest + cfg.fbs_clearance_dh, cfg.bounds.h_max);
}

Position3D project_fbs(const Position3D& p, const SwarmState& snapshot, const ScenarioConfig& cfg) {
  const FlightBox& b = cfg.bounds;
  return {std::clamp(p.x, b.x_min, b.x_max), std::clamp(p.y, b.y_min, b.y_max),
          std::clamp(p.h, fbs_altitude_floor(snapshot, cfg), b.h_max)};
}

FbsOptimization fbs_optimize_detailed(const SwarmState& snapshot, const ScenarioConfig& cfg) {
  const AlgoParams& algo = cfg.algo;
  double highest = 0.0;
  for (const auto& u : snapshot.uavs) highest = std::max(highest, u.pos.h);

  // The incoming position is kept as the first iterate whenever it is legal
  // (inside the box and above every UAV), even if it sits below the clearance.
  const Position3D start = snapshot.fbs;
  const bool start_legal = inside_box(start, cfg.bounds) && start.h > highest;

  FbsOptimization out;
  out.position = start_legal ? start : project_fbs(start, snapshot, cfg);
  out.objective = fbs_objective(out.position, snapshot, cfg);
  out.start_objective = out.objective;

  auto gradient_small = [&](double grad_norm, double value) {
    return grad_norm == 0.0 || grad_norm < algo.grad_tolerance_eps * std::abs(value);
  };

  auto grad = fbs_gradient(out.position, snapshot, cfg);
  double grad_norm = norm3(grad);
  if (gradient_small(grad_norm, out.objective)) {
    out.converged = true;
    return out;
  }

  // Step length is capped at the initial one; backtracking halves both.
  double max_step = algo.learning_rate_alpha * cfg.bounds.diagonal();
  double alpha = max_step / grad_norm;
  for (std::size_t k = 0; k < algo.max_fbs_iters_TF; ++k) {
    ++out.iterations;
    const double scale = std::min(alpha, max_step / grad_norm);
    const Position3D step{scale * grad[0], scale * grad[1], scale * grad[2]};
    const Position3D candidate = project_fbs(out.position + step, snapshot, cfg);
    if (distance3d(candidate, out.position) < 1e-9) {
      // Projected gradient vanishes: stationary on the feasible boundary.
      out.converged = true;
      break;
    }
    const double value = fbs_objective(candidate, snapshot, cfg);
    if (value < out.objective) {
      alpha *= 0.5;
      max_step *= 0.5;
      continue;
    }
    out.position = candidate;
    out.objective = value;
    grad = fbs_gradient(out.position, snapshot, cfg);
    grad_norm = norm3(grad);
    if (gradient_small(grad_norm, out.objective)) {
      out.converged = true;
      break;
    }
  }
  return out;
}

Position3D fbs_optimize(const SwarmState& snapshot, const ScenarioConfig& cfg) {
  return fbs_optimize_detailed(snapshot, cfg).position;
}

IterationTrace make_trace(const SwarmState& s, const ScenarioConfig& cfg, std::vector<UavAction> actions) {
  const LinkMetrics links = evaluate_links(s, cfg);
  IterationTrace row;
  row.iteration = s.iteration;
  row.eta_total = order_free_sum(links.snr);
  row.rate_total = order_free_sum(links.rate);
  row.fbs = s.fbs;
  for (const auto& u : s.uavs) {
    row.uav_positions.push_back(u.pos);
    row.gammas.push_back(u.gamma);
  }
  row.actions_taken = std::move(actions);
  row.fbs_objective_before = row.rate_total;
  row.fbs_objective_after = row.rate_total;
  return row;
}

double weighted_objective(const SwarmState& s, const ScenarioConfig& cfg) {
  const LinkMetrics links = evaluate_links(s, cfg);
  std::vector<double> terms;
  terms.reserve(s.uavs.size());
  for (std::size_t m = 0; m < s.uavs.size(); ++m) {
    terms.push_back(cfg.weights_w.at(s.uavs[m].target_index) * links.snr[m]);
  }
  return order_free_sum(terms);
}

RunResult djrc_run(const ScenarioConfig& cfg) {
  RunResult result;
  SwarmState state = initial_swarm(cfg);
  const std::size_t count = state.uavs.size();

  result.trace.push_back(make_trace(state, cfg, std::vector<UavAction>(count)));
  result.converged = check_constraints(state, cfg).all_satisfied;

  for (std::size_t t = 1; t <= cfg.algo.max_outer_iters_Tm && !result.converged; ++t) {
    const SwarmState snapshot = state;

    std::vector<UavAction> actions(count);
    for (std::size_t m = 0; m < count; ++m) {
      UavStep step = uav_step(m, snapshot, cfg);
      actions[m] = step.action;
      state.uavs[m] = step.next;
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
    result.converged = check_constraints(state, cfg).all_satisfied;

    // Fixed point: no UAV changed and the FBS stayed put.
    if (!result.converged && state == SwarmState{snapshot.uavs, snapshot.fbs, t}) break;
  }

  result.final = state;
  result.objective = weighted_objective(state, cfg);
  return result;
}

}  // namespace uavjrc
