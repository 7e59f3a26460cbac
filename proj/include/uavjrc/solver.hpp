#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "uavjrc/scenario.hpp"

namespace uavjrc {

enum class ActionKind { IncreasePower, MoveTowardFbs, Hold };

std::string to_string(ActionKind kind);

struct UavAction {
  ActionKind kind = ActionKind::Hold;
  double predicted_reward = 0.0;
  // Hold because neither candidate action was feasible.
  bool stalled = false;

  bool operator==(const UavAction&) const = default;
};

struct IterationTrace {
  std::size_t iteration = 0;
  double eta_total = 0.0;   // sum of radar SNRs
  double rate_total = 0.0;  // sum of uplink rates, bit/s
  std::vector<Position3D> uav_positions;
  std::vector<double> gammas;
  Position3D fbs;
  std::vector<UavAction> actions_taken;
  // Sum rate with the committed UAVs, before and after the FBS update.
  double fbs_objective_before = 0.0;
  double fbs_objective_after = 0.0;
  bool fbs_converged = true;

  bool operator==(const IterationTrace&) const = default;
};

struct RunResult {
  SwarmState final;
  bool converged = false;
  std::size_t iterations_used = 0;
  std::vector<IterationTrace> trace;
  double objective = 0.0;  // weighted SNR sum
};

// Reward returned when an action lifts the rate off zero.
inline constexpr double kBootstrapReward = 1e9;

struct LinkSample {
  double rate = 0.0;
  double snr = 0.0;
};

/// Relative rate gain minus relative SNR loss of moving from `before` to
/// `after`. A zero starting rate turns any positive rate into
/// kBootstrapReward; zero to zero contributes nothing.
double reward(const LinkSample& before, const LinkSample& after);

struct ActionEvaluation {
  bool feasible = false;
  double predicted_reward = 0.0;
  UavState hypothetical;
};

/// One-step lookahead for UAV `m`: apply `kind` to a copy of its state and
/// score it against the snapshot, with every other UAV left where the
/// snapshot has it.
ActionEvaluation evaluate_action(std::size_t m, ActionKind kind, const SwarmState& snapshot,
                                 const ScenarioConfig& cfg);

struct UavStep {
  UavAction action;
  UavState next;
};

UavStep uav_step(std::size_t m, const SwarmState& snapshot, const ScenarioConfig& cfg);

// Sum uplink rate (bit/s) with the FBS moved to `fbs`.
double fbs_objective(const Position3D& fbs, const SwarmState& snapshot, const ScenarioConfig& cfg);

// Central differences with per-axis step fd_step; probes stop at the box faces.
std::array<double, 3> fbs_gradient(const Position3D& fbs, const SwarmState& snapshot,
                                   const ScenarioConfig& cfg);

// Lowest FBS altitude that keeps the clearance above every UAV (capped at h_max).
double fbs_altitude_floor(const SwarmState& snapshot, const ScenarioConfig& cfg);

Position3D project_fbs(const Position3D& p, const SwarmState& snapshot, const ScenarioConfig& cfg);

struct FbsOptimization {
  Position3D position;
  double objective = 0.0;
  // Objective at the first iterate (the start, projected if it was illegal).
  double start_objective = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Projected gradient ascent on the sum rate, starting at snapshot.fbs.
/// Never returns a point worse than the starting one.
FbsOptimization fbs_optimize_detailed(const SwarmState& snapshot, const ScenarioConfig& cfg);

Position3D fbs_optimize(const SwarmState& snapshot, const ScenarioConfig& cfg);

// Builds the trace row for a state.
IterationTrace make_trace(const SwarmState& s, const ScenarioConfig& cfg, std::vector<UavAction> actions);

double weighted_objective(const SwarmState& s, const ScenarioConfig& cfg);

RunResult djrc_run(const ScenarioConfig& cfg);

}  // namespace uavjrc
