#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "uavjrc/physics.hpp"

namespace uavjrc {

struct FlightBox {
  double x_min = 0.0;
  double x_max = 1000.0;
  double y_min = 0.0;
  double y_max = 1000.0;
  double h_max = 100.0;

  double diagonal() const;
};

struct AlgoParams {
  double delta_gamma = 0.01;
  double delta_r = 2.0;
  // Initial FBS step length as a fraction of the flight-box diagonal.
  double learning_rate_alpha = 1e-3;
  // FBS ascent stops once |grad f| < eps * |f| (per meter).
  double grad_tolerance_eps = 1e-3;
  double fd_step = 0.5;
  std::size_t max_outer_iters_Tm = 500;
  std::size_t max_fbs_iters_TF = 100;
};

struct ScenarioConfig {
  std::vector<Position3D> targets;
  FlightBox bounds;
  double total_power_pt = 30.0;
  double safe_distance_dg = 40.0;
  double fbs_clearance_dh = 10.0;
  // Empty means uniform; filled in by validate_config.
  std::vector<double> weights_w;
  RadarParams radar;
  CommParams comm;
  AlgoParams algo;
  InterferenceMode interference = InterferenceMode::Full;
  double baseline_gamma = 0.5;
  std::uint64_t seed = 1;
  // When > 0 and `targets` is empty, a layout of this many targets is drawn from `seed`.
  std::size_t num_random_targets = 0;
};

struct ConfigIssue {
  std::string field;
  std::string message;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

class InfeasibleScenario : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct UavState {
  Position3D pos;
  double gamma = 0.0;  // share of total power given to communication
  std::size_t target_index = 0;

  bool operator==(const UavState&) const = default;
};

struct SwarmState {
  std::vector<UavState> uavs;
  Position3D fbs;
  std::size_t iteration = 0;

  bool operator==(const SwarmState&) const = default;
};

enum class ConstraintId { C1, C2, C3, C4, C5, C6, C7, C8 };

std::string to_string(ConstraintId id);

// One evaluated constraint row. Slack >= 0 means satisfied; the unit is the
// constraint's own (meters, bit/s, or dimensionless).
struct ConstraintCheck {
  std::size_t uav = 0;  // FBS rows use uav = npos
  bool pass = true;
  double slack = 0.0;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

struct ConstraintEntry {
  ConstraintId id;
  std::vector<ConstraintCheck> checks;
  bool pass() const;
};

struct ConstraintReport {
  std::vector<ConstraintEntry> entries;  // C1..C8 in order
  bool all_satisfied = true;

  const ConstraintEntry& entry(ConstraintId id) const;
};

// Relative slack allowed on C1 so that placements exactly on the radar-range
// boundary pass despite rounding.
inline constexpr double kRangeRelTol = 1e-9;

/// Table 1 constants around the given targets; everything else at its default.
ScenarioConfig table1_config(std::vector<Position3D> targets);

std::vector<ConfigIssue> find_config_issues(const ScenarioConfig& raw);

/// Returns the normalized config (uniform weights filled in) or throws
/// ConfigError carrying every violation found.
ScenarioConfig validate_config(ScenarioConfig raw);

/// Parses the JSON scenario format. Unknown keys are rejected. The radar
/// noise figure is read in dB (`noise_figure_F_dB`) and stored linear.
/// The result is not yet validated.
ScenarioConfig scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const ScenarioConfig& cfg);
ScenarioConfig load_scenario_file(const std::string& path);

// Identity mapping: UAV m watches target m.
std::vector<std::pair<std::size_t, std::size_t>> assign_targets(const ScenarioConfig& cfg);

SwarmState initial_swarm(const ScenarioConfig& cfg);

// Power actually radiated by the radar / the uplink for a given split.
inline double radar_power(const ScenarioConfig& cfg, double gamma) {
  return (1.0 - gamma) * cfg.total_power_pt;
}
inline double comm_power(const ScenarioConfig& cfg, double gamma) {
  return gamma * cfg.total_power_pt;
}

// Per-UAV link metrics of a state.
struct LinkMetrics {
  std::vector<double> snr;   // radar SNR to own target
  std::vector<double> rate;  // uplink rate, bit/s
};

LinkMetrics evaluate_links(const SwarmState& s, const ScenarioConfig& cfg);

// Uplink rate of every UAV if the FBS sat at `fbs`.
std::vector<double> uplink_rates(const SwarmState& s, const Position3D& fbs,
                                 const ScenarioConfig& cfg);

ConstraintReport check_constraints(const SwarmState& s, const ScenarioConfig& cfg);

}  // namespace uavjrc
