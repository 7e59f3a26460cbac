#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "uavjrc/baselines.hpp"

namespace uavjrc {

enum class Method { Djrc, Froc, Orfc };
enum class SweepKind { TargetCount, TotalPower };

std::string to_string(Method method);
Method method_from_string(const std::string& name);
std::string to_string(SweepKind kind);
SweepKind sweep_kind_from_string(const std::string& name);

class PackingInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Side of the default target zone (meters). One FBS covers roughly a 230 m
// radius at R_min = 0.1 Mbit/s with the default link budget, so layouts
// spread over the whole 1 km box are mostly unservable.
inline constexpr double kDefaultZoneSide = 300.0;

struct SweepSpec {
  SweepKind kind = SweepKind::TargetCount;
  std::vector<double> values;  // target counts or total power in W
  std::vector<Method> methods{Method::Djrc, Method::Froc, Method::Orfc};
  std::size_t trials_per_point = 5;
  std::uint64_t seed = 1;
  // Layout size for power sweeps.
  std::size_t num_targets = 10;
  // Minimum horizontal target spacing; 0 means 2 * d_g.
  double min_separation = 0.0;
  // Square deployment zone centered in the flight box that targets are drawn
  // from; 0 means the whole box.
  double zone_side = kDefaultZoneSide;
  std::size_t threads = 1;
  // Wall time is only measured on request so that sweep output stays reproducible.
  bool record_wall_time = false;
};

struct MetricsRecord {
  Method method = Method::Djrc;
  std::string sweep_kind;
  double sweep_value = 0.0;
  std::size_t trial = 0;
  double eta_total = 0.0;
  double rate_total = 0.0;
  bool converged = false;
  std::size_t iterations_used = 0;
  double wall_time = 0.0;  // seconds
};

inline constexpr std::size_t kRejectionBudget = 100000;

/// Uniform target layout with pairwise horizontal spacing >= min_separation.
/// Deterministic in `seed`; throws PackingInfeasible when the rejection
/// budget runs out.
std::vector<Position3D> generate_targets(std::size_t n, const FlightBox& bounds, double min_separation,
                                         std::uint64_t seed);

// Fills in a random layout when the config only asks for a target count.
ScenarioConfig materialize_targets(ScenarioConfig cfg);

RunResult run_method(Method method, const ScenarioConfig& cfg);

SweepSpec sweep_from_json(const nlohmann::json& doc);
SweepSpec load_sweep_file(const std::string& path);
void validate_sweep(const SweepSpec& spec);

// Config for one sweep cell; the layout depends on (value, trial) for target
// sweeps and on the trial alone for power sweeps.
FlightBox target_zone(const FlightBox& bounds, double zone_side);

ScenarioConfig sweep_cell_config(const ScenarioConfig& base, const SweepSpec& spec, std::size_t value_index,
                                 std::size_t trial);

/// Runs every (value, trial, method) cell. Methods within a cell share the
/// layout. Records come back sorted by (method, value, trial) regardless of
/// thread count.
std::vector<MetricsRecord> run_sweep(const ScenarioConfig& base, const SweepSpec& spec);

MetricsRecord summarize_run(Method method, const std::string& sweep_kind, double sweep_value,
                            std::size_t trial, const RunResult& run, double wall_time);

std::string format_double(double v);
std::string metrics_csv(const std::vector<MetricsRecord>& records);
std::string trace_csv(const RunResult& run);
std::string summary_csv(const std::vector<MetricsRecord>& records);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace uavjrc
