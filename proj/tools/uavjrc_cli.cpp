// uavjrc: run the DJRC placement solver and its baselines from the shell.
//
//   uavjrc validate --config scenario.json
//   uavjrc run --config scenario.json --trace-out trace.csv --metrics-out metrics.csv
//   uavjrc sweep --config scenario.json --sweep sweep.json --out records.csv --summary-out summary.csv
//
// Exit codes: 0 success, 1 config error, 2 runtime failure.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "uavjrc/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct GlobalFlags {
  std::optional<std::uint64_t> seed;
  std::string method = "djrc";
  std::optional<std::string> interference;
};

uavjrc::ScenarioConfig load_config(const std::string& path, const GlobalFlags& flags) {
  uavjrc::ScenarioConfig cfg = uavjrc::load_scenario_file(path);
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.interference) {
    try {
      cfg.interference = uavjrc::interference_from_string(*flags.interference);
    } catch (const std::exception& e) {
      throw uavjrc::ConfigError(std::vector<uavjrc::ConfigIssue>{{"--interference", e.what()}});
    }
  }
  cfg = uavjrc::materialize_targets(std::move(cfg));
  return uavjrc::validate_config(std::move(cfg));
}

void print_issues(const uavjrc::ConfigError& e) {
  std::cerr << "config error:\n";
  for (const auto& issue : e.issues()) std::cerr << "  " << issue.field << ": " << issue.message << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UAV swarm joint radar-communication placement"};
  app.require_subcommand(1);

  GlobalFlags flags;
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "Override the config seed")->capture_default_str();
  app.add_option("--method", flags.method, "djrc|froc|orfc")
      ->check(CLI::IsMember({"djrc", "froc", "orfc"}))
      ->capture_default_str();
  std::string interference;
  auto* interference_opt =
      app.add_option("--interference", interference, "full|none")->check(CLI::IsMember({"full", "none"}));

  std::string config_path;
  auto* validate = app.add_subcommand("validate", "Check a scenario file and list every problem");
  validate->add_option("--config", config_path)->required();

  std::string trace_out;
  std::string metrics_out;
  auto* run = app.add_subcommand("run", "Solve one scenario");
  run->add_option("--config", config_path)->required();
  run->add_option("--trace-out", trace_out);
  run->add_option("--metrics-out", metrics_out);

  std::string sweep_path;
  std::string records_out;
  std::string summary_out;
  bool wall_time = false;
  std::size_t threads = 0;
  auto* sweep = app.add_subcommand("sweep", "Compare methods over a target-count or power sweep");
  sweep->add_option("--config", config_path)->required();
  sweep->add_option("--sweep", sweep_path)->required();
  sweep->add_option("--out", records_out)->required();
  sweep->add_option("--summary-out", summary_out);
  sweep->add_option("--threads", threads, "Worker threads (overrides the sweep file)");
  sweep->add_flag("--wall-time", wall_time, "Record measured wall time (output no longer reproducible)");

  for (auto* sub : {validate, run, sweep}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }
  if (*seed_opt) flags.seed = seed_value;
  if (*interference_opt) flags.interference = interference;

  uavjrc::ScenarioConfig cfg;
  try {
    cfg = load_config(config_path, flags);
  } catch (const uavjrc::ConfigError& e) {
    print_issues(e);
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  if (validate->parsed()) {
    std::cout << "ok: " << cfg.targets.size() << " targets\n";
    return kExitOk;
  }

  try {
    if (run->parsed()) {
      const auto method = uavjrc::method_from_string(flags.method);
      const auto start = std::chrono::steady_clock::now();
      const uavjrc::RunResult result = uavjrc::run_method(method, cfg);
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

      const auto record = uavjrc::summarize_run(method, "single", 0.0, 0, result, elapsed.count());
      std::cout << flags.method << ": converged=" << (result.converged ? "true" : "false")
                << " iterations=" << result.iterations_used
                << " eta_total=" << uavjrc::format_double(record.eta_total)
                << " rate_total_bps=" << uavjrc::format_double(record.rate_total) << "\n";
      if (!trace_out.empty()) uavjrc::write_text_file(trace_out, uavjrc::trace_csv(result));
      if (!metrics_out.empty()) uavjrc::write_text_file(metrics_out, uavjrc::metrics_csv({record}));
      return kExitOk;
    }

    uavjrc::SweepSpec spec;
    try {
      spec = uavjrc::load_sweep_file(sweep_path);
    } catch (const uavjrc::IoError&) {
      throw;
    } catch (const std::exception& e) {
      std::cerr << "sweep config error: " << e.what() << "\n";
      return kExitConfig;
    }
    if (flags.seed) spec.seed = *flags.seed;
    if (threads > 0) spec.threads = threads;
    spec.record_wall_time = wall_time;

    const auto records = uavjrc::run_sweep(cfg, spec);
    uavjrc::write_text_file(records_out, uavjrc::metrics_csv(records));
    if (!summary_out.empty()) uavjrc::write_text_file(summary_out, uavjrc::summary_csv(records));
    std::cout << "wrote " << records.size() << " records to " << records_out << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
