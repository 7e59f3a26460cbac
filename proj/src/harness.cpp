#include "uavjrc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

namespace uavjrc {

namespace {

using nlohmann::json;

constexpr std::uint64_t kTargetCountStream = 0x7461726765747321ULL;
constexpr std::uint64_t kTotalPowerStream = 0x706f776572212121ULL;

std::mt19937_64 seeded_engine(std::initializer_list<std::uint64_t> parts) {
  std::vector<std::uint32_t> words;
  for (std::uint64_t p : parts) {
    words.push_back(static_cast<std::uint32_t>(p));
    words.push_back(static_cast<std::uint32_t>(p >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

void append_csv_row(std::string& out, std::initializer_list<std::string> cells) {
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out += ',';
    out += c;
    first = false;
  }
  out += '\n';
}

}  // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::Djrc:
      return "djrc";
    case Method::Froc:
      return "froc";
    case Method::Orfc:
      return "orfc";
  }
  return "?";
}

Method method_from_string(const std::string& name) {
  if (name == "djrc") return Method::Djrc;
  if (name == "froc") return Method::Froc;
  if (name == "orfc") return Method::Orfc;
  throw std::invalid_argument("unknown method '" + name + "' (expected djrc|froc|orfc)");
}

std::string to_string(SweepKind kind) {
  return kind == SweepKind::TargetCount ? "target_count" : "total_power";
}

SweepKind sweep_kind_from_string(const std::string& name) {
  if (name == "target_count") return SweepKind::TargetCount;
  if (name == "total_power") return SweepKind::TotalPower;
  throw std::invalid_argument("unknown sweep kind '" + name + "' (expected target_count|total_power)");
}

std::vector<Position3D> generate_targets(std::size_t n, const FlightBox& bounds, double min_separation,
                                         std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("generate_targets: n must be >= 1");
  auto rng = seeded_engine({seed});
  std::uniform_real_distribution<double> xs(bounds.x_min, bounds.x_max);
  std::uniform_real_distribution<double> ys(bounds.y_min, bounds.y_max);

  std::vector<Position3D> targets;
  targets.reserve(n);
  for (std::size_t draws = 0; targets.size() < n; ++draws) {
    if (draws == kRejectionBudget) {
      throw PackingInfeasible("could not place " + std::to_string(n) + " targets " +
                              std::to_string(min_separation) + " m apart within " +
                              std::to_string(kRejectionBudget) + " draws");
    }
    const Position3D p{xs(rng), ys(rng), 0.0};
    const bool clear = std::all_of(targets.begin(), targets.end(), [&](const Position3D& q) {
      return std::hypot(p.x - q.x, p.y - q.y) >= min_separation;
    });
    if (clear) targets.push_back(p);
  }
  return targets;
}

ScenarioConfig materialize_targets(ScenarioConfig cfg) {
  if (cfg.targets.empty() && cfg.num_random_targets > 0) {
    cfg.targets = generate_targets(cfg.num_random_targets, cfg.bounds, 2.0 * cfg.safe_distance_dg, cfg.seed);
    cfg.weights_w.clear();
  }
  return cfg;
}

RunResult run_method(Method method, const ScenarioConfig& cfg) {
  switch (method) {
    case Method::Djrc:
      return djrc_run(cfg);
    case Method::Froc:
      return froc_solve(cfg);
    case Method::Orfc:
      return orfc_solve(cfg);
  }
  throw std::invalid_argument("run_method: unknown method");
}

void validate_sweep(const SweepSpec& spec) {
  if (spec.values.empty()) throw std::invalid_argument("sweep values must be non-empty");
  for (std::size_t i = 1; i < spec.values.size(); ++i) {
    if (!(spec.values[i] > spec.values[i - 1])) {
      throw std::invalid_argument("sweep values must be strictly increasing");
    }
  }
  if (spec.kind == SweepKind::TargetCount) {
    for (double v : spec.values) {
      if (!(v >= 1.0) || v != std::floor(v)) {
        throw std::invalid_argument("target-count sweep values must be positive integers");
      }
    }
  } else {
    for (double v : spec.values) {
      if (!(v > 0.0)) throw std::invalid_argument("total-power sweep values must be > 0");
    }
    if (spec.num_targets == 0) throw std::invalid_argument("num_targets must be >= 1");
  }
  if (spec.methods.empty()) throw std::invalid_argument("sweep needs at least one method");
  if (spec.trials_per_point == 0) throw std::invalid_argument("trials_per_point must be >= 1");
  if (spec.min_separation < 0.0) throw std::invalid_argument("min_separation must be >= 0");
  if (spec.zone_side < 0.0) throw std::invalid_argument("zone_side must be >= 0");
}

SweepSpec sweep_from_json(const json& doc) {
  static const std::set<std::string> known{"kind",      "values",         "methods",   "trials_per_point",
                                           "seed",      "num_targets",    "min_separation", "zone_side", "threads"};
  if (!doc.is_object()) throw std::invalid_argument("sweep file must hold a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (!known.count(key)) throw std::invalid_argument("sweep file: unknown key '" + key + "'");
  }
  SweepSpec spec;
  if (!doc.contains("kind")) throw std::invalid_argument("sweep file: 'kind' is required");
  spec.kind = sweep_kind_from_string(doc.at("kind").get<std::string>());
  if (doc.contains("values")) {
    spec.values = doc.at("values").get<std::vector<double>>();
  } else if (spec.kind == SweepKind::TargetCount) {
    spec.values = {2, 3, 4, 5, 6, 7, 8, 9, 10};
  } else {
    spec.values = {10, 20, 30, 40, 50};
  }
  if (doc.contains("methods")) {
    spec.methods.clear();
    for (const auto& m : doc.at("methods")) spec.methods.push_back(method_from_string(m.get<std::string>()));
  }
  if (doc.contains("trials_per_point")) spec.trials_per_point = doc.at("trials_per_point").get<std::size_t>();
  if (doc.contains("seed")) spec.seed = doc.at("seed").get<std::uint64_t>();
  if (doc.contains("num_targets")) spec.num_targets = doc.at("num_targets").get<std::size_t>();
  if (doc.contains("min_separation")) spec.min_separation = doc.at("min_separation").get<double>();
  if (doc.contains("zone_side")) spec.zone_side = doc.at("zone_side").get<double>();
  if (doc.contains("threads")) spec.threads = doc.at("threads").get<std::size_t>();
  validate_sweep(spec);
  return spec;
}

SweepSpec load_sweep_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open sweep file '" + path + "'");
  return sweep_from_json(json::parse(in));
}

FlightBox target_zone(const FlightBox& bounds, double zone_side) {
  FlightBox zone = bounds;
  if (zone_side <= 0.0) return zone;
  const double cx = 0.5 * (bounds.x_min + bounds.x_max);
  const double cy = 0.5 * (bounds.y_min + bounds.y_max);
  const double half = 0.5 * zone_side;
  zone.x_min = std::max(bounds.x_min, cx - half);
  zone.x_max = std::min(bounds.x_max, cx + half);
  zone.y_min = std::max(bounds.y_min, cy - half);
  zone.y_max = std::min(bounds.y_max, cy + half);
  return zone;
}

ScenarioConfig sweep_cell_config(const ScenarioConfig& base, const SweepSpec& spec, std::size_t value_index,
                                 std::size_t trial) {
  ScenarioConfig cfg = base;
  const double separation = spec.min_separation > 0.0 ? spec.min_separation : 2.0 * base.safe_distance_dg;
  const double value = spec.values.at(value_index);
  std::uint64_t layout_seed = 0;
  std::size_t count = spec.num_targets;
  if (spec.kind == SweepKind::TargetCount) {
    count = static_cast<std::size_t>(value);
    layout_seed = seeded_engine({spec.seed, kTargetCountStream, count, trial})();
  } else {
    cfg.total_power_pt = value;
    layout_seed = seeded_engine({spec.seed, kTotalPowerStream, count, trial})();
  }
  cfg.targets = generate_targets(count, target_zone(base.bounds, spec.zone_side), separation, layout_seed);
  cfg.weights_w.clear();
  cfg.num_random_targets = 0;
  return validate_config(std::move(cfg));
}

MetricsRecord summarize_run(Method method, const std::string& sweep_kind, double sweep_value,
                            std::size_t trial, const RunResult& run, double wall_time) {
  MetricsRecord rec;
  rec.method = method;
  rec.sweep_kind = sweep_kind;
  rec.sweep_value = sweep_value;
  rec.trial = trial;
  if (!run.trace.empty()) {
    rec.eta_total = run.trace.back().eta_total;
    rec.rate_total = run.trace.back().rate_total;
  }
  rec.converged = run.converged;
  rec.iterations_used = run.iterations_used;
  rec.wall_time = wall_time;
  return rec;
}

std::vector<MetricsRecord> run_sweep(const ScenarioConfig& base, const SweepSpec& spec) {
  validate_sweep(spec);
  const std::size_t cells = spec.values.size() * spec.trials_per_point;
  const std::size_t per_cell = spec.methods.size();
  std::vector<MetricsRecord> records(cells * per_cell);
  const std::string kind = to_string(spec.kind);

  auto run_cell = [&](std::size_t cell) {
    const std::size_t value_index = cell / spec.trials_per_point;
    const std::size_t trial = cell % spec.trials_per_point;
    const double value = spec.values[value_index];

    ScenarioConfig cfg;
    bool layout_ok = true;
    try {
      cfg = sweep_cell_config(base, spec, value_index, trial);
    } catch (const std::exception&) {
      layout_ok = false;
    }

    for (std::size_t k = 0; k < per_cell; ++k) {
      const Method method = spec.methods[k];
      MetricsRecord& slot = records[cell * per_cell + k];
      slot = MetricsRecord{method, kind, value, trial, 0.0, 0.0, false, 0, 0.0};
      if (!layout_ok) continue;
      try {
        const auto start = std::chrono::steady_clock::now();
        const RunResult run = run_method(method, cfg);
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        slot = summarize_run(method, kind, value, trial, run, spec.record_wall_time ? elapsed.count() : 0.0);
      } catch (const std::exception&) {
        // recorded as a non-converged run
      }
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(spec.threads, cells));
  if (workers == 1) {
    for (std::size_t c = 0; c < cells; ++c) run_cell(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < cells; c = next++) run_cell(c);
      });
    }
    for (auto& t : pool) t.join();
  }

  std::stable_sort(records.begin(), records.end(), [](const MetricsRecord& a, const MetricsRecord& b) {
    return std::tie(a.method, a.sweep_value, a.trial) < std::tie(b.method, b.sweep_value, b.trial);
  });
  return records;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string metrics_csv(const std::vector<MetricsRecord>& records) {
  if (records.empty()) throw std::invalid_argument("metrics_csv: no records");
  std::string out = "method,sweep_kind,sweep_value,trial,eta_total,rate_total_bps,converged,iterations,wall_time_s\n";
  for (const auto& r : records) {
    append_csv_row(out, {to_string(r.method), r.sweep_kind, format_double(r.sweep_value), std::to_string(r.trial),
                         format_double(r.eta_total), format_double(r.rate_total), r.converged ? "true" : "false",
                         std::to_string(r.iterations_used), format_double(r.wall_time)});
  }
  return out;
}

std::string trace_csv(const RunResult& run) {
  if (run.trace.empty()) throw std::invalid_argument("trace_csv: empty trace");
  std::string out = "iteration,eta_total,rate_total_bps,fbs_x,fbs_y,fbs_h,uav_index,x,y,h,gamma,action\n";
  for (const auto& row : run.trace) {
    for (std::size_t m = 0; m < row.uav_positions.size(); ++m) {
      const UavAction& a = row.actions_taken.at(m);
      const Position3D& p = row.uav_positions[m];
      append_csv_row(out, {std::to_string(row.iteration), format_double(row.eta_total),
                           format_double(row.rate_total), format_double(row.fbs.x), format_double(row.fbs.y),
                           format_double(row.fbs.h), std::to_string(m), format_double(p.x), format_double(p.y),
                           format_double(p.h), format_double(row.gammas[m]),
                           a.stalled ? "stalled" : to_string(a.kind)});
    }
  }
  return out;
}

std::string summary_csv(const std::vector<MetricsRecord>& records) {
  if (records.empty()) throw std::invalid_argument("summary_csv: no records");
  struct Acc {
    std::string kind;
    std::vector<double> eta;
    std::vector<double> rate;
    std::size_t converged = 0;
  };
  std::map<std::pair<Method, double>, Acc> groups;
  for (const auto& r : records) {
    Acc& acc = groups[{r.method, r.sweep_value}];
    acc.kind = r.sweep_kind;
    acc.eta.push_back(r.eta_total);
    acc.rate.push_back(r.rate_total);
    acc.converged += r.converged ? 1 : 0;
  }
  std::string out =
      "method,sweep_kind,sweep_value,trials,eta_mean,eta_min,eta_max,rate_mean_bps,rate_min_bps,rate_max_bps,"
      "converged_fraction\n";
  for (const auto& [key, acc] : groups) {
    const double n = static_cast<double>(acc.eta.size());
    append_csv_row(out, {to_string(key.first), acc.kind, format_double(key.second), std::to_string(acc.eta.size()),
                         format_double(order_free_sum(acc.eta) / n),
                         format_double(*std::min_element(acc.eta.begin(), acc.eta.end())),
                         format_double(*std::max_element(acc.eta.begin(), acc.eta.end())),
                         format_double(order_free_sum(acc.rate) / n),
                         format_double(*std::min_element(acc.rate.begin(), acc.rate.end())),
                         format_double(*std::max_element(acc.rate.begin(), acc.rate.end())),
                         format_double(static_cast<double>(acc.converged) / n)});
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace uavjrc
