#include "uavjrc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace uavjrc {

namespace {

using nlohmann::json;

std::string fmt_num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::string joined_issues(const std::vector<ConfigIssue>& issues) {
  std::string out = "invalid scenario config:";
  for (const auto& i : issues) out += "\n  " + i.field + ": " + i.message;
  return out;
}

// Walks one JSON object, rejecting keys that the schema does not know.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path, std::vector<ConfigIssue>& issues)
      : obj_(obj), path_(std::move(path)), issues_(issues) {
    if (!obj_.is_object()) {
      issues_.push_back({path_.empty() ? "<root>" : path_, "expected a JSON object"});
    }
  }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    if (!obj_.is_object() || !obj_.contains(key)) return;
    const json& v = obj_.at(key);
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw std::invalid_argument("expected a number");
        out = v.get<double>();
      } else if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t>) {
        if (!v.is_number_unsigned()) throw std::invalid_argument("expected a non-negative integer");
        out = v.get<T>();
      } else {
        out = v.get<T>();
      }
    } catch (const std::exception& e) {
      issues_.push_back({field(key), e.what()});
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    if (!obj_.is_object() || !obj_.contains(key)) return nullptr;
    return &obj_.at(key);
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void reject_unknown() {
    if (!obj_.is_object()) return;
    for (const auto& [key, _] : obj_.items()) {
      if (!seen_.count(key)) issues_.push_back({field(key), "unknown key"});
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::vector<ConfigIssue>& issues_;
  std::set<std::string> seen_;
};

void require_positive(std::vector<ConfigIssue>& issues, const std::string& field, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    issues.push_back({field, "must be > 0 (got " + fmt_num(v) + ")"});
  }
}

void require_probability(std::vector<ConfigIssue>& issues, const std::string& field, double v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    issues.push_back({field, "must be in [0, 1] (got " + fmt_num(v) + ")"});
  }
}

}  // namespace

double FlightBox::diagonal() const {
  const double dx = x_max - x_min;
  const double dy = y_max - y_min;
  return std::sqrt(dx * dx + dy * dy + h_max * h_max);
}

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error(joined_issues(issues)), issues_(std::move(issues)) {}

std::string to_string(ConstraintId id) {
  return "C" + std::to_string(static_cast<int>(id) + 1);
}

bool ConstraintEntry::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const ConstraintCheck& c) { return c.pass; });
}

const ConstraintEntry& ConstraintReport::entry(ConstraintId id) const {
  for (const auto& e : entries) {
    if (e.id == id) return e;
  }
  throw std::out_of_range("constraint " + to_string(id) + " missing from report");
}

ScenarioConfig table1_config(std::vector<Position3D> targets) {
  ScenarioConfig cfg;
  cfg.targets = std::move(targets);
  return cfg;
}

std::vector<ConfigIssue> find_config_issues(const ScenarioConfig& raw) {
  std::vector<ConfigIssue> issues;
  const FlightBox& b = raw.bounds;

  if (!(b.x_min < b.x_max)) {
    issues.push_back({"bounds.x", "degenerate flight box: x_min " + fmt_num(b.x_min) +
                                      " must be < x_max " + fmt_num(b.x_max)});
  }
  if (!(b.y_min < b.y_max)) {
    issues.push_back({"bounds.y", "degenerate flight box: y_min " + fmt_num(b.y_min) +
                                      " must be < y_max " + fmt_num(b.y_max)});
  }
  if (!(b.h_max > 0.0)) {
    issues.push_back({"bounds.h_max", "degenerate flight box: h_max must be > 0 (got " +
                                          fmt_num(b.h_max) + ")"});
  }

  if (raw.targets.empty()) issues.push_back({"targets", "at least one target is required"});
  for (std::size_t i = 0; i < raw.targets.size(); ++i) {
    const Position3D& t = raw.targets[i];
    const std::string field = "targets[" + std::to_string(i) + "]";
    if (!t.is_finite()) {
      issues.push_back({field, "coordinates must be finite"});
      continue;
    }
    if (t.x < b.x_min || t.x > b.x_max || t.y < b.y_min || t.y > b.y_max) {
      issues.push_back({field, "(" + fmt_num(t.x) + ", " + fmt_num(t.y) +
                                   ") lies outside the flight box [" + fmt_num(b.x_min) + ", " +
                                   fmt_num(b.x_max) + "] x [" + fmt_num(b.y_min) + ", " +
                                   fmt_num(b.y_max) + "]"});
    }
    if (t.h != 0.0) issues.push_back({field + ".h", "targets are on the ground: expected 0, got " + fmt_num(t.h)});
  }

  if (!raw.weights_w.empty()) {
    if (raw.weights_w.size() != raw.targets.size()) {
      issues.push_back({"weights_w", "length " + std::to_string(raw.weights_w.size()) +
                                         " does not match " + std::to_string(raw.targets.size()) +
                                         " targets"});
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < raw.weights_w.size(); ++i) {
      const double w = raw.weights_w[i];
      if (!(w >= 0.0)) {
        issues.push_back({"weights_w[" + std::to_string(i) + "]", "must be >= 0 (got " + fmt_num(w) + ")"});
      }
      sum += w;
    }
    if (!(std::abs(sum - 1.0) <= 1e-9)) {
      issues.push_back({"weights_w", "weights sum " + fmt_num(sum) + " ≠ 1"});
    }
  }

  require_positive(issues, "total_power_pt", raw.total_power_pt);
  require_positive(issues, "safe_distance_dg", raw.safe_distance_dg);
  require_positive(issues, "fbs_clearance_dh", raw.fbs_clearance_dh);
  if (!(raw.baseline_gamma > 0.0 && raw.baseline_gamma < 1.0)) {
    issues.push_back({"baseline_gamma", "must be in (0, 1) (got " + fmt_num(raw.baseline_gamma) + ")"});
  }

  const RadarParams& r = raw.radar;
  require_positive(issues, "radar.tx_gain_gT", r.tx_gain_gT);
  require_positive(issues, "radar.rx_gain_gR", r.rx_gain_gR);
  require_positive(issues, "radar.carrier_freq_fc", r.carrier_freq_fc);
  require_positive(issues, "radar.light_speed_C", r.light_speed_C);
  require_positive(issues, "radar.rcs_sigma", r.rcs_sigma);
  require_positive(issues, "radar.radar_bandwidth_Br", r.radar_bandwidth_Br);
  require_positive(issues, "radar.boltzmann_k", r.boltzmann_k);
  require_positive(issues, "radar.noise_temp_T0", r.noise_temp_T0);
  require_positive(issues, "radar.noise_figure_F", r.noise_figure_F);
  require_positive(issues, "radar.probing_loss_l", r.probing_loss_l);
  require_positive(issues, "radar.snr_min_eta", r.snr_min_eta);
  if (!(r.radar_bandwidth_Br < r.carrier_freq_fc)) {
    issues.push_back({"radar.radar_bandwidth_Br", "must be below the carrier frequency " +
                                                      fmt_num(r.carrier_freq_fc) + " (got " +
                                                      fmt_num(r.radar_bandwidth_Br) + ")"});
  }

  const CommParams& c = raw.comm;
  require_positive(issues, "comm.carrier_freq_fc", c.carrier_freq_fc);
  require_positive(issues, "comm.light_speed_C", c.light_speed_C);
  require_positive(issues, "comm.comm_bandwidth_Bc", c.comm_bandwidth_Bc);
  require_probability(issues, "comm.los_prob_xi", c.los_prob_xi);
  require_probability(issues, "comm.nlos_prob_xi", c.nlos_prob_xi);
  require_positive(issues, "comm.los_atten_mu", c.los_atten_mu);
  require_positive(issues, "comm.nlos_atten_mu", c.nlos_atten_mu);
  require_positive(issues, "comm.noise_density_delta0", c.noise_density_delta0);
  if (!(c.rate_min_Rmin >= 0.0)) {
    issues.push_back({"comm.rate_min_Rmin", "must be >= 0 (got " + fmt_num(c.rate_min_Rmin) + ")"});
  }
  require_positive(issues, "comm.fbs_rx_gain_ghR", c.fbs_rx_gain_ghR);
  if (!(c.attenuation_mix() > 0.0)) {
    issues.push_back({"comm", "LoS/NLoS attenuation mix must be > 0"});
  }

  const AlgoParams& a = raw.algo;
  require_positive(issues, "algo.delta_gamma", a.delta_gamma);
  if (a.delta_gamma > 1.0) {
    issues.push_back({"algo.delta_gamma", "must be <= 1 (got " + fmt_num(a.delta_gamma) + ")"});
  }
  require_positive(issues, "algo.delta_r", a.delta_r);
  require_positive(issues, "algo.learning_rate_alpha", a.learning_rate_alpha);
  require_positive(issues, "algo.grad_tolerance_eps", a.grad_tolerance_eps);
  require_positive(issues, "algo.fd_step", a.fd_step);
  if (a.max_outer_iters_Tm == 0) issues.push_back({"algo.max_outer_iters_Tm", "must be >= 1 (got 0)"});
  if (a.max_fbs_iters_TF == 0) issues.push_back({"algo.max_fbs_iters_TF", "must be >= 1 (got 0)"});

  return issues;
}

ScenarioConfig validate_config(ScenarioConfig raw) {
  auto issues = find_config_issues(raw);
  if (!issues.empty()) throw ConfigError(std::move(issues));
  if (raw.weights_w.empty()) {
    raw.weights_w.assign(raw.targets.size(), 1.0 / static_cast<double>(raw.targets.size()));
  }
  return raw;
}

ScenarioConfig scenario_from_json(const json& doc) {
  ScenarioConfig cfg;
  std::vector<ConfigIssue> issues;
  ObjectReader root(doc, "", issues);

  if (const json* targets = root.child("targets")) {
    if (!targets->is_array()) {
      issues.push_back({"targets", "expected an array of {x, y[, h]} objects"});
    } else {
      for (std::size_t i = 0; i < targets->size(); ++i) {
        Position3D p;
        ObjectReader t((*targets)[i], "targets[" + std::to_string(i) + "]", issues);
        t.read("x", p.x);
        t.read("y", p.y);
        t.read("h", p.h);
        t.reject_unknown();
        cfg.targets.push_back(p);
      }
    }
  }

  if (const json* bounds = root.child("bounds")) {
    ObjectReader b(*bounds, "bounds", issues);
    b.read("x_min", cfg.bounds.x_min);
    b.read("x_max", cfg.bounds.x_max);
    b.read("y_min", cfg.bounds.y_min);
    b.read("y_max", cfg.bounds.y_max);
    b.read("h_max", cfg.bounds.h_max);
    b.reject_unknown();
  }

  root.read("total_power_pt", cfg.total_power_pt);
  root.read("safe_distance_dg", cfg.safe_distance_dg);
  root.read("fbs_clearance_dh", cfg.fbs_clearance_dh);
  root.read("weights_w", cfg.weights_w);
  root.read("baseline_gamma", cfg.baseline_gamma);
  root.read("seed", cfg.seed);
  root.read("num_random_targets", cfg.num_random_targets);

  std::string interference = to_string(cfg.interference);
  root.read("interference", interference);
  try {
    cfg.interference = interference_from_string(interference);
  } catch (const std::exception& e) {
    issues.push_back({"interference", e.what()});
  }

  if (const json* radar = root.child("radar")) {
    RadarParams& r = cfg.radar;
    ObjectReader rr(*radar, "radar", issues);
    rr.read("tx_gain_gT", r.tx_gain_gT);
    rr.read("rx_gain_gR", r.rx_gain_gR);
    rr.read("carrier_freq_fc", r.carrier_freq_fc);
    rr.read("light_speed_C", r.light_speed_C);
    rr.read("rcs_sigma", r.rcs_sigma);
    rr.read("radar_bandwidth_Br", r.radar_bandwidth_Br);
    rr.read("boltzmann_k", r.boltzmann_k);
    rr.read("noise_temp_T0", r.noise_temp_T0);
    double noise_figure_db = 10.0 * std::log10(r.noise_figure_F);
    rr.read("noise_figure_F_dB", noise_figure_db);
    r.noise_figure_F = std::pow(10.0, noise_figure_db / 10.0);
    rr.read("probing_loss_l", r.probing_loss_l);
    rr.read("snr_min_eta", r.snr_min_eta);
    rr.reject_unknown();
  }

  if (const json* comm = root.child("comm")) {
    CommParams& c = cfg.comm;
    ObjectReader cr(*comm, "comm", issues);
    cr.read("carrier_freq_fc", c.carrier_freq_fc);
    cr.read("light_speed_C", c.light_speed_C);
    cr.read("comm_bandwidth_Bc", c.comm_bandwidth_Bc);
    cr.read("los_prob_xi", c.los_prob_xi);
    cr.read("nlos_prob_xi", c.nlos_prob_xi);
    cr.read("los_atten_mu", c.los_atten_mu);
    cr.read("nlos_atten_mu", c.nlos_atten_mu);
    cr.read("noise_density_delta0", c.noise_density_delta0);
    cr.read("rate_min_Rmin", c.rate_min_Rmin);
    cr.read("fbs_rx_gain_ghR", c.fbs_rx_gain_ghR);
    cr.reject_unknown();
  }

  if (const json* algo = root.child("algo")) {
    AlgoParams& a = cfg.algo;
    ObjectReader ar(*algo, "algo", issues);
    ar.read("delta_gamma", a.delta_gamma);
    ar.read("delta_r", a.delta_r);
    ar.read("learning_rate_alpha", a.learning_rate_alpha);
    ar.read("grad_tolerance_eps", a.grad_tolerance_eps);
    ar.read("fd_step", a.fd_step);
    ar.read("max_outer_iters_Tm", a.max_outer_iters_Tm);
    ar.read("max_fbs_iters_TF", a.max_fbs_iters_TF);
    ar.reject_unknown();
  }

  root.reject_unknown();
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

json scenario_to_json(const ScenarioConfig& cfg) {
  json targets = json::array();
  for (const auto& t : cfg.targets) targets.push_back({{"x", t.x}, {"y", t.y}, {"h", t.h}});
  const RadarParams& r = cfg.radar;
  const CommParams& c = cfg.comm;
  const AlgoParams& a = cfg.algo;
  return json{
      {"targets", targets},
      {"bounds",
       {{"x_min", cfg.bounds.x_min},
        {"x_max", cfg.bounds.x_max},
        {"y_min", cfg.bounds.y_min},
        {"y_max", cfg.bounds.y_max},
        {"h_max", cfg.bounds.h_max}}},
      {"total_power_pt", cfg.total_power_pt},
      {"safe_distance_dg", cfg.safe_distance_dg},
      {"fbs_clearance_dh", cfg.fbs_clearance_dh},
      {"weights_w", cfg.weights_w},
      {"baseline_gamma", cfg.baseline_gamma},
      {"seed", cfg.seed},
      {"num_random_targets", cfg.num_random_targets},
      {"interference", to_string(cfg.interference)},
      {"radar",
       {{"tx_gain_gT", r.tx_gain_gT},
        {"rx_gain_gR", r.rx_gain_gR},
        {"carrier_freq_fc", r.carrier_freq_fc},
        {"light_speed_C", r.light_speed_C},
        {"rcs_sigma", r.rcs_sigma},
        {"radar_bandwidth_Br", r.radar_bandwidth_Br},
        {"boltzmann_k", r.boltzmann_k},
        {"noise_temp_T0", r.noise_temp_T0},
        {"noise_figure_F_dB", 10.0 * std::log10(r.noise_figure_F)},
        {"probing_loss_l", r.probing_loss_l},
        {"snr_min_eta", r.snr_min_eta}}},
      {"comm",
       {{"carrier_freq_fc", c.carrier_freq_fc},
        {"light_speed_C", c.light_speed_C},
        {"comm_bandwidth_Bc", c.comm_bandwidth_Bc},
        {"los_prob_xi", c.los_prob_xi},
        {"nlos_prob_xi", c.nlos_prob_xi},
        {"los_atten_mu", c.los_atten_mu},
        {"nlos_atten_mu", c.nlos_atten_mu},
        {"noise_density_delta0", c.noise_density_delta0},
        {"rate_min_Rmin", c.rate_min_Rmin},
        {"fbs_rx_gain_ghR", c.fbs_rx_gain_ghR}}},
      {"algo",
       {{"delta_gamma", a.delta_gamma},
        {"delta_r", a.delta_r},
        {"learning_rate_alpha", a.learning_rate_alpha},
        {"grad_tolerance_eps", a.grad_tolerance_eps},
        {"fd_step", a.fd_step},
        {"max_outer_iters_Tm", a.max_outer_iters_Tm},
        {"max_fbs_iters_TF", a.max_fbs_iters_TF}}},
  };
}

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(std::vector<ConfigIssue>{{"<file>", "cannot open '" + path + "'"}});
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::vector<ConfigIssue>{{"<file>", path + ": " + e.what()}});
  }
  return scenario_from_json(doc);
}

std::vector<std::pair<std::size_t, std::size_t>> assign_targets(const ScenarioConfig& cfg) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(cfg.targets.size());
  for (std::size_t m = 0; m < cfg.targets.size(); ++m) pairs.emplace_back(m, m);
  return pairs;
}

SwarmState initial_swarm(const ScenarioConfig& cfg) {
  if (cfg.safe_distance_dg > cfg.bounds.h_max) {
    throw InfeasibleScenario("safe distance d_g = " + fmt_num(cfg.safe_distance_dg) +
                             " m exceeds the altitude ceiling h_max = " + fmt_num(cfg.bounds.h_max) + " m");
  }
  if (cfg.targets.empty()) throw InfeasibleScenario("scenario has no targets");

  SwarmState s;
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& [m, n] : assign_targets(cfg)) {
    const Position3D& t = cfg.targets[n];
    s.uavs.push_back(UavState{{t.x, t.y, cfg.safe_distance_dg}, 0.0, n});
    xs.push_back(t.x);
    ys.push_back(t.y);
  }

  const double count = static_cast<double>(cfg.targets.size());
  const FlightBox& b = cfg.bounds;
  s.fbs.x = std::clamp(order_free_sum(xs) / count, b.x_min, b.x_max);
  s.fbs.y = std::clamp(order_free_sum(ys) / count, b.y_min, b.y_max);
  s.fbs.h = std::min(cfg.safe_distance_dg + cfg.fbs_clearance_dh, b.h_max);
  return s;
}

std::vector<double> uplink_rates(const SwarmState& s, const Position3D& fbs, const ScenarioConfig& cfg) {
  const std::size_t count = s.uavs.size();
  std::vector<double> p_comm(count);
  std::vector<double> gains(count);
  for (std::size_t m = 0; m < count; ++m) {
    p_comm[m] = comm_power(cfg, s.uavs[m].gamma);
    gains[m] = channel_gain(distance3d(s.uavs[m].pos, fbs), cfg.comm);
  }
  std::vector<double> rates = sinr_all(p_comm, gains, cfg.comm, cfg.radar.tx_gain_gT, cfg.interference);
  for (double& r : rates) r = data_rate(r, cfg.comm);
  return rates;
}

LinkMetrics evaluate_links(const SwarmState& s, const ScenarioConfig& cfg) {
  LinkMetrics out;
  out.snr.reserve(s.uavs.size());
  for (const auto& u : s.uavs) {
    const double d = distance3d(u.pos, cfg.targets[u.target_index]);
    out.snr.push_back(radar_snr(radar_power(cfg, u.gamma), d, cfg.radar));
  }
  out.rate = uplink_rates(s, s.fbs, cfg);
  return out;
}

ConstraintReport check_constraints(const SwarmState& s, const ScenarioConfig& cfg) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const std::size_t count = s.uavs.size();
  const FlightBox& b = cfg.bounds;
  ConstraintReport report;

  ConstraintEntry c1{ConstraintId::C1, {}};
  for (std::size_t m = 0; m < count; ++m) {
    const UavState& u = s.uavs[m];
    const double d = distance3d(u.pos, cfg.targets[u.target_index]);
    const double p_r = radar_power(cfg, u.gamma);
    const double range = p_r > 0.0 ? radar_range(p_r, cfg.radar) : 0.0;
    c1.checks.push_back({m, p_r > 0.0 && d <= range * (1.0 + kRangeRelTol), range - d});
  }

  ConstraintEntry c2{ConstraintId::C2, {}};
  try {
    const auto rates = uplink_rates(s, s.fbs, cfg);
    for (std::size_t m = 0; m < count; ++m) {
      const double slack = rates[m] - cfg.comm.rate_min_Rmin;
      c2.checks.push_back({m, slack >= 0.0, slack});
    }
  } catch (const DegenerateGeometry&) {
    for (std::size_t m = 0; m < count; ++m) c2.checks.push_back({m, false, -cfg.comm.rate_min_Rmin});
  }

  ConstraintEntry c3{ConstraintId::C3, {}};
  for (std::size_t m = 0; m < count; ++m) {
    double nearest = inf;
    for (std::size_t k = 0; k < count; ++k) {
      if (k != m) nearest = std::min(nearest, distance3d(s.uavs[m].pos, s.uavs[k].pos));
    }
    const double slack = nearest - cfg.safe_distance_dg;
    c3.checks.push_back({m, slack >= 0.0, slack});
  }

  ConstraintEntry c4{ConstraintId::C4, {}};
  ConstraintEntry c5{ConstraintId::C5, {}};
  ConstraintEntry c6{ConstraintId::C6, {}};
  auto box_rows = [&](std::size_t who, const Position3D& p) {
    const double sx = std::min(p.x - b.x_min, b.x_max - p.x);
    const double sy = std::min(p.y - b.y_min, b.y_max - p.y);
    const double sh = std::min(p.h, b.h_max - p.h);
    c4.checks.push_back({who, sx >= 0.0, sx});
    c5.checks.push_back({who, sy >= 0.0, sy});
    c6.checks.push_back({who, p.h > 0.0 && p.h <= b.h_max, sh});
  };
  for (std::size_t m = 0; m < count; ++m) box_rows(m, s.uavs[m].pos);
  box_rows(ConstraintCheck::npos, s.fbs);

  ConstraintEntry c7{ConstraintId::C7, {}};
  for (std::size_t m = 0; m < count; ++m) {
    const double slack = s.fbs.h - s.uavs[m].pos.h;
    c7.checks.push_back({m, slack > 0.0, slack});
  }

  ConstraintEntry c8{ConstraintId::C8, {}};
  for (std::size_t m = 0; m < count; ++m) {
    const double g = s.uavs[m].gamma;
    c8.checks.push_back({m, g >= 0.0 && g <= 1.0, std::min(g, 1.0 - g)});
  }

  report.entries = {std::move(c1), std::move(c2), std::move(c3), std::move(c4),
                    std::move(c5), std::move(c6), std::move(c7), std::move(c8)};
  report.all_satisfied = std::all_of(report.entries.begin(), report.entries.end(),
                                     [](const ConstraintEntry& e) { return e.pass(); });
  return report;
}

}  // namespace uavjrc
