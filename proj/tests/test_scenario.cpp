#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "oracle.hpp"
#include "uavjrc/scenario.hpp"

using namespace uavjrc;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ScenarioConfig three() { return table1_config({{0, 0, 0}, {300, 0, 0}, {600, 300, 0}}); }

std::string joined(const std::vector<ConfigIssue>& issues) {
  std::string out;
  for (const auto& i : issues) out += i.field + ": " + i.message + "\n";
  return out;
}

}  // namespace

TEST_CASE("table values validate with uniform weights", "[scenario]") {
  const ScenarioConfig cfg = validate_config(three());
  REQUIRE(cfg.weights_w.size() == 3);
  for (double w : cfg.weights_w) CHECK_THAT(w, WithinRel(1.0 / 3.0, 1e-15));
  CHECK(find_config_issues(three()).empty());
}

TEST_CASE("bad configs report every violation", "[scenario]") {
  ScenarioConfig cfg = table1_config({{0, 0, 0}, {10, 10, 0}});
  cfg.bounds.x_max = cfg.bounds.x_min;
  cfg.weights_w = {0.5, 0.6};
  const auto issues = find_config_issues(cfg);
  const std::string text = joined(issues);
  CHECK_THAT(text, ContainsSubstring("degenerate flight box"));
  CHECK_THAT(text, ContainsSubstring("weights sum 1.1 ≠ 1"));
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);
  try {
    validate_config(cfg);
  } catch (const ConfigError& e) {
    CHECK(e.issues().size() == issues.size());
  }

  ScenarioConfig neg = three();
  neg.total_power_pt = -1;
  neg.baseline_gamma = 1.0;
  neg.comm.los_prob_xi = 1.5;
  neg.targets.push_back({2000, 0, 0});
  const std::string t2 = joined(find_config_issues(neg));
  CHECK_THAT(t2, ContainsSubstring("total_power_pt"));
  CHECK_THAT(t2, ContainsSubstring("baseline_gamma"));
  CHECK_THAT(t2, ContainsSubstring("comm.los_prob_xi"));
  CHECK_THAT(t2, ContainsSubstring("outside the flight box"));
}

TEST_CASE("identity assignment", "[scenario]") {
  for (std::size_t n : {1u, 3u, 10u}) {
    std::vector<Position3D> t;
    for (std::size_t i = 0; i < n; ++i) t.push_back({50.0 * i, 10.0, 0});
    const auto pairs = assign_targets(table1_config(t));
    REQUIRE(pairs.size() == n);
    for (std::size_t i = 0; i < n; ++i) CHECK(pairs[i] == std::pair<std::size_t, std::size_t>{i, i});
  }
}

TEST_CASE("initial swarm sits above the targets", "[scenario]") {
  const SwarmState s = initial_swarm(validate_config(three()));
  REQUIRE(s.uavs.size() == 3);
  CHECK(s.uavs[0].pos == Position3D{0, 0, 40});
  CHECK(s.uavs[1].pos == Position3D{300, 0, 40});
  CHECK(s.uavs[2].pos == Position3D{600, 300, 40});
  for (const auto& u : s.uavs) CHECK(u.gamma == 0.0);
  CHECK(s.fbs == Position3D{300, 100, 50});

  const SwarmState one = initial_swarm(validate_config(table1_config({{100, 100, 0}})));
  CHECK(one.uavs[0].pos == Position3D{100, 100, 40});
  CHECK(one.fbs == Position3D{100, 100, 50});

  const SwarmState sym = initial_swarm(validate_config(table1_config({{400, 400, 0}, {600, 600, 0}, {400, 600, 0}, {600, 400, 0}})));
  CHECK(sym.fbs.x == 500.0);
  CHECK(sym.fbs.y == 500.0);

  ScenarioConfig low = three();
  low.bounds.h_max = 30;
  CHECK_THROWS_AS(initial_swarm(low), InfeasibleScenario);
}

TEST_CASE("initial constraints", "[scenario]") {
  const ScenarioConfig cfg = validate_config(three());
  const SwarmState s = initial_swarm(cfg);
  const ConstraintReport r = check_constraints(s, cfg);
  CHECK(r.entry(ConstraintId::C1).pass());
  for (const auto& c : r.entry(ConstraintId::C1).checks) {
    CHECK_THAT(c.slack, WithinRel(static_cast<double>(oracle::range(30.0, cfg.radar)) - 40.0, 1e-12));
  }
  CHECK_FALSE(r.entry(ConstraintId::C2).pass());
  for (const auto& c : r.entry(ConstraintId::C2).checks) CHECK(c.slack == -cfg.comm.rate_min_Rmin);
  CHECK(r.entry(ConstraintId::C3).pass());
  CHECK(r.entry(ConstraintId::C7).pass());
  CHECK(r.entry(ConstraintId::C8).pass());
  CHECK_FALSE(r.all_satisfied);
  // FBS rows for the box checks
  CHECK(r.entry(ConstraintId::C4).checks.back().uav == ConstraintCheck::npos);
  CHECK(r.entry(ConstraintId::C4).checks.size() == 4);
}

TEST_CASE("collisions and bad split factors are flagged", "[scenario]") {
  const ScenarioConfig cfg = validate_config(three());
  SwarmState s = initial_swarm(cfg);
  s.uavs[1].pos = s.uavs[0].pos;
  auto r = check_constraints(s, cfg);
  CHECK_FALSE(r.entry(ConstraintId::C3).pass());
  CHECK(r.entry(ConstraintId::C3).checks[0].slack == -cfg.safe_distance_dg);

  s = initial_swarm(cfg);
  s.uavs[2].gamma = 1.5;
  r = check_constraints(s, cfg);
  CHECK_FALSE(r.entry(ConstraintId::C8).checks[2].pass);
  CHECK(r.entry(ConstraintId::C8).checks[0].pass);
  // zero radar power puts the target out of range
  CHECK_FALSE(r.entry(ConstraintId::C1).checks[2].pass);

  s = initial_swarm(cfg);
  s.fbs.h = 30;
  r = check_constraints(s, cfg);
  CHECK_FALSE(r.entry(ConstraintId::C7).pass());

  s = initial_swarm(cfg);
  s.uavs[0].pos.x = -1;
  s.fbs.h = 120;
  r = check_constraints(s, cfg);
  CHECK_FALSE(r.entry(ConstraintId::C4).checks[0].pass);
  CHECK_FALSE(r.entry(ConstraintId::C6).checks.back().pass);

  // UAV sitting on the FBS: zero link distance reports as a rate failure
  s = initial_swarm(cfg);
  s.uavs[0].gamma = 0.5;
  s.fbs = s.uavs[0].pos;
  r = check_constraints(s, cfg);
  CHECK_FALSE(r.entry(ConstraintId::C2).pass());
}

TEST_CASE("range and snr formulations of C1 agree", "[scenario][property]") {
  const ScenarioConfig cfg = validate_config(three());
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> xy(0.0, 1000.0), hh(1.0, 100.0), gg(0.0, 0.999);
  for (int i = 0; i < 500; ++i) {
    SwarmState s = initial_swarm(cfg);
    for (auto& u : s.uavs) {
      u.pos = {xy(rng), xy(rng), hh(rng)};
      u.gamma = gg(rng);
    }
    const auto links = evaluate_links(s, cfg);
    const auto r = check_constraints(s, cfg);
    for (std::size_t m = 0; m < s.uavs.size(); ++m) {
      const double eta = links.snr[m];
      // only decide away from the boundary where rounding could flip either test
      if (std::abs(eta / cfg.radar.snr_min_eta - 1.0) < 1e-8) continue;
      CHECK(r.entry(ConstraintId::C1).checks[m].pass == (eta >= cfg.radar.snr_min_eta));
    }
  }
}

TEST_CASE("constraint report permutes with the UAVs", "[scenario][property]") {
  ScenarioConfig cfg = validate_config(table1_config({{400, 400, 0}, {520, 430, 0}, {470, 600, 0}, {610, 560, 0}}));
  SwarmState s = initial_swarm(cfg);
  for (std::size_t m = 0; m < s.uavs.size(); ++m) {
    s.uavs[m].gamma = 0.2 + 0.15 * m;
    s.uavs[m].pos.x += 7.0 * m;
  }
  const std::vector<std::size_t> perm{2, 0, 3, 1};
  ScenarioConfig pcfg = cfg;
  SwarmState ps = s;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    pcfg.targets[i] = cfg.targets[perm[i]];
    ps.uavs[i] = s.uavs[perm[i]];
    ps.uavs[i].target_index = i;
  }
  const auto a = check_constraints(s, cfg);
  const auto b = check_constraints(ps, pcfg);
  for (std::size_t e = 0; e < a.entries.size(); ++e) {
    for (std::size_t i = 0; i < perm.size(); ++i) {
      CHECK(b.entries[e].checks[i].slack == a.entries[e].checks[perm[i]].slack);
      CHECK(b.entries[e].checks[i].pass == a.entries[e].checks[perm[i]].pass);
    }
  }
}

TEST_CASE("json round trip and strict keys", "[scenario]") {
  const ScenarioConfig cfg = validate_config(three());
  const ScenarioConfig back = validate_config(scenario_from_json(scenario_to_json(cfg)));
  CHECK(back.targets == cfg.targets);
  CHECK(back.weights_w == cfg.weights_w);
  CHECK_THAT(back.radar.noise_figure_F, WithinRel(cfg.radar.noise_figure_F, 1e-14));
  CHECK(scenario_to_json(back) == scenario_to_json(cfg));

  auto doc = nlohmann::json::parse(R"({"targets": [{"x": 1, "y": 2}], "radar": {"noise_figure_F_dB": 10}})");
  const ScenarioConfig parsed = scenario_from_json(doc);
  CHECK_THAT(parsed.radar.noise_figure_F, WithinRel(10.0, 1e-14));
  CHECK(parsed.targets[0] == Position3D{1, 2, 0});

  CHECK_THROWS_AS(scenario_from_json(nlohmann::json::parse(R"({"targets": [], "total_power": 3})")), ConfigError);
  CHECK_THROWS_AS(scenario_from_json(nlohmann::json::parse(R"({"radar": {"gT": 3}})")), ConfigError);
  CHECK_THROWS_AS(scenario_from_json(nlohmann::json::parse(R"({"interference": "partial"})")), ConfigError);
  CHECK_THROWS_AS(load_scenario_file("/nonexistent/file.json"), ConfigError);
}

TEST_CASE("reference config file loads", "[scenario]") {
  const ScenarioConfig cfg = validate_config(load_scenario_file(UAVJRC_CONFIG_DIR "/reference.json"));
  CHECK(cfg.targets.size() == 3);
  CHECK(cfg.radar.snr_min_eta == 10.0);
  CHECK(cfg.total_power_pt == 30.0);
}
