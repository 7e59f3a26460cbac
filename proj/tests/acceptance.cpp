// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "uavjrc/harness.hpp"

using namespace uavjrc;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double rel_err(long double got, long double want) {
  if (want == 0.0L) return static_cast<double>(std::abs(got));
  return static_cast<double>(std::abs(got - want) / std::abs(want));
}

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] %2d %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

struct Cell {
  double value = 0.0;
  std::size_t trial = 0;
  ScenarioConfig cfg;
  RunResult djrc, froc, orfc;
};

// Every run of the suite, kept for the trace-wide checks.
std::vector<const RunResult*> all_runs;

std::vector<Cell> run_cells(const ScenarioConfig& base, const SweepSpec& spec) {
  std::vector<Cell> cells;
  for (std::size_t v = 0; v < spec.values.size(); ++v) {
    for (std::size_t t = 0; t < spec.trials_per_point; ++t) {
      Cell c;
      c.value = spec.values[v];
      c.trial = t;
      c.cfg = sweep_cell_config(base, spec, v, t);
      c.djrc = djrc_run(c.cfg);
      c.froc = froc_solve(c.cfg);
      c.orfc = orfc_solve(c.cfg);
      cells.push_back(std::move(c));
    }
  }
  return cells;
}

double eta(const RunResult& r) { return r.trace.back().eta_total; }
double rate(const RunResult& r) { return r.trace.back().rate_total; }

std::vector<double> djrc_means(const std::vector<Cell>& cells, const std::vector<double>& values) {
  std::vector<double> means;
  for (double v : values) {
    std::vector<double> xs;
    for (const auto& c : cells)
      if (c.value == v) xs.push_back(eta(c.djrc));
    means.push_back(order_free_sum(xs) / static_cast<double>(xs.size()));
  }
  return means;
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (double x : xs) out += (out.empty() ? "" : " ") + fmt("%.4g", x);
  return out;
}

long double oracle_sum_rate(const Position3D& fbs, const SwarmState& s, const ScenarioConfig& cfg) {
  std::vector<double> p, g;
  for (const auto& u : s.uavs) {
    p.push_back(u.gamma * cfg.total_power_pt);
    g.push_back(static_cast<double>(oracle::gain(distance3d(u.pos, fbs), cfg.comm)));
  }
  long double total = 0.0L;
  for (std::size_t m = 0; m < p.size(); ++m)
    total += oracle::rate(oracle::sinr(m, p, g, cfg.comm, cfg.radar.tx_gain_gT, cfg.interference == InterferenceMode::Full), cfg.comm);
  return total;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --- criteria -------------------------------------------------------------

void physics_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20240611);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto d = oracle::random_draw(rng);
    worst = std::max(worst, rel_err(radar_snr(d.p_radar, d.d, d.radar), oracle::snr(d.p_radar, d.d, d.radar)));
    worst = std::max(worst, rel_err(radar_range(d.p_radar, d.radar), oracle::range(d.p_radar, d.radar)));
    worst = std::max(worst, rel_err(channel_gain(d.d, d.comm), oracle::gain(d.d, d.comm)));
    for (std::size_t m = 0; m < d.p_comm.size(); ++m) {
      for (auto mode : {InterferenceMode::Full, InterferenceMode::None}) {
        const double s = sinr(m, d.p_comm, d.gains, d.comm, d.radar.tx_gain_gT, mode);
        const long double ref = oracle::sinr(m, d.p_comm, d.gains, d.comm, d.radar.tx_gain_gT, mode == InterferenceMode::Full);
        worst = std::max(worst, rel_err(s, ref));
        worst = std::max(worst, rel_err(data_rate(s, d.comm), oracle::rate(ref, d.comm)));
      }
    }
  }
  const double secs = seconds_since(start);
  report(1, "physics oracle equivalence", worst <= 1e-12 && secs < 1.0,
         "max rel err " + fmt("%.3g", worst) + " (tol 1e-12), " + fmt("%.3f", secs) + " s (limit 1 s)");
}

void range_round_trip() {
  RadarParams rp;
  double worst = 0.0;
  for (int p = 1; p <= 100; ++p) {
    worst = std::max(worst, rel_err(radar_snr(p, radar_range(p, rp), rp), rp.snr_min_eta));
  }
  report(2, "range-snr round trip", worst <= 1e-9, "max rel err " + fmt("%.3g", worst) + " (tol 1e-9)");
}

void convergence_and_shape(const ScenarioConfig& cfg, RunResult& out) {
  const auto start = Clock::now();
  out = djrc_run(cfg);
  const double secs = seconds_since(start);
  const bool all_ok = check_constraints(out.final, cfg).all_satisfied;
  report(3, "reference convergence band", out.converged && all_ok && out.iterations_used <= 100 && secs < 1.0,
         "converged=" + std::string(out.converged ? "true" : "false") + " C1-C8 " + (all_ok ? "all hold" : "violated") +
             ", " + std::to_string(out.iterations_used) + " iterations (limit 100), " + fmt("%.3f", secs) + " s (limit 1 s)");

  const auto& tr = out.trace;
  bool first_is_max = true, non_increasing = true;
  for (std::size_t t = 1; t < tr.size(); ++t) {
    first_is_max = first_is_max && tr[t].eta_total <= tr[0].eta_total;
    non_increasing = non_increasing && tr[t].eta_total <= tr[t - 1].eta_total;
  }
  const double floor = static_cast<double>(cfg.targets.size()) * cfg.comm.rate_min_Rmin;
  const bool rate_ok = out.converged && tr.back().rate_total >= floor;
  report(4, "reference trace shape", first_is_max && non_increasing && rate_ok,
         "eta[0] max=" + std::string(first_is_max ? "yes" : "no") + ", non-increasing=" + (non_increasing ? "yes" : "no") +
             ", final rate " + fmt("%.4g", tr.back().rate_total) + " bit/s vs M*Rmin " + fmt("%.4g", floor));
}

void target_sweep(const ScenarioConfig& base, const SweepSpec& spec, std::vector<Cell>& cells) {
  const auto start = Clock::now();
  cells = run_cells(base, spec);
  const double secs = seconds_since(start);

  int bad_orfc = 0, bad_froc = 0, bad_rate_order = 0, bad_floor = 0;
  for (const auto& c : cells) {
    const double floor = static_cast<double>(c.cfg.targets.size()) * c.cfg.comm.rate_min_Rmin;
    bad_orfc += !(eta(c.djrc) >= eta(c.orfc));
    bad_froc += !(eta(c.djrc) > eta(c.froc));
    bad_rate_order += !(rate(c.froc) >= rate(c.djrc));
    bad_floor += !(rate(c.djrc) >= floor);
  }
  const auto means = djrc_means(cells, spec.values);
  int inversions = 0;
  bool small = true;
  for (std::size_t i = 1; i < means.size(); ++i) {
    if (means[i] > means[i - 1]) {
      ++inversions;
      small = small && means[i] <= 1.05 * means[i - 1];
    }
  }
  const bool trend_ok = inversions == 0 || (inversions == 1 && small);
  const bool pass = bad_orfc == 0 && bad_froc == 0 && bad_rate_order == 0 && bad_floor == 0 && trend_ok && secs < 60.0;
  report(5, "target sweep ordering", pass,
         std::to_string(cells.size()) + " trials; eta D<O " + std::to_string(bad_orfc) + ", eta D<=F " +
             std::to_string(bad_froc) + ", rate F<D " + std::to_string(bad_rate_order) + ", rate D<M*Rmin " +
             std::to_string(bad_floor) + "; mean eta D by N [" + join(means) + "] rises " +
             std::to_string(inversions) + "x; " + fmt("%.1f", secs) + " s (limit 60 s)");
}

void power_sweep(const ScenarioConfig& base, const SweepSpec& spec, std::vector<Cell>& cells) {
  const auto start = Clock::now();
  cells = run_cells(base, spec);
  const double secs = seconds_since(start);

  const auto means = djrc_means(cells, spec.values);
  bool increasing = true;
  for (std::size_t i = 1; i < means.size(); ++i) increasing = increasing && means[i] > means[i - 1];
  int bad_order = 0, bad_rate = 0;
  std::string rate_misses;
  for (const auto& c : cells) {
    bad_order += !(eta(c.djrc) >= eta(c.froc) && eta(c.djrc) >= eta(c.orfc));
    if (!check_constraints(c.djrc.final, c.cfg).entry(ConstraintId::C2).pass()) {
      ++bad_rate;
      rate_misses += " p=" + fmt("%g", c.value) + "/t" + std::to_string(c.trial);
    }
  }
  const bool pass = increasing && bad_order == 0 && bad_rate == 0 && secs < 60.0;
  report(6, "power sweep ordering", pass,
         "mean eta D by p_t [" + join(means) + "] strictly increasing=" + (increasing ? "yes" : "no") +
             "; eta D below a baseline " + std::to_string(bad_order) + "; DJRC runs missing R_min " +
             std::to_string(bad_rate) + (rate_misses.empty() ? "" : " (" + rate_misses.substr(1) + ")") + "; " +
             fmt("%.1f", secs) + " s (limit 60 s)");
}

void froc_pinning(const std::vector<std::pair<const ScenarioConfig*, const RunResult*>>& runs) {
  std::size_t checked = 0, clamped = 0;
  double worst = 0.0;
  for (const auto& [cfg, run] : runs) {
    SwarmState last = run->final;
    last.fbs = run->trace.at(run->trace.size() - 2).fbs;
    const auto placed = froc_placements(last, *cfg);
    const auto links = evaluate_links(run->final, *cfg);
    for (std::size_t m = 0; m < placed.size(); ++m) {
      if (placed[m].clamped) {
        ++clamped;
        continue;
      }
      ++checked;
      worst = std::max(worst, rel_err(links.snr[m], cfg->radar.snr_min_eta));
    }
  }
  report(7, "froc snr pinning", checked > 0 && worst <= 1e-6,
         std::to_string(checked) + " unclamped placements over " + std::to_string(runs.size()) + " runs (" +
             std::to_string(clamped) + " clamped skipped), max rel err " + fmt("%.3g", worst) + " (tol 1e-6)");
}

void gradient_check(const ScenarioConfig& base) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> xy(150.0, 850.0), hh(20.0, 80.0), gg(0.05, 0.95);
  double worst = 0.0;
  int done = 0;
  while (done < 100) {
    SwarmState s = initial_swarm(base);
    for (auto& u : s.uavs) {
      u.pos = {xy(rng), xy(rng), hh(rng)};
      u.gamma = gg(rng);
    }
    const Position3D fbs{xy(rng), xy(rng), 90.0};
    double nearest = 1e300;
    for (const auto& u : s.uavs) nearest = std::min(nearest, distance3d(u.pos, fbs));
    if (nearest < 80.0) continue;
    ++done;
    const auto g = fbs_gradient(fbs, s, base);
    const double h = base.algo.fd_step / 2;
    long double num = 0.0L, den = 0.0L;
    for (int a = 0; a < 3; ++a) {
      Position3D up = fbs, dn = fbs;
      (a == 0 ? up.x : a == 1 ? up.y : up.h) += h;
      (a == 0 ? dn.x : a == 1 ? dn.y : dn.h) -= h;
      const long double ref = (oracle_sum_rate(up, s, base) - oracle_sum_rate(dn, s, base)) / (2 * h);
      num += (g[a] - ref) * (g[a] - ref);
      den += ref * ref;
    }
    worst = std::max(worst, static_cast<double>(std::sqrt(num / den)));
  }

  // mirror layouts: x = 500 and y = 500 are symmetry axes
  double sym = 0.0;
  const std::vector<std::vector<Position3D>> layouts{
      {{430, 500, 0}, {570, 500, 0}},
      {{400, 420, 0}, {600, 420, 0}, {450, 610, 0}, {550, 610, 0}},
  };
  for (const auto& t : layouts) {
    const ScenarioConfig cfg = validate_config(table1_config(t));
    SwarmState s = initial_swarm(cfg);
    for (auto& u : s.uavs) u.gamma = 0.35;
    for (double y : {250.0, 505.0, 700.0}) {
      const Position3D at{500, y, 75};
      sym = std::max(sym, std::abs(fbs_gradient(at, s, cfg)[0]) / fbs_objective(at, s, cfg));
    }
  }
  report(8, "gradient correctness", worst <= 1e-4 && sym <= 1e-6,
         "100 states, max rel err vs half-step oracle " + fmt("%.3g", worst) + " (tol 1e-4); symmetric-axis |g|/|f| " +
             fmt("%.3g", sym) + " (tol 1e-6)");
}

void monotone_ascent() {
  std::size_t rows = 0, bad = 0;
  for (const RunResult* r : all_runs) {
    for (std::size_t t = 1; t < r->trace.size(); ++t) {
      ++rows;
      bad += !(r->trace[t].fbs_objective_after >= r->trace[t].fbs_objective_before);
    }
  }
  report(9, "fbs monotone ascent", bad == 0,
         std::to_string(bad) + " decreases over " + std::to_string(rows) + " outer iterations in " +
             std::to_string(all_runs.size()) + " runs");
}

bool permuted_equal(const RunResult& a, const RunResult& b, const std::vector<std::size_t>& perm) {
  if (a.converged != b.converged || a.iterations_used != b.iterations_used || a.objective != b.objective) return false;
  if (a.trace.size() != b.trace.size() || a.final.fbs != b.final.fbs) return false;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    UavState ua = a.final.uavs[perm[i]];
    ua.target_index = i;
    if (!(b.final.uavs[i] == ua)) return false;
  }
  for (std::size_t t = 0; t < a.trace.size(); ++t) {
    const auto& x = a.trace[t];
    const auto& y = b.trace[t];
    if (x.iteration != y.iteration || x.eta_total != y.eta_total || x.rate_total != y.rate_total || x.fbs != y.fbs ||
        x.fbs_objective_before != y.fbs_objective_before || x.fbs_objective_after != y.fbs_objective_after ||
        x.fbs_converged != y.fbs_converged)
      return false;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      if (y.uav_positions[i] != x.uav_positions[perm[i]] || y.gammas[i] != x.gammas[perm[i]] ||
          !(y.actions_taken[i] == x.actions_taken[perm[i]]))
        return false;
    }
  }
  return true;
}

void permutation_invariance(const ScenarioConfig& reference) {
  std::mt19937_64 rng(5);
  std::vector<ScenarioConfig> configs{reference};
  configs.push_back(validate_config(table1_config(generate_targets(7, target_zone(FlightBox{}, 300), 80, 1234))));
  std::size_t trials = 0, bad = 0;
  for (const auto& cfg : configs) {
    const RunResult a = djrc_run(cfg);
    for (int k = 0; k < 3; ++k) {
      std::vector<std::size_t> perm(cfg.targets.size());
      for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
      std::shuffle(perm.begin(), perm.end(), rng);
      ScenarioConfig p = cfg;
      for (std::size_t i = 0; i < perm.size(); ++i) {
        p.targets[i] = cfg.targets[perm[i]];
        p.weights_w[i] = cfg.weights_w[perm[i]];
      }
      ++trials;
      bad += !permuted_equal(a, djrc_run(p), perm);
    }
  }
  report(10, "snapshot/permutation invariance", bad == 0,
         std::to_string(trials - bad) + "/" + std::to_string(trials) + " relabelings reproduce the permuted run bit-exactly");
}

void cli_determinism() {
  const std::string cli = UAVJRC_CLI_PATH;
  const std::string dir = UAVJRC_CONFIG_DIR;
  const auto work = std::filesystem::temp_directory_path() / "uavjrc_acceptance";
  std::filesystem::create_directories(work);
  auto out = [&](const std::string& stem) { return (work / (stem + ".csv")).string(); };
  auto invoke = [&](const std::string& tag) {
    const std::string cmd = "\"" + cli + "\" sweep --config \"" + dir + "/reference.json\" --sweep \"" + dir +
                            "/sweep_power.json\" --out \"" + out("sweep_" + tag) + "\" --summary-out \"" +
                            out("summary_" + tag) + "\" > /dev/null 2>&1";
    return std::system(cmd.c_str());
  };
  const int rc1 = invoke("a");
  const int rc2 = invoke("b");
  const std::string a = slurp(out("sweep_a")), b = slurp(out("sweep_b"));
  const std::string sa = slurp(out("summary_a")), sb = slurp(out("summary_b"));
  std::filesystem::remove_all(work);
  const bool pass = rc1 == 0 && rc2 == 0 && !a.empty() && a == b && sa == sb;
  report(11, "sweep determinism", pass,
         "exit codes " + std::to_string(rc1) + "/" + std::to_string(rc2) + ", metrics " + std::to_string(a.size()) +
             " bytes " + (a == b ? "identical" : "differ") + ", summary " + (sa == sb && !sa.empty() ? "identical" : "differ"));
}

void complexity_trend(const ScenarioConfig& reference) {
  const std::vector<std::size_t> sizes{2, 4, 8, 16, 32};
  std::vector<double> times;
  for (std::size_t m : sizes) {
    ScenarioConfig cfg = reference;
    cfg.targets = generate_targets(m, cfg.bounds, 2 * cfg.safe_distance_dg, 900 + m);
    cfg.weights_w.clear();
    cfg.algo.max_outer_iters_Tm = 20;
    cfg = validate_config(cfg);
    std::vector<double> reps;
    for (int r = 0; r < 5; ++r) {
      const auto start = Clock::now();
      const RunResult run = djrc_run(cfg);
      reps.push_back(seconds_since(start) / static_cast<double>(std::max<std::size_t>(run.iterations_used, 1)));
    }
    std::sort(reps.begin(), reps.end());
    times.push_back(reps[reps.size() / 2]);
  }
  const double ratio = times.back() / times.front();
  const double bound = std::pow(static_cast<double>(sizes.back()) / static_cast<double>(sizes.front()), 2);
  std::string per;
  for (std::size_t i = 0; i < sizes.size(); ++i) per += " M=" + std::to_string(sizes[i]) + ":" + fmt("%.3g", times[i] * 1e3) + "ms";
  report(12, "complexity trend", ratio <= bound,
         "per-iteration time" + per + "; t(32)/t(2) = " + fmt("%.1f", ratio) + " (quadratic bound " + fmt("%.0f", bound) + ")");
}

}  // namespace

int main() {
  const std::string dir = UAVJRC_CONFIG_DIR;
  const ScenarioConfig reference = validate_config(load_scenario_file(dir + "/reference.json"));
  const SweepSpec targets = load_sweep_file(dir + "/sweep_targets.json");
  const SweepSpec power = load_sweep_file(dir + "/sweep_power.json");

  physics_oracle();
  range_round_trip();

  RunResult ref_run;
  convergence_and_shape(reference, ref_run);
  all_runs.push_back(&ref_run);

  std::vector<Cell> target_cells, power_cells;
  target_sweep(reference, targets, target_cells);
  power_sweep(reference, power, power_cells);

  std::vector<std::pair<const ScenarioConfig*, const RunResult*>> froc_runs;
  for (const auto* cells : {&target_cells, &power_cells}) {
    for (const auto& c : *cells) {
      froc_runs.emplace_back(&c.cfg, &c.froc);
      all_runs.push_back(&c.djrc);
      all_runs.push_back(&c.froc);
      all_runs.push_back(&c.orfc);
    }
  }
  froc_pinning(froc_runs);
  gradient_check(reference);
  monotone_ascent();
  permutation_invariance(reference);
  cli_determinism();
  complexity_trend(reference);

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
