#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "uavjrc/harness.hpp"

namespace py = pybind11;
using namespace uavjrc;

namespace {

// Configs cross the boundary as JSON text, the same format the CLI reads.
ScenarioConfig config_from_text(const std::string& text) {
  return validate_config(scenario_from_json(nlohmann::json::parse(text)));
}

std::string config_to_text(const ScenarioConfig& cfg) { return scenario_to_json(cfg).dump(); }

py::dict report_to_dict(const ConstraintReport& r) {
  py::dict out;
  for (const auto& e : r.entries) {
    py::list rows;
    for (const auto& c : e.checks) {
      py::dict row;
      row["uav"] = c.uav == ConstraintCheck::npos ? py::object(py::none()) : py::object(py::int_(c.uav));
      row["pass"] = c.pass;
      row["slack"] = c.slack;
      rows.append(row);
    }
    out[py::str(to_string(e.id))] = rows;
  }
  out["all_satisfied"] = r.all_satisfied;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "UAV joint radar/communication placement: physics, DJRC solver, baselines and sweeps";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DegenerateGeometry>(m, "DegenerateGeometry", PyExc_ValueError);
  py::register_exception<InvalidPower>(m, "InvalidPower", PyExc_ValueError);
  py::register_exception<InfeasibleScenario>(m, "InfeasibleScenario", PyExc_RuntimeError);
  py::register_exception<PackingInfeasible>(m, "PackingInfeasible", PyExc_RuntimeError);

  py::class_<Position3D>(m, "Position3D")
      .def(py::init<>())
      .def(py::init([](double x, double y, double h) { return Position3D{x, y, h}; }), py::arg("x"), py::arg("y"),
           py::arg("h") = 0.0)
      .def_readwrite("x", &Position3D::x)
      .def_readwrite("y", &Position3D::y)
      .def_readwrite("h", &Position3D::h)
      .def("__eq__", [](const Position3D& a, const Position3D& b) { return a == b; })
      .def("__iter__", [](const Position3D& p) { return py::iter(py::make_tuple(p.x, p.y, p.h)); })
      .def("__repr__", [](const Position3D& p) {
        return "Position3D(" + format_double(p.x) + ", " + format_double(p.y) + ", " + format_double(p.h) + ")";
      });

  py::class_<RadarParams>(m, "RadarParams")
      .def(py::init<>())
      .def_readwrite("tx_gain_gT", &RadarParams::tx_gain_gT)
      .def_readwrite("rx_gain_gR", &RadarParams::rx_gain_gR)
      .def_readwrite("carrier_freq_fc", &RadarParams::carrier_freq_fc)
      .def_readwrite("light_speed_C", &RadarParams::light_speed_C)
      .def_readwrite("rcs_sigma", &RadarParams::rcs_sigma)
      .def_readwrite("radar_bandwidth_Br", &RadarParams::radar_bandwidth_Br)
      .def_readwrite("boltzmann_k", &RadarParams::boltzmann_k)
      .def_readwrite("noise_temp_T0", &RadarParams::noise_temp_T0)
      .def_readwrite("noise_figure_F", &RadarParams::noise_figure_F)
      .def_readwrite("probing_loss_l", &RadarParams::probing_loss_l)
      .def_readwrite("snr_min_eta", &RadarParams::snr_min_eta);

  py::class_<CommParams>(m, "CommParams")
      .def(py::init<>())
      .def_readwrite("carrier_freq_fc", &CommParams::carrier_freq_fc)
      .def_readwrite("light_speed_C", &CommParams::light_speed_C)
      .def_readwrite("comm_bandwidth_Bc", &CommParams::comm_bandwidth_Bc)
      .def_readwrite("los_prob_xi", &CommParams::los_prob_xi)
      .def_readwrite("nlos_prob_xi", &CommParams::nlos_prob_xi)
      .def_readwrite("los_atten_mu", &CommParams::los_atten_mu)
      .def_readwrite("nlos_atten_mu", &CommParams::nlos_atten_mu)
      .def_readwrite("noise_density_delta0", &CommParams::noise_density_delta0)
      .def_readwrite("rate_min_Rmin", &CommParams::rate_min_Rmin)
      .def_readwrite("fbs_rx_gain_ghR", &CommParams::fbs_rx_gain_ghR);

  m.def("radar_snr", &radar_snr, py::arg("p_radar"), py::arg("d"), py::arg("radar") = RadarParams{});
  m.def("radar_range", &radar_range, py::arg("p_radar"), py::arg("radar") = RadarParams{});
  m.def("channel_gain", &channel_gain, py::arg("d"), py::arg("comm") = CommParams{});
  m.def(
      "sinr",
      [](std::size_t idx, const std::vector<double>& p, const std::vector<double>& g, const CommParams& cp,
         double gT, const std::string& mode) { return sinr(idx, p, g, cp, gT, interference_from_string(mode)); },
      py::arg("m"), py::arg("p_comm"), py::arg("gains"), py::arg("comm") = CommParams{}, py::arg("tx_gain_gT") = 20.0,
      py::arg("interference") = "full");
  m.def("data_rate", &data_rate, py::arg("sinr"), py::arg("comm") = CommParams{});

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def_readonly("targets", &ScenarioConfig::targets)
      .def_readonly("weights_w", &ScenarioConfig::weights_w)
      .def_readonly("total_power_pt", &ScenarioConfig::total_power_pt)
      .def_readonly("radar", &ScenarioConfig::radar)
      .def_readonly("comm", &ScenarioConfig::comm)
      .def("to_json", &config_to_text);

  m.def("table1_config", [](const std::vector<Position3D>& targets) { return validate_config(table1_config(targets)); },
        py::arg("targets"), "Table-1 constants around the given targets, validated.");
  m.def("config_from_json", &config_from_text, py::arg("text"));
  m.def(
      "load_config", [](const std::string& path) { return validate_config(load_scenario_file(path)); }, py::arg("path"));

  py::class_<UavState>(m, "UavState")
      .def_readonly("pos", &UavState::pos)
      .def_readonly("gamma", &UavState::gamma)
      .def_readonly("target_index", &UavState::target_index);

  py::class_<SwarmState>(m, "SwarmState")
      .def_readonly("uavs", &SwarmState::uavs)
      .def_readonly("fbs", &SwarmState::fbs)
      .def_readonly("iteration", &SwarmState::iteration);

  m.def("initial_swarm", &initial_swarm, py::arg("config"));
  m.def(
      "check_constraints", [](const SwarmState& s, const ScenarioConfig& cfg) { return report_to_dict(check_constraints(s, cfg)); },
      py::arg("state"), py::arg("config"));

  py::class_<IterationTrace>(m, "IterationTrace")
      .def_readonly("iteration", &IterationTrace::iteration)
      .def_readonly("eta_total", &IterationTrace::eta_total)
      .def_readonly("rate_total", &IterationTrace::rate_total)
      .def_readonly("uav_positions", &IterationTrace::uav_positions)
      .def_readonly("gammas", &IterationTrace::gammas)
      .def_readonly("fbs", &IterationTrace::fbs)
      .def_readonly("fbs_objective_before", &IterationTrace::fbs_objective_before)
      .def_readonly("fbs_objective_after", &IterationTrace::fbs_objective_after)
      .def_property_readonly("actions", [](const IterationTrace& t) {
        std::vector<std::string> out;
        for (const auto& a : t.actions_taken) out.push_back(a.stalled ? "stalled" : to_string(a.kind));
        return out;
      });

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("final", &RunResult::final)
      .def_readonly("converged", &RunResult::converged)
      .def_readonly("iterations_used", &RunResult::iterations_used)
      .def_readonly("trace", &RunResult::trace)
      .def_readonly("objective", &RunResult::objective)
      .def("trace_csv", [](const RunResult& r) { return trace_csv(r); });

  m.def("djrc_run", &djrc_run, py::arg("config"), py::call_guard<py::gil_scoped_release>());
  m.def("froc_solve", &froc_solve, py::arg("config"), py::call_guard<py::gil_scoped_release>());
  m.def("orfc_solve", &orfc_solve, py::arg("config"), py::call_guard<py::gil_scoped_release>());

  m.def("generate_targets", [](std::size_t n, double min_separation, std::uint64_t seed) {
        return generate_targets(n, FlightBox{}, min_separation, seed);
      }, py::arg("n"), py::arg("min_separation"), py::arg("seed"));

  py::class_<MetricsRecord>(m, "MetricsRecord")
      .def_property_readonly("method", [](const MetricsRecord& r) { return to_string(r.method); })
      .def_readonly("sweep_kind", &MetricsRecord::sweep_kind)
      .def_readonly("sweep_value", &MetricsRecord::sweep_value)
      .def_readonly("trial", &MetricsRecord::trial)
      .def_readonly("eta_total", &MetricsRecord::eta_total)
      .def_readonly("rate_total", &MetricsRecord::rate_total)
      .def_readonly("converged", &MetricsRecord::converged)
      .def_readonly("iterations_used", &MetricsRecord::iterations_used)
      .def_readonly("wall_time", &MetricsRecord::wall_time);

  m.def(
      "run_sweep",
      [](const ScenarioConfig& base, const std::string& sweep_json) {
        const SweepSpec spec = sweep_from_json(nlohmann::json::parse(sweep_json));
        py::gil_scoped_release release;
        return run_sweep(base, spec);
      },
      py::arg("base"), py::arg("sweep_json"));
  m.def("metrics_csv", &metrics_csv, py::arg("records"));
  m.def("summary_csv", &summary_csv, py::arg("records"));
}
