#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ricsim/aioa.hpp"
#include "ricsim/channel.hpp"
#include "ricsim/harness.hpp"
#include "ricsim/link.hpp"
#include "ricsim/numopt.hpp"
#include "ricsim/offload.hpp"
#include "ricsim/rics.hpp"
#include "ricsim/scenario.hpp"
#include "ricsim/solver_fp.hpp"
#include "ricsim/solver_sca.hpp"
#include "ricsim/solver_sdr.hpp"

namespace py = pybind11;
using namespace ricsim;

PYBIND11_MODULE(_ricsim, m) {
    m.doc() = "RICS-assisted vehicular offloading simulator core";

    py::class_<KappaSet>(m, "KappaSet")
        .def(py::init<>())
        .def_readwrite("cv_bs", &KappaSet::cv_bs)
        .def_readwrite("v2v", &KappaSet::v2v)
        .def_readwrite("cv_rx", &KappaSet::cv_rx)
        .def_readwrite("tx_bs", &KappaSet::tx_bs)
        .def_readwrite("cv_rics", &KappaSet::cv_rics)
        .def_readwrite("rics_bs", &KappaSet::rics_bs)
        .def_readwrite("rics_rx", &KappaSet::rics_rx);

    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init<>())
        .def_readwrite("cv_count", &SystemParams::cv_count)
        .def_readwrite("pair_count", &SystemParams::pair_count)
        .def_readwrite("element_count", &SystemParams::element_count)
        .def_readwrite("bandwidth_hz", &SystemParams::bandwidth_hz)
        .def_readwrite("noise_power_w", &SystemParams::noise_power_w)
        .def_readwrite("cv_power_w", &SystemParams::cv_power_w)
        .def_readwrite("v2v_power_w", &SystemParams::v2v_power_w)
        .def_readwrite("mec_cpu_hz", &SystemParams::mec_cpu_hz)
        .def_readwrite("gamma_th", &SystemParams::gamma_th)
        .def_readwrite("outage_bound", &SystemParams::outage_bound)
        .def_readwrite("omega", &SystemParams::omega)
        .def_readwrite("delta", &SystemParams::delta)
        .def_readwrite("lambda_acc", &SystemParams::lambda_acc)
        .def_readwrite("server_accuracy", &SystemParams::server_accuracy)
        .def_readwrite("psi", &SystemParams::psi)
        .def_readwrite("beta_direct", &SystemParams::beta_direct)
        .def_readwrite("beta_rics", &SystemParams::beta_rics)
        .def_readwrite("ref_gain", &SystemParams::ref_gain)
        .def_readwrite("carrier_hz", &SystemParams::carrier_hz)
        .def_readwrite("kappa", &SystemParams::kappa)
        .def_readwrite("cycles_per_bit", &SystemParams::cycles_per_bit)
        .def_readwrite("max_outer", &SystemParams::max_outer)
        .def_readwrite("sdr_trials", &SystemParams::sdr_trials)
        .def_readwrite("mc_trials", &SystemParams::mc_trials)
        .def("validate", &SystemParams::validate);

    py::class_<PlacementSpec>(m, "PlacementSpec")
        .def(py::init<>())
        .def_readwrite("bs_pos", &PlacementSpec::bs_pos)
        .def_readwrite("rics_pos", &PlacementSpec::rics_pos)
        .def_readwrite("field_radius", &PlacementSpec::field_radius)
        .def_readwrite("vehicle_height_min", &PlacementSpec::vehicle_height_min)
        .def_readwrite("vehicle_height_max", &PlacementSpec::vehicle_height_max)
        .def_readwrite("v2v_max_dist", &PlacementSpec::v2v_max_dist);

    py::class_<Placement>(m, "Placement")
        .def_readonly("bs_pos", &Placement::bs_pos)
        .def_readonly("rics_pos", &Placement::rics_pos)
        .def_readonly("cv_pos", &Placement::cv_pos)
        .def_readonly("v2v_tx_pos", &Placement::v2v_tx_pos)
        .def_readonly("v2v_rx_pos", &Placement::v2v_rx_pos)
        .def_readonly("field_radius", &Placement::field_radius);

    py::class_<TaskSpec>(m, "TaskSpec")
        .def(py::init<>())
        .def_readwrite("size_bits", &TaskSpec::size_bits)
        .def_readwrite("cycles", &TaskSpec::cycles)
        .def_readwrite("deadline_s", &TaskSpec::deadline_s)
        .def_readwrite("cpu_hz", &TaskSpec::cpu_hz);

    py::class_<SweepPlan>(m, "SweepPlan")
        .def_readwrite("preset", &SweepPlan::preset)
        .def_readwrite("axis", &SweepPlan::axis)
        .def_readwrite("values", &SweepPlan::values);

    py::class_<SeedPolicy>(m, "SeedPolicy")
        .def_readwrite("base", &SeedPolicy::base)
        .def_readwrite("count", &SeedPolicy::count);

    py::class_<Config>(m, "Config")
        .def(py::init<>())
        .def_readwrite("system", &Config::system)
        .def_readwrite("placement", &Config::placement)
        .def_readwrite("sweep", &Config::sweep)
        .def_readwrite("seeds", &Config::seeds);

    py::class_<Scenario>(m, "Scenario")
        .def_readonly("params", &Scenario::params)
        .def_readonly("placement", &Scenario::placement)
        .def_readonly("tasks", &Scenario::tasks)
        .def_readonly("seed", &Scenario::seed);

    py::class_<ChannelSet>(m, "ChannelSet");

    py::class_<RicsState>(m, "RicsState")
        .def(py::init<>())
        .def_readwrite("theta_r", &RicsState::theta_r)
        .def_readwrite("theta_t", &RicsState::theta_t)
        .def_readwrite("beta_r", &RicsState::beta_r)
        .def_readwrite("beta_t", &RicsState::beta_t)
        .def_readwrite("psi", &RicsState::psi)
        .def("validate", &RicsState::validate)
        .def_static("identity_split", &RicsState::identity_split);

    py::class_<Decision>(m, "Decision")
        .def(py::init<>())
        .def_readwrite("rho", &Decision::rho)
        .def_readwrite("alpha", &Decision::alpha)
        .def_readwrite("rics", &Decision::rics);

    py::class_<Delays>(m, "Delays")
        .def_readonly("local_s", &Delays::local_s)
        .def_readonly("offload_s", &Delays::offload_s)
        .def_readonly("total_s", &Delays::total_s);

    py::class_<LinkMetrics>(m, "LinkMetrics")
        .def_readonly("gamma_b", &LinkMetrics::gamma_b)
        .def_readonly("rate_b", &LinkMetrics::rate_b)
        .def_readonly("gamma_v2v", &LinkMetrics::gamma_v2v)
        .def_readonly("rate_v2v", &LinkMetrics::rate_v2v)
        .def_readonly("gamma_tilde", &LinkMetrics::gamma_tilde)
        .def_readonly("gamma_tilde_c", &LinkMetrics::gamma_tilde_c);

    py::class_<OutageEstimate>(m, "OutageEstimate")
        .def_readonly("estimate", &OutageEstimate::estimate)
        .def_readonly("std_error", &OutageEstimate::std_error)
        .def_readonly("trials", &OutageEstimate::trials);

    py::class_<BlockTimings>(m, "BlockTimings")
        .def_readonly("rho_s", &BlockTimings::rho_s)
        .def_readonly("alpha_s", &BlockTimings::alpha_s)
        .def_readonly("phi_s", &BlockTimings::phi_s);

    py::class_<SolveReport>(m, "SolveReport")
        .def_readonly("objective_trace", &SolveReport::objective_trace)
        .def_readonly("block_timings", &SolveReport::block_timings)
        .def_readonly("converged", &SolveReport::converged)
        .def_readonly("iterations", &SolveReport::iterations)
        .def_readonly("decision", &SolveReport::decision)
        .def_readonly("constraint_residuals", &SolveReport::constraint_residuals)
        .def_readonly("empirical_outage", &SolveReport::empirical_outage)
        .def_readonly("wall_seconds", &SolveReport::wall_seconds)
        .def_readonly("warning", &SolveReport::warning)
        .def("to_json", &SolveReport::to_json);

    py::class_<RunRow>(m, "RunRow")
        .def_readonly("preset", &RunRow::preset)
        .def_readonly("seed", &RunRow::seed)
        .def_readonly("elements", &RunRow::elements)
        .def_readonly("cvs", &RunRow::cvs)
        .def_readonly("pairs", &RunRow::pairs)
        .def_readonly("p_t_dbm", &RunRow::p_t_dbm)
        .def_readonly("psi", &RunRow::psi)
        .def_readonly("scheme", &RunRow::scheme)
        .def_readonly("iteration", &RunRow::iteration)
        .def_readonly("objective", &RunRow::objective)
        .def_readonly("sum_v2v_rate", &RunRow::sum_v2v_rate)
        .def_readonly("max_residual", &RunRow::max_residual)
        .def_readonly("empirical_outage_max", &RunRow::empirical_outage_max)
        .def_readonly("wall_time_s", &RunRow::wall_time_s);

    py::class_<FpResult>(m, "FpResult")
        .def_readonly("rho", &FpResult::rho)
        .def_readonly("trace", &FpResult::trace)
        .def_readonly("iterations", &FpResult::iterations);

    py::class_<ScaResult>(m, "ScaResult")
        .def_readonly("alpha", &ScaResult::alpha)
        .def_readonly("trace", &ScaResult::trace)
        .def_readonly("iterations", &ScaResult::iterations)
        .def_readonly("converged", &ScaResult::converged);

    py::class_<PhiResult>(m, "PhiResult")
        .def_readonly("state", &PhiResult::state)
        .def_readonly("objective", &PhiResult::objective)
        .def_readonly("sdp_objective", &PhiResult::sdp_objective)
        .def_readonly("sdp_converged", &PhiResult::sdp_converged)
        .def_readonly("randomize_fallback", &PhiResult::randomize_fallback)
        .def_readonly("kept_init", &PhiResult::kept_init);

    m.def("load_config", &load_config, py::arg("path"));
    m.def("config_from_json_text", &config_from_json_text, py::arg("text"));
    m.def("generate_scenario", &generate_scenario, py::arg("params"), py::arg("placement"),
          py::arg("seed"));
    m.def("draw_channels", &draw_channels, py::arg("placement"), py::arg("params"),
          py::arg("seed"));
    m.def("los_steering", &los_steering);
    m.def("phi_r", &phi_r);
    m.def("phi_t", &phi_t);
    m.def("sinr_uplink", &sinr_uplink);
    m.def("sinr_v2v", &sinr_v2v);
    m.def("rate_bps", &rate_bps);
    m.def("smooth_step", &smooth_step);
    m.def("expected_interference_gain", &expected_interference_gain);
    m.def("expected_sinr_v2v", &expected_sinr_v2v);
    m.def("surrogate_threshold", &surrogate_threshold);
    m.def("compute_link_metrics", &compute_link_metrics);
    m.def("outage_monte_carlo", &outage_monte_carlo);
    m.def("delays", &delays);
    m.def("accuracy", &accuracy);
    m.def("safety_coefficient", &safety_coefficient);
    m.def("tdm_uplink_share", &tdm_uplink_share);
    m.def("objective", &objective);
    m.def("per_cv_safety", &per_cv_safety);
    m.def("solve_rho", &solve_rho);
    m.def("solve_alpha", &solve_alpha);
    m.def("solve_phi", &solve_phi);
    m.def("default_initial_decision", &default_initial_decision);
    m.def("run_aioa", &run_aioa);
    m.def("round_alpha", &round_alpha);
    m.def("benchmark_scheme",
          [](const std::string& name, const Scenario& scenario, const ChannelSet& channels) {
              return benchmark_scheme(name, scenario, channels);
          });
    m.def("sum_v2v_rate", &sum_v2v_rate);
    m.def("run_experiment", &run_experiment);

    py::class_<ExperimentOptions>(m, "ExperimentOptions")
        .def(py::init<>())
        .def_readwrite("preset", &ExperimentOptions::preset)
        .def_readwrite("seed_count", &ExperimentOptions::seed_count)
        .def_readwrite("mc_trials", &ExperimentOptions::mc_trials)
        .def_readwrite("out_dir", &ExperimentOptions::out_dir)
        .def_readwrite("threads", &ExperimentOptions::threads);
}
