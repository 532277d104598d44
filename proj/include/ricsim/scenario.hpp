#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace ricsim {

// Rician K-factors (linear) per link class.
struct KappaSet {
    double cv_bs = 0.0;     // CV -> BS direct
    double v2v = 0.0;       // V2V desired link
    double cv_rx = 0.0;     // CV -> V2V Rx interference
    double tx_bs = 0.0;     // V2V Tx -> BS interference
    double cv_rics = 10.0;  // CV -> surface
    double rics_bs = 10.0;  // surface -> BS
    double rics_rx = 10.0;  // surface -> V2V Rx
};

// Every scalar constant of the system model. Power and noise values are
// stored in watts; the dBm forms they were configured with are kept where
// reporting needs them.
struct SystemParams {
    int cv_count = 10;      // M
    int pair_count = 10;    // N
    int element_count = 30; // L

    double bandwidth_hz = 1e8;       // W
    double noise_power_w = 1e-14;    // W*xi0, total in-band noise
    double noise_power_dbm = -110.0;
    double cv_power_w = 0.63095734448019325;   // P_m  (28 dBm)
    double v2v_power_w = 0.19952623149688797;  // P_t  (23 dBm)
    double mec_cpu_hz = 1e10;        // F

    double gamma_th = 1.9952623149688795;  // linear (3 dB)
    double outage_bound = 0.01;            // P_out
    double omega = 10.0;                   // smooth-step sharpness
    double delta = 1e-3;                   // outer-loop stop tolerance
    double lambda_acc = 0.6;               // on-board / server accuracy ratio
    double server_accuracy = 0.9;          // A_B
    double psi = 1.2;                      // refraction amplification

    double beta_direct = 4.0;  // path-loss exponent, ground links
    double beta_rics = 2.0;    // path-loss exponent, surface segments
    double ref_gain = 1e-3;    // power gain at 1 m (-30 dB)
    double carrier_hz = 5.9e9;

    KappaSet kappa;

    double cycles_per_bit = 100.0;  // task CPU demand per input bit

    // solver knobs
    int max_outer = 30;
    int sdr_trials = 200;
    int mc_trials = 1000;

    // throws std::invalid_argument naming the offending field
    void validate() const;
};

// Fixed infrastructure geometry plus the random-placement envelope.
struct PlacementSpec {
    Eigen::Vector3d bs_pos{0.0, 0.0, 25.0};
    Eigen::Vector3d rics_pos{100.0, 0.0, 30.0};
    double field_radius = 400.0;
    double vehicle_height_min = 1.5;
    double vehicle_height_max = 1.5;
    double v2v_max_dist = 25.0;  // Rx placed within this range of its Tx

    void validate() const;
};

struct Placement {
    Eigen::Vector3d bs_pos;
    Eigen::Vector3d rics_pos;
    std::vector<Eigen::Vector3d> cv_pos;
    std::vector<Eigen::Vector3d> v2v_tx_pos;
    std::vector<Eigen::Vector3d> v2v_rx_pos;
    double field_radius = 0.0;
};

struct TaskSpec {
    double size_bits = 0.0;   // s_m
    double cycles = 0.0;      // c_m
    double deadline_s = 0.0;  // sigma_m (reported only, not a constraint)
    double cpu_hz = 0.0;      // f_m, on-board CPU rate
};

struct SweepPlan {
    std::string preset = "custom";       // fig3a | fig3b | fig3c | custom
    std::string axis;                    // custom sweeps: system field name
    std::vector<double> values;
};

struct SeedPolicy {
    std::uint64_t base = 1;
    int count = 20;
};

struct Config {
    SystemParams system;
    PlacementSpec placement;
    SweepPlan sweep;
    SeedPolicy seeds;
};

// Parses and validates the JSON config file. Unspecified fields take the
// defaults above; unknown keys inside "system" are rejected.
Config load_config(const std::string& path);
Config config_from_json_text(const std::string& text);

struct Scenario {
    SystemParams params;
    Placement placement;
    std::vector<TaskSpec> tasks;
    std::uint64_t seed = 0;
};

// Deterministic per (params, spec, seed). Vehicles are uniform on the disk,
// task sizes uniform in [10,20] Mbit, on-board CPU rates uniform in [1,5] GHz.
Scenario generate_scenario(const SystemParams& params, const PlacementSpec& spec,
                           std::uint64_t seed);

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);
double db_to_linear(double db);

}  // namespace ricsim
