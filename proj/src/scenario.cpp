#include "ricsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "ricsim/rng.hpp"

namespace ricsim {

using nlohmann::json;

double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts * 1e3); }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& bound, double value) {
    std::ostringstream oss;
    oss << field << " out of " << bound << " (got " << value << ")";
    throw std::invalid_argument(oss.str());
}

void require_positive(const std::string& field, double value) {
    if (!(value > 0.0) || !std::isfinite(value)) fail(field, "(0,inf)", value);
}

void require_nonnegative(const std::string& field, double value) {
    if (!(value >= 0.0) || !std::isfinite(value)) fail(field, "[0,inf)", value);
}

}  // namespace

void SystemParams::validate() const {
    if (cv_count <= 0) fail("M", "(0,inf)", cv_count);
    if (pair_count <= 0) fail("N", "(0,inf)", pair_count);
    if (element_count <= 0) fail("L", "(0,inf)", element_count);
    require_positive("W_hz", bandwidth_hz);
    require_positive("W_xi0", noise_power_w);
    require_positive("P_m", cv_power_w);
    require_positive("P_t", v2v_power_w);
    require_positive("F_hz", mec_cpu_hz);
    require_positive("gamma_th", gamma_th);
    if (!(outage_bound > 0.0 && outage_bound < 1.0)) fail("P_out", "(0,1)", outage_bound);
    require_positive("omega", omega);
    require_positive("delta", delta);
    if (!(lambda_acc > 0.0 && lambda_acc <= 1.0)) fail("lambda", "(0,1]", lambda_acc);
    if (!(server_accuracy > 0.0 && server_accuracy <= 1.0)) fail("A_B", "(0,1]", server_accuracy);
    if (!(psi >= 1.0)) fail("psi", "[1,inf)", psi);
    if (!(beta_direct >= 2.0)) fail("beta", "[2,inf)", beta_direct);
    if (!(beta_rics >= 1.0)) fail("beta_rics", "[1,inf)", beta_rics);
    require_positive("ref_gain", ref_gain);
    require_positive("carrier_hz", carrier_hz);
    require_positive("cycles_per_bit", cycles_per_bit);
    require_nonnegative("kappa.cv_bs", kappa.cv_bs);
    require_nonnegative("kappa.v2v", kappa.v2v);
    require_nonnegative("kappa.cv_rx", kappa.cv_rx);
    require_nonnegative("kappa.tx_bs", kappa.tx_bs);
    require_nonnegative("kappa.cv_rics", kappa.cv_rics);
    require_nonnegative("kappa.rics_bs", kappa.rics_bs);
    require_nonnegative("kappa.rics_rx", kappa.rics_rx);
    if (max_outer < 1) fail("max_outer", "[1,inf)", max_outer);
    if (sdr_trials < 1) fail("sdr_trials", "[1,inf)", sdr_trials);
    if (mc_trials < 100) fail("mc_trials", "[100,inf)", mc_trials);
}

void PlacementSpec::validate() const {
    require_positive("field_radius", field_radius);
    if (bs_pos.head<2>().norm() > field_radius) fail("bs_pos", "inside field", bs_pos.head<2>().norm());
    if (rics_pos.head<2>().norm() > field_radius) fail("rics_pos", "inside field", rics_pos.head<2>().norm());
    auto height_ok = [](double h) { return h >= 0.0 && h <= 50.0; };
    if (!height_ok(bs_pos.z())) fail("bs_pos.z", "[0,50]", bs_pos.z());
    if (!height_ok(rics_pos.z())) fail("rics_pos.z", "[0,50]", rics_pos.z());
    if (!height_ok(vehicle_height_min)) fail("vehicle_height_min", "[0,50]", vehicle_height_min);
    if (!height_ok(vehicle_height_max)) fail("vehicle_height_max", "[0,50]", vehicle_height_max);
    if (vehicle_height_max < vehicle_height_min)
        fail("vehicle_height_max", ">= vehicle_height_min", vehicle_height_max);
    require_positive("v2v_max_dist", v2v_max_dist);
}

namespace {

double get_num(const json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) throw std::invalid_argument(std::string(key) + ": expected a number");
    return obj[key].get<double>();
}

Eigen::Vector3d get_vec3(const json& obj, const char* key, const Eigen::Vector3d& fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& a = obj[key];
    if (!a.is_array() || a.size() != 3) throw std::invalid_argument(std::string(key) + ": expected [x,y,z]");
    return {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
}

SystemParams parse_system(const json& sys) {
    static const std::set<std::string> known = {
        "L", "M", "N", "W_xi0_dbm", "P_m_dbm", "P_t_dbm", "F_hz", "P_out",
        "delta", "beta", "gamma_th_db", "omega", "lambda", "A_B", "psi",
        "W_hz", "beta_rics", "ref_gain_db", "carrier_hz", "kappa",
        "cycles_per_bit", "max_outer", "sdr_trials", "mc_trials"};
    for (const auto& [key, _] : sys.items()) {
        if (!known.count(key)) throw std::invalid_argument("system: unknown key \"" + key + "\"");
    }
    SystemParams p;
    p.element_count = static_cast<int>(get_num(sys, "L", p.element_count));
    p.cv_count = static_cast<int>(get_num(sys, "M", p.cv_count));
    p.pair_count = static_cast<int>(get_num(sys, "N", p.pair_count));
    p.noise_power_dbm = get_num(sys, "W_xi0_dbm", p.noise_power_dbm);
    p.noise_power_w = dbm_to_watts(p.noise_power_dbm);
    p.cv_power_w = dbm_to_watts(get_num(sys, "P_m_dbm", watts_to_dbm(p.cv_power_w)));
    p.v2v_power_w = dbm_to_watts(get_num(sys, "P_t_dbm", watts_to_dbm(p.v2v_power_w)));
    p.mec_cpu_hz = get_num(sys, "F_hz", p.mec_cpu_hz);
    p.outage_bound = get_num(sys, "P_out", p.outage_bound);
    p.delta = get_num(sys, "delta", p.delta);
    p.beta_direct = get_num(sys, "beta", p.beta_direct);
    p.gamma_th = db_to_linear(get_num(sys, "gamma_th_db", 10.0 * std::log10(p.gamma_th)));
    p.omega = get_num(sys, "omega", p.omega);
    p.lambda_acc = get_num(sys, "lambda", p.lambda_acc);
    p.server_accuracy = get_num(sys, "A_B", p.server_accuracy);
    p.psi = get_num(sys, "psi", p.psi);
    p.bandwidth_hz = get_num(sys, "W_hz", p.bandwidth_hz);
    p.beta_rics = get_num(sys, "beta_rics", p.beta_rics);
    p.ref_gain = db_to_linear(get_num(sys, "ref_gain_db", 10.0 * std::log10(p.ref_gain)));
    p.carrier_hz = get_num(sys, "carrier_hz", p.carrier_hz);
    p.cycles_per_bit = get_num(sys, "cycles_per_bit", p.cycles_per_bit);
    p.max_outer = static_cast<int>(get_num(sys, "max_outer", p.max_outer));
    p.sdr_trials = static_cast<int>(get_num(sys, "sdr_trials", p.sdr_trials));
    p.mc_trials = static_cast<int>(get_num(sys, "mc_trials", p.mc_trials));
    if (sys.contains("kappa")) {
        const auto& k = sys["kappa"];
        p.kappa.cv_bs = get_num(k, "cv_bs", p.kappa.cv_bs);
        p.kappa.v2v = get_num(k, "v2v", p.kappa.v2v);
        p.kappa.cv_rx = get_num(k, "cv_rx", p.kappa.cv_rx);
        p.kappa.tx_bs = get_num(k, "tx_bs", p.kappa.tx_bs);
        p.kappa.cv_rics = get_num(k, "cv_rics", p.kappa.cv_rics);
        p.kappa.rics_bs = get_num(k, "rics_bs", p.kappa.rics_bs);
        p.kappa.rics_rx = get_num(k, "rics_rx", p.kappa.rics_rx);
    }
    return p;
}

PlacementSpec parse_placement(const json& pl) {
    PlacementSpec spec;
    spec.bs_pos = get_vec3(pl, "bs", spec.bs_pos);
    spec.rics_pos = get_vec3(pl, "rics", spec.rics_pos);
    spec.field_radius = get_num(pl, "field_radius", spec.field_radius);
    spec.vehicle_height_min = get_num(pl, "vehicle_height_min", spec.vehicle_height_min);
    spec.vehicle_height_max = get_num(pl, "vehicle_height_max", spec.vehicle_height_max);
    spec.v2v_max_dist = get_num(pl, "v2v_max_dist", spec.v2v_max_dist);
    return spec;
}

}  // namespace

Config config_from_json_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config parse failure: ") + e.what());
    }
    if (!root.is_object()) throw std::invalid_argument("config parse failure: top level must be an object");

    Config cfg;
    if (root.contains("system")) cfg.system = parse_system(root["system"]);
    if (root.contains("placement")) cfg.placement = parse_placement(root["placement"]);
    if (root.contains("sweep")) {
        const auto& sw = root["sweep"];
        if (sw.contains("preset")) cfg.sweep.preset = sw["preset"].get<std::string>();
        if (sw.contains("axis")) cfg.sweep.axis = sw["axis"].get<std::string>();
        if (sw.contains("values")) cfg.sweep.values = sw["values"].get<std::vector<double>>();
    }
    if (root.contains("seeds")) {
        const auto& sd = root["seeds"];
        cfg.seeds.base = static_cast<std::uint64_t>(get_num(sd, "base", static_cast<double>(cfg.seeds.base)));
        cfg.seeds.count = static_cast<int>(get_num(sd, "count", cfg.seeds.count));
        if (cfg.seeds.count < 1) fail("seeds.count", "[1,inf)", cfg.seeds.count);
    }
    cfg.system.validate();
    cfg.placement.validate();
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config file not found: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return config_from_json_text(buf.str());
}

namespace {

Eigen::Vector3d draw_disk_point(Philox& rng, double radius, double h_lo, double h_hi) {
    const double r = radius * std::sqrt(rng.uniform());
    const double phi = 2.0 * M_PI * rng.uniform();
    const double h = (h_hi > h_lo) ? rng.uniform(h_lo, h_hi) : h_lo;
    return {r * std::cos(phi), r * std::sin(phi), h};
}

}  // namespace

Scenario generate_scenario(const SystemParams& params, const PlacementSpec& spec,
                           std::uint64_t seed) {
    params.validate();
    spec.validate();

    Scenario sc;
    sc.params = params;
    sc.seed = seed;
    sc.placement.bs_pos = spec.bs_pos;
    sc.placement.rics_pos = spec.rics_pos;
    sc.placement.field_radius = spec.field_radius;

    Philox place_rng(seed, streams::placement);
    const double h_lo = spec.vehicle_height_min;
    const double h_hi = spec.vehicle_height_max;
    for (int m = 0; m < params.cv_count; ++m)
        sc.placement.cv_pos.push_back(draw_disk_point(place_rng, spec.field_radius, h_lo, h_hi));
    for (int n = 0; n < params.pair_count; ++n)
        sc.placement.v2v_tx_pos.push_back(draw_disk_point(place_rng, spec.field_radius, h_lo, h_hi));
    for (int n = 0; n < params.pair_count; ++n) {
        const Eigen::Vector3d& tx = sc.placement.v2v_tx_pos[n];
        Eigen::Vector3d rx;
        // resample until the Rx also lands inside the field
        for (int attempt = 0;; ++attempt) {
            const double r = spec.v2v_max_dist * std::sqrt(place_rng.uniform());
            const double phi = 2.0 * M_PI * place_rng.uniform();
            const double h = (h_hi > h_lo) ? place_rng.uniform(h_lo, h_hi) : h_lo;
            rx = {tx.x() + r * std::cos(phi), tx.y() + r * std::sin(phi), h};
            if (rx.head<2>().norm() <= spec.field_radius || attempt > 1000) break;
        }
        sc.placement.v2v_rx_pos.push_back(rx);
    }

    Philox task_rng(seed, streams::tasks);
    for (int m = 0; m < params.cv_count; ++m) {
        TaskSpec t;
        t.size_bits = task_rng.uniform(10e6, 20e6);
        t.cycles = params.cycles_per_bit * t.size_bits;
        t.deadline_s = task_rng.uniform(0.5, 1.0);
        t.cpu_hz = task_rng.uniform(1e9, 5e9);
        sc.tasks.push_back(t);
    }
    return sc;
}

}  // namespace ricsim
