#include "ricsim/aioa.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "ricsim/offload.hpp"
#include "ricsim/rng.hpp"
#include "ricsim/solver_fp.hpp"
#include "ricsim/solver_sca.hpp"
#include "ricsim/solver_sdr.hpp"

namespace ricsim {

using nlohmann::json;

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::map<std::string, double> residuals_of(const Scenario& scenario,
                                           const ChannelSet& channels,
                                           const Decision& decision) {
    const SystemParams& params = scenario.params;
    std::map<std::string, double> res;

    double box = 0.0, row = 0.0;
    for (int m = 0; m < params.cv_count; ++m) {
        double sum = 0.0;
        for (int n = 0; n < params.pair_count; ++n) {
            box = std::max({box, -decision.alpha(m, n), decision.alpha(m, n) - 1.0});
            sum += decision.alpha(m, n);
        }
        row = std::max(row, sum - 1.0);
    }
    res["alpha_box"] = std::max(0.0, box);
    res["alpha_row_sum"] = std::max(0.0, row);

    double rho_box = 0.0;
    for (int m = 0; m < params.cv_count; ++m)
        rho_box = std::max({rho_box, -decision.rho[m], decision.rho[m] - 1.0});
    res["rho_box"] = std::max(0.0, rho_box);

    const double gamma_c = surrogate_threshold(params);
    double outage = 0.0;
    for (int n = 0; n < params.pair_count; ++n) {
        const double tilde =
            expected_sinr_v2v(channels, decision.rics, decision.alpha, params, n);
        outage = std::max(outage, (gamma_c - tilde) / gamma_c);
    }
    res["outage_surrogate"] = std::max(0.0, outage);

    double split = 0.0;
    for (int l = 0; l < decision.rics.elements(); ++l)
        split = std::max(split,
                         std::abs(decision.rics.beta_r[l] + decision.rics.beta_t[l] - 1.0));
    res["energy_split"] = split;
    return res;
}

}  // namespace

Decision default_initial_decision(const Scenario& scenario, const ChannelSet& channels) {
    const SystemParams& params = scenario.params;
    Decision d;
    d.rho = Eigen::VectorXd::Constant(params.cv_count, 0.5);
    d.alpha = Eigen::MatrixXd::Zero(params.cv_count, params.pair_count);
    d.rics = RicsState::identity_split(params.element_count, params.psi);

    // warm start: elements round-robin across pairs, each slice aimed at the
    // pair's strongest potential interferer
    for (int n = 0; n < params.pair_count; ++n) {
        int worst_m = 0;
        double worst = -1.0;
        for (int m = 0; m < params.cv_count; ++m) {
            const double v = channels.cv_rx[m][n].path_power();
            if (v > worst) {
                worst = v;
                worst_m = m;
            }
        }
        const auto nulling = interference_nulling_phases(
            channels.cv_rx[worst_m][n].total, channels.rics_rx[n].total,
            channels.cv_rics[worst_m].total, d.rics);
        for (int l = n; l < params.element_count; l += params.pair_count)
            d.rics.theta_t[l] = nulling.theta_t[l];
    }
    return d;
}

SolveReport run_aioa(const Scenario& scenario, const ChannelSet& channels,
                     const Decision& init, std::uint64_t seed) {
    const SystemParams& params = scenario.params;
    const auto wall0 = std::chrono::steady_clock::now();

    SolveReport report;
    report.decision = init;
    double current = objective(scenario, channels, report.decision);
    report.objective_trace.push_back(current);

    try {
        for (int outer = 0; outer < params.max_outer; ++outer) {
            report.iterations = outer + 1;
            BlockTimings timing;

            auto t0 = std::chrono::steady_clock::now();
            const FpResult fp = solve_rho(scenario, channels, report.decision.alpha,
                                          report.decision.rics, report.decision.rho);
            timing.rho_s = seconds_since(t0);
            {
                Decision candidate = report.decision;
                candidate.rho = fp.rho;
                const double value = objective(scenario, channels, candidate);
                if (value >= current) {
                    report.decision = std::move(candidate);
                    current = value;
                }
            }

            t0 = std::chrono::steady_clock::now();
            const ScaResult sca =
                solve_alpha(scenario, channels, report.decision.rics, report.decision.rho,
                            report.decision.alpha);
            timing.alpha_s = seconds_since(t0);
            {
                Decision candidate = report.decision;
                candidate.alpha = sca.alpha;
                const double value = objective(scenario, channels, candidate);
                if (value >= current) {
                    report.decision = std::move(candidate);
                    current = value;
                }
            }

            t0 = std::chrono::steady_clock::now();
            const PhiResult phi = solve_phi(
                scenario, channels, report.decision.alpha, report.decision.rho,
                report.decision.rics,
                substream(seed, 0xF1 + static_cast<std::uint64_t>(outer)));
            timing.phi_s = seconds_since(t0);
            if (phi.objective >= current) {
                report.decision.rics = phi.state;
                current = phi.objective;
            }
            if (!phi.sdp_converged) report.warning = "sdp iteration cap hit";

            report.block_timings.push_back(timing);
            const double previous = report.objective_trace.back();
            report.objective_trace.push_back(current);

            const double improvement = (current - previous) / std::max(current, 1e-300);
            if (improvement < params.delta) {
                report.converged = true;
                break;
            }
        }
    } catch (const std::exception& e) {
        report.converged = false;
        report.warning = std::string("block failure: ") + e.what();
    }

    report.constraint_residuals = residuals_of(scenario, channels, report.decision);
    report.empirical_outage =
        outage_monte_carlo(scenario, channels, report.decision, params.mc_trials,
                           substream(seed, 0xAB));
    report.wall_seconds = seconds_since(wall0);
    return report;
}

Eigen::MatrixXd round_alpha(const Eigen::MatrixXd& relaxed, const Scenario& scenario,
                            const ChannelSet& channels, const Decision& decision) {
    const SystemParams& params = scenario.params;
    const double gamma_c = surrogate_threshold(params);

    struct Entry {
        double value;
        int m, n;
    };
    std::vector<Entry> entries;
    for (int m = 0; m < params.cv_count; ++m)
        for (int n = 0; n < params.pair_count; ++n)
            if (relaxed(m, n) > 1e-6) entries.push_back({relaxed(m, n), m, n});
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.value > b.value; });

    Eigen::MatrixXd rounded = Eigen::MatrixXd::Zero(params.cv_count, params.pair_count);
    std::vector<bool> cv_used(params.cv_count, false);
    std::vector<double> load(params.pair_count, 0.0);
    std::vector<double> bound(params.pair_count);
    for (int n = 0; n < params.pair_count; ++n)
        bound[n] = params.v2v_power_w * channels.v2v[n].path_power() / gamma_c -
                   params.noise_power_w;

    for (const Entry& e : entries) {
        if (cv_used[e.m]) continue;
        const double add = params.cv_power_w *
                           expected_interference_power(channels, decision.rics, e.m, e.n);
        if (load[e.n] + add > bound[e.n]) continue;
        rounded(e.m, e.n) = 1.0;
        cv_used[e.m] = true;
        load[e.n] += add;
    }
    return rounded;
}

std::string SolveReport::to_json() const {
    json j;
    j["objective_trace"] = objective_trace;
    j["converged"] = converged;
    j["iterations"] = iterations;
    j["wall_seconds"] = wall_seconds;
    j["warning"] = warning;
    json timings = json::array();
    for (const auto& t : block_timings)
        timings.push_back({{"rho_s", t.rho_s}, {"alpha_s", t.alpha_s}, {"phi_s", t.phi_s}});
    j["block_timings"] = timings;
    j["constraint_residuals"] = constraint_residuals;
    json outage = json::array();
    for (const auto& o : empirical_outage)
        outage.push_back({{"estimate", o.estimate}, {"std_error", o.std_error},
                          {"trials", o.trials}});
    j["empirical_outage"] = outage;
    j["decision"] = {
        {"rho", std::vector<double>(decision.rho.data(), decision.rho.data() + decision.rho.size())},
        {"alpha_row_major", [&] {
             std::vector<double> a;
             for (int m = 0; m < decision.alpha.rows(); ++m)
                 for (int n = 0; n < decision.alpha.cols(); ++n)
                     a.push_back(decision.alpha(m, n));
             return a;
         }()},
        {"theta_r", std::vector<double>(decision.rics.theta_r.data(),
                                        decision.rics.theta_r.data() + decision.rics.theta_r.size())},
        {"theta_t", std::vector<double>(decision.rics.theta_t.data(),
                                        decision.rics.theta_t.data() + decision.rics.theta_t.size())},
        {"beta_r", std::vector<double>(decision.rics.beta_r.data(),
                                       decision.rics.beta_r.data() + decision.rics.beta_r.size())},
        {"psi", std::vector<double>(decision.rics.psi.data(),
                                    decision.rics.psi.data() + decision.rics.psi.size())}};
    return j.dump(2);
}

}  // namespace ricsim
