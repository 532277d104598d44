#include "ricsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "ricsim/link.hpp"
#include "ricsim/offload.hpp"
#include "ricsim/rng.hpp"
#include "ricsim/solver_sdr.hpp"

namespace ricsim {

namespace {

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const size_t k = v.size() / 2;
    return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("RICS_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

double max_outage(const std::vector<OutageEstimate>& estimates) {
    double v = 0.0;
    for (const auto& e : estimates) v = std::max(v, e.estimate);
    return v;
}

}  // namespace

double sum_v2v_rate(const ChannelSet& channels, const SystemParams& params,
                    const Decision& decision) {
    double total = 0.0;
    for (int n = 0; n < params.pair_count; ++n) {
        const double gamma = sinr_v2v(channels, decision.rics, decision.alpha, params, n);
        total += rate_bps(gamma, params.bandwidth_hz);
    }
    return total;
}

Decision benchmark_scheme(const std::string& name, const Scenario& scenario,
                          const ChannelSet& channels,
                          const Decision* fair_rics) {
    const SystemParams& params = scenario.params;
    Decision d;
    d.alpha = Eigen::MatrixXd::Zero(params.cv_count, params.pair_count);
    d.rics = RicsState::identity_split(params.element_count, params.psi);
    if (fair_rics != nullptr) {
        d.alpha = fair_rics->alpha;
        d.rics = fair_rics->rics;
    }

    if (name == "total") {
        d.rho = Eigen::VectorXd::Ones(params.cv_count);
    } else if (name == "local") {
        d.rho = Eigen::VectorXd::Zero(params.cv_count);
    } else if (name == "random") {
        Philox rng(scenario.seed, streams::scheme);
        d.rho.resize(params.cv_count);
        for (int m = 0; m < params.cv_count; ++m)
            d.rho[m] = rng.uniform() < 0.5 ? 0.0 : 1.0;
    } else {
        throw std::invalid_argument("unknown benchmark scheme: " + name);
    }
    (void)channels;
    return d;
}

std::vector<OutageValidationRow> validate_outage(const Scenario& scenario,
                                                 const ChannelSet& channels,
                                                 const Decision& decision, int trials,
                                                 std::uint64_t seed) {
    const SystemParams& params = scenario.params;
    const double gamma_c = surrogate_threshold(params);
    const auto estimates = outage_monte_carlo(scenario, channels, decision, trials, seed);
    std::vector<OutageValidationRow> rows(params.pair_count);
    for (int n = 0; n < params.pair_count; ++n) {
        rows[n].pair = n;
        rows[n].empirical = estimates[n].estimate;
        rows[n].std_error = estimates[n].std_error;
        rows[n].surrogate_margin =
            expected_sinr_v2v(channels, decision.rics, decision.alpha, params, n) - gamma_c;
        rows[n].within_bound = estimates[n].estimate <= params.outage_bound;
    }
    return rows;
}

Eigen::MatrixXd forced_assignment(const ChannelSet& channels, const SystemParams& params) {
    if (params.cv_count < params.pair_count)
        throw std::invalid_argument("forced_assignment: needs M >= N");
    Eigen::MatrixXd alpha =
        Eigen::MatrixXd::Zero(params.cv_count, params.pair_count);
    std::vector<bool> used(params.cv_count, false);
    for (int n = 0; n < params.pair_count; ++n) {
        int pick = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int m = 0; m < params.cv_count; ++m) {
            if (used[m]) continue;
            const double v = channels.cv_rx[m][n].path_power();
            if (v < best) {
                best = v;
                pick = m;
            }
        }
        used[pick] = true;
        alpha(pick, n) = 1.0;
    }
    return alpha;
}

RicsState fig3b_scheme_state(const std::string& scheme, double psi_value,
                             const Scenario& scenario, const ChannelSet& channels,
                             const Eigen::MatrixXd& alpha, std::uint64_t seed) {
    const SystemParams& params = scenario.params;
    const int len = params.element_count;

    if (scheme == "no_rics") {
        RicsState s = RicsState::identity_split(len, 1.0);
        s.beta_r.setOnes();
        s.beta_t.setZero();
        return s;
    }

    RicsState s = RicsState::identity_split(len, psi_value);
    s.beta_r.setConstant(1.0 - kSchemeBetaT);
    s.beta_t.setConstant(kSchemeBetaT);

    if (scheme == "random_phase") {
        Philox rng(seed, substream(streams::scheme, 1));
        for (int l = 0; l < len; ++l) s.theta_t[l] = rng.uniform(0.0, 2.0 * M_PI);
        return s;
    }
    if (scheme == "nulling") {
        // element slice l = n, n+N, ... serves pair n against its assigned CV
        for (int n = 0; n < params.pair_count; ++n) {
            int assigned = -1;
            for (int m = 0; m < params.cv_count; ++m)
                if (alpha(m, n) > 0.0) assigned = m;
            if (assigned < 0) continue;
            const auto nulling = interference_nulling_phases(
                channels.cv_rx[assigned][n].total, channels.rics_rx[n].total,
                channels.cv_rics[assigned].total, s);
            for (int l = n; l < len; l += params.pair_count)
                s.theta_t[l] = nulling.theta_t[l];
        }
        return s;
    }
    throw std::invalid_argument("unknown fig3b scheme: " + scheme);
}

namespace {

struct Job {
    std::function<std::vector<RunRow>()> work;
};

std::vector<RunRow> run_jobs(std::vector<Job>& jobs, int threads) {
    std::vector<std::vector<RunRow>> slots(jobs.size());
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            try {
                slots[i] = jobs[i].work();
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const int n = std::max(1, std::min<int>(threads, static_cast<int>(jobs.size())));
    for (int t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);

    std::vector<RunRow> rows;
    for (auto& s : slots)
        rows.insert(rows.end(), s.begin(), s.end());
    return rows;
}

RunRow base_row(const std::string& preset, const SystemParams& params, std::uint64_t seed) {
    RunRow row;
    row.preset = preset;
    row.seed = seed;
    row.elements = params.element_count;
    row.cvs = params.cv_count;
    row.pairs = params.pair_count;
    row.p_t_dbm = watts_to_dbm(params.v2v_power_w);
    row.psi = params.psi;
    return row;
}

std::vector<RunRow> aioa_rows(const std::string& preset, const SystemParams& params,
                              const PlacementSpec& placement, std::uint64_t seed,
                              bool per_iteration, int mc_trials) {
    SystemParams p = params;
    if (mc_trials > 0) p.mc_trials = mc_trials;
    const Scenario scenario = generate_scenario(p, placement, seed);
    const ChannelSet channels = draw_channels(scenario.placement, p, seed);
    const Decision init = default_initial_decision(scenario, channels);
    const SolveReport report = run_aioa(scenario, channels, init, seed);

    double residual = 0.0;
    for (const auto& [_, v] : report.constraint_residuals) residual = std::max(residual, v);

    std::vector<RunRow> rows;
    const int first = per_iteration ? 1 : report.iterations;
    for (int it = first; it <= report.iterations; ++it) {
        RunRow row = base_row(preset, p, seed);
        row.scheme = "aioa";
        row.iteration = it;
        row.objective = report.objective_trace[std::min<size_t>(
            it, report.objective_trace.size() - 1)];
        row.sum_v2v_rate = sum_v2v_rate(channels, p, report.decision);
        row.max_residual = residual;
        row.empirical_outage_max = max_outage(report.empirical_outage);
        row.wall_time_s = report.wall_seconds;
        rows.push_back(row);
    }
    return rows;
}

std::vector<RunRow> fig3c_rows(const SystemParams& params, const PlacementSpec& placement,
                               std::uint64_t seed, int mc_trials) {
    std::vector<RunRow> rows = aioa_rows("fig3c", params, placement, seed, false, mc_trials);

    SystemParams p = params;
    if (mc_trials > 0) p.mc_trials = mc_trials;
    const Scenario scenario = generate_scenario(p, placement, seed);
    const ChannelSet channels = draw_channels(scenario.placement, p, seed);

    // the three baselines share alpha and surface state, so one Monte-Carlo
    // covers them
    double shared_outage = -1.0;
    for (const char* name : {"total", "local", "random"}) {
        const auto t0 = std::chrono::steady_clock::now();
        const Decision d = benchmark_scheme(name, scenario, channels);
        if (shared_outage < 0.0)
            shared_outage = max_outage(outage_monte_carlo(scenario, channels, d,
                                                          p.mc_trials,
                                                          substream(seed, 0xBE)));
        RunRow row = base_row("fig3c", p, seed);
        row.scheme = name;
        row.iteration = 1;
        row.objective = objective(scenario, channels, d);
        row.sum_v2v_rate = sum_v2v_rate(channels, p, d);
        row.max_residual = 0.0;
        row.empirical_outage_max = shared_outage;
        row.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rows.push_back(row);
    }
    return rows;
}

std::vector<RunRow> fig3b_rows(const SystemParams& params, const PlacementSpec& placement,
                               std::uint64_t seed, int mc_trials) {
    SystemParams p = params;
    p.pair_count = std::min(params.pair_count, 5);  // the comparison uses N=5
    const int trials = mc_trials > 0 ? mc_trials : 200;

    std::vector<RunRow> rows;
    const std::vector<double> p_t_sweep = {20.0, 22.0, 24.0, 26.0};
    const std::vector<double> psi_sweep = {1.2, 1.5};

    auto emit = [&](const SystemParams& sys, const std::string& scheme, double psi_value) {
        const auto t0 = std::chrono::steady_clock::now();
        const Scenario scenario = generate_scenario(sys, placement, seed);
        const ChannelSet channels = draw_channels(scenario.placement, sys, seed);
        Decision d;
        d.rho = Eigen::VectorXd::Constant(sys.cv_count, 0.5);
        d.alpha = forced_assignment(channels, sys);
        d.rics = fig3b_scheme_state(scheme, psi_value, scenario, channels, d.alpha, seed);

        RunRow row = base_row("fig3b", sys, seed);
        row.psi = psi_value;
        row.scheme = scheme;
        row.iteration = 1;
        row.objective = objective(scenario, channels, d);
        row.sum_v2v_rate = sum_v2v_rate(channels, sys, d);
        row.empirical_outage_max =
            max_outage(outage_monte_carlo(scenario, channels, d, std::max(trials, 100),
                                          substream(seed, 0x3B)));
        row.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rows.push_back(row);
    };

    for (double p_t : p_t_sweep) {
        SystemParams sys = p;
        sys.v2v_power_w = dbm_to_watts(p_t);
        emit(sys, "no_rics", 1.0);
        emit(sys, "random_phase", p.psi);
        emit(sys, "nulling", 1.0);  // nulling with psi=1 baseline
        for (double psi : psi_sweep) emit(sys, "nulling", psi);
    }
    // amplification grid at the nominal transmit power
    for (double psi = 1.0; psi <= 2.0 + 1e-9; psi += 0.1) emit(p, "nulling", psi);
    return rows;
}

}  // namespace

std::vector<RunRow> run_experiment(const Config& config, const ExperimentOptions& options) {
    const std::string preset = options.preset.empty() ? config.sweep.preset : options.preset;
    const int seeds = options.seed_count > 0 ? options.seed_count : config.seeds.count;
    const int threads = resolve_threads(options.threads);
    const int mc_trials = options.mc_trials;

    std::vector<Job> jobs;
    for (int i = 0; i < seeds; ++i) {
        const std::uint64_t seed = config.seeds.base + static_cast<std::uint64_t>(i);
        if (preset == "fig3a") {
            for (int elements : {30, 64}) {
                SystemParams p = config.system;
                p.element_count = elements;
                jobs.push_back({[p, placement = config.placement, seed, mc_trials] {
                    return aioa_rows("fig3a", p, placement, seed, true, mc_trials);
                }});
            }
        } else if (preset == "fig3b") {
            jobs.push_back({[p = config.system, placement = config.placement, seed, mc_trials] {
                return fig3b_rows(p, placement, seed, mc_trials);
            }});
        } else if (preset == "fig3c") {
            for (int cvs = 2; cvs <= 16; ++cvs) {
                SystemParams p = config.system;
                p.cv_count = cvs;
                jobs.push_back({[p, placement = config.placement, seed, mc_trials] {
                    return fig3c_rows(p, placement, seed, mc_trials);
                }});
            }
        } else if (preset == "custom") {
            if (config.sweep.axis.empty()) {
                jobs.push_back({[p = config.system, placement = config.placement, seed,
                                 mc_trials] {
                    return aioa_rows("custom", p, placement, seed, false, mc_trials);
                }});
            } else {
                for (double value : config.sweep.values) {
                    SystemParams p = config.system;
                    if (config.sweep.axis == "L") p.element_count = static_cast<int>(value);
                    else if (config.sweep.axis == "M") p.cv_count = static_cast<int>(value);
                    else if (config.sweep.axis == "N") p.pair_count = static_cast<int>(value);
                    else if (config.sweep.axis == "P_t_dbm") p.v2v_power_w = dbm_to_watts(value);
                    else if (config.sweep.axis == "P_m_dbm") p.cv_power_w = dbm_to_watts(value);
                    else if (config.sweep.axis == "psi") p.psi = value;
                    else throw std::invalid_argument("invalid sweep axis: " + config.sweep.axis);
                    jobs.push_back({[p, placement = config.placement, seed, mc_trials] {
                        return aioa_rows("custom", p, placement, seed, false, mc_trials);
                    }});
                }
            }
        } else {
            throw std::invalid_argument("unknown preset: " + preset);
        }
    }

    std::vector<RunRow> rows = run_jobs(jobs, threads);

    if (options.dump_channels_path || options.dump_lifted_prefix) {
        const Scenario scenario =
            generate_scenario(config.system, config.placement, config.seeds.base);
        const ChannelSet channels =
            draw_channels(scenario.placement, config.system, config.seeds.base);
        if (options.dump_channels_path)
            dump_channels_csv(channels, *options.dump_channels_path);
        if (options.dump_lifted_prefix) {
            const Decision init = default_initial_decision(scenario, channels);
            const LiftedMatrices lifted =
                solve_sdp(channels, config.system, init.alpha, init.rics);
            dump_lifted_csv(lifted.v_r, *options.dump_lifted_prefix + "_vr.csv");
            dump_lifted_csv(lifted.v_t, *options.dump_lifted_prefix + "_vt.csv");
        }
    }

    if (!options.out_dir.empty()) {
        std::filesystem::create_directories(options.out_dir);
        write_rows_csv(rows, options.out_dir + "/runs.csv");
        write_aggregate_csv(aggregate_rows(rows), options.out_dir + "/aggregate.csv");
    }
    return rows;
}

void write_rows_csv(const std::vector<RunRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << "preset,seed,L,M,N,P_t_dbm,psi,scheme,iteration,objective,sum_v2v_rate,"
           "max_residual,empirical_outage_max,wall_time_s\n";
    out.precision(12);
    for (const auto& r : rows) {
        out << r.preset << ',' << r.seed << ',' << r.elements << ',' << r.cvs << ','
            << r.pairs << ',' << r.p_t_dbm << ',' << r.psi << ',' << r.scheme << ','
            << r.iteration << ',' << r.objective << ',' << r.sum_v2v_rate << ','
            << r.max_residual << ',' << r.empirical_outage_max << ',' << r.wall_time_s
            << '\n';
    }
}

std::vector<AggregateRow> aggregate_rows(const std::vector<RunRow>& rows) {
    struct Key {
        std::string preset, scheme;
        int elements, cvs, pairs, iteration;
        double p_t_dbm, psi;
        bool operator<(const Key& o) const {
            return std::tie(preset, scheme, elements, cvs, pairs, iteration, p_t_dbm, psi) <
                   std::tie(o.preset, o.scheme, o.elements, o.cvs, o.pairs, o.iteration,
                            o.p_t_dbm, o.psi);
        }
    };
    std::map<Key, std::pair<std::vector<double>, std::vector<double>>> groups;
    for (const auto& r : rows) {
        const Key key{r.preset, r.scheme, r.elements, r.cvs, r.pairs,
                      r.iteration, r.p_t_dbm, r.psi};
        groups[key].first.push_back(r.objective);
        groups[key].second.push_back(r.sum_v2v_rate);
    }

    auto mean_of = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / v.size();
    };
    auto stderr_of = [&](const std::vector<double>& v) {
        if (v.size() < 2) return 0.0;
        const double mu = mean_of(v);
        double acc = 0.0;
        for (double x : v) acc += (x - mu) * (x - mu);
        return std::sqrt(acc / (v.size() - 1) / v.size());
    };

    std::vector<AggregateRow> out;
    for (const auto& [key, vals] : groups) {
        AggregateRow a;
        a.preset = key.preset;
        a.scheme = key.scheme;
        a.elements = key.elements;
        a.cvs = key.cvs;
        a.pairs = key.pairs;
        a.p_t_dbm = key.p_t_dbm;
        a.psi = key.psi;
        a.iteration = key.iteration;
        a.count = static_cast<int>(vals.first.size());
        a.objective_mean = mean_of(vals.first);
        a.objective_median = median_of(vals.first);
        a.objective_stderr = stderr_of(vals.first);
        a.rate_mean = mean_of(vals.second);
        a.rate_median = median_of(vals.second);
        a.rate_stderr = stderr_of(vals.second);
        out.push_back(a);
    }
    return out;
}

void write_aggregate_csv(const std::vector<AggregateRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << "preset,scheme,L,M,N,P_t_dbm,psi,iteration,count,objective_mean,"
           "objective_median,objective_stderr,rate_mean,rate_median,rate_stderr\n";
    out.precision(12);
    for (const auto& a : rows) {
        out << a.preset << ',' << a.scheme << ',' << a.elements << ',' << a.cvs << ','
            << a.pairs << ',' << a.p_t_dbm << ',' << a.psi << ',' << a.iteration << ','
            << a.count << ',' << a.objective_mean << ',' << a.objective_median << ','
            << a.objective_stderr << ',' << a.rate_mean << ',' << a.rate_median << ','
            << a.rate_stderr << '\n';
    }
}

}  // namespace ricsim
