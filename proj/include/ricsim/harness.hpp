#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ricsim/aioa.hpp"
#include "ricsim/channel.hpp"
#include "ricsim/decision.hpp"
#include "ricsim/scenario.hpp"

namespace ricsim {

// One result row; the CSV schema follows these fields in order.
struct RunRow {
    std::string preset;
    std::uint64_t seed = 0;
    int elements = 0;   // L
    int cvs = 0;        // M
    int pairs = 0;      // N
    double p_t_dbm = 0.0;
    double psi = 0.0;
    std::string scheme;
    int iteration = 0;
    double objective = 0.0;
    double sum_v2v_rate = 0.0;
    double max_residual = 0.0;
    double empirical_outage_max = 0.0;
    double wall_time_s = 0.0;
};

struct ExperimentOptions {
    std::string preset = "custom";
    int seed_count = 0;     // 0 = use config
    int mc_trials = 0;      // 0 = use config
    std::string out_dir;    // empty = no files written
    int threads = 0;        // 0 = RICS_THREADS env or hardware
    std::optional<std::string> dump_channels_path;  // first run only
    std::optional<std::string> dump_lifted_prefix;  // first run only
};

// Baseline offloading policies. All use no sharing and an identity-split
// surface unless fair_rics copies those from a reference decision.
Decision benchmark_scheme(const std::string& name, const Scenario& scenario,
                          const ChannelSet& channels,
                          const Decision* fair_rics = nullptr);

// Executes the configured preset over its seed list, in parallel, with a
// deterministic row order. Writes runs.csv and aggregate.csv when out_dir is
// set.
std::vector<RunRow> run_experiment(const Config& config, const ExperimentOptions& options);

void write_rows_csv(const std::vector<RunRow>& rows, const std::string& path);

struct AggregateRow {
    std::string preset;
    std::string scheme;
    int elements = 0;
    int cvs = 0;
    int pairs = 0;
    double p_t_dbm = 0.0;
    double psi = 0.0;
    int iteration = 0;
    int count = 0;
    double objective_mean = 0.0;
    double objective_median = 0.0;
    double objective_stderr = 0.0;
    double rate_mean = 0.0;
    double rate_median = 0.0;
    double rate_stderr = 0.0;
};

// Pure function of the rows; grouping is everything except the seed.
std::vector<AggregateRow> aggregate_rows(const std::vector<RunRow>& rows);
void write_aggregate_csv(const std::vector<AggregateRow>& rows, const std::string& path);

struct OutageValidationRow {
    int pair = 0;
    double empirical = 0.0;
    double std_error = 0.0;
    double surrogate_margin = 0.0;  // gamma_tilde - gamma_tilde_c
    bool within_bound = false;      // empirical <= P_out (informational)
};

std::vector<OutageValidationRow> validate_outage(const Scenario& scenario,
                                                 const ChannelSet& channels,
                                                 const Decision& decision, int trials,
                                                 std::uint64_t seed);

// fig3b machinery, exposed for tests and the acceptance suite ------------

// Greedy one-to-one spectrum assignment: each pair takes the still-unused CV
// whose interference path is weakest. Requires M >= N.
Eigen::MatrixXd forced_assignment(const ChannelSet& channels, const SystemParams& params);

// Surface configurations used by the V2V-rate comparison:
//   no_rics       refraction off (all energy reflected)
//   random_phase  random refraction phases
//   nulling       per-pair element slices aimed against the assigned
//                 interferer, amplification psi_value
// Refraction split for the schemes is fixed at kSchemeBetaT.
inline constexpr double kSchemeBetaT = 0.8;
RicsState fig3b_scheme_state(const std::string& scheme, double psi_value,
                             const Scenario& scenario, const ChannelSet& channels,
                             const Eigen::MatrixXd& alpha, std::uint64_t seed);

double sum_v2v_rate(const ChannelSet& channels, const SystemParams& params,
                    const Decision& decision);

}  // namespace ricsim
