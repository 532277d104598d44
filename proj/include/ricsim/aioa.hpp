#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ricsim/channel.hpp"
#include "ricsim/decision.hpp"
#include "ricsim/link.hpp"
#include "ricsim/scenario.hpp"

namespace ricsim {

struct BlockTimings {
    double rho_s = 0.0;
    double alpha_s = 0.0;
    double phi_s = 0.0;
};

struct SolveReport {
    std::vector<double> objective_trace;       // per outer iteration
    std::vector<BlockTimings> block_timings;
    bool converged = false;
    int iterations = 0;
    Decision decision;
    std::map<std::string, double> constraint_residuals;
    std::vector<OutageEstimate> empirical_outage;
    double wall_seconds = 0.0;
    std::string warning;

    std::string to_json() const;
};

// Feasible starting point: no sharing, half offloading, nulling-phase
// surface warm start aimed at each pair's strongest interferer.
Decision default_initial_decision(const Scenario& scenario, const ChannelSet& channels);

// Outer alternating loop: offload block, sharing block, surface block, each
// wrapped in an accept-if-better guard so the objective trace never
// decreases. Stops when the relative improvement falls below delta or the
// iteration cap is hit.
SolveReport run_aioa(const Scenario& scenario, const ChannelSet& channels,
                     const Decision& init, std::uint64_t seed);

// Greedy recovery of a binary sharing matrix from the relaxed one, keeping
// the row-sum and surrogate-outage constraints satisfied.
Eigen::MatrixXd round_alpha(const Eigen::MatrixXd& relaxed, const Scenario& scenario,
                            const ChannelSet& channels, const Decision& decision);

}  // namespace ricsim
