#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ricsim/channel.hpp"
#include "ricsim/decision.hpp"
#include "ricsim/scenario.hpp"

namespace ricsim {

struct FpResult {
    Eigen::VectorXd rho;
    std::vector<double> trace;  // sum of safety coefficients per alternation
    int iterations = 0;
};

// Offload-ratio block: quadratic-transform fractional programming with the
// rates held fixed. The per-CV subproblems are separable; each rho update is
// solved exactly on the two smooth branches of max{tau_l, tau_o} (stationary
// points, kink and endpoints), so the alternation is deterministic and the
// objective never decreases.
FpResult solve_rho(const Scenario& scenario, const ChannelSet& channels,
                   const Eigen::MatrixXd& alpha, const RicsState& rics,
                   const Eigen::VectorXd& init_rho);

}  // namespace ricsim
