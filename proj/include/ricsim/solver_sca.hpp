#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ricsim/channel.hpp"
#include "ricsim/decision.hpp"
#include "ricsim/scenario.hpp"

namespace ricsim {

// Delays inside the exponential bound are expressed in this unit so the
// exponents stay moderate; the bound itself is computed max-shifted either
// way. Fixed, not configurable: the surrogate argmin depends (mildly) on it.
inline constexpr double kDelayScaleSeconds = 1e-3;

// log(e^tau_l + e^tau_o), a smooth upper bound on max{tau_l, tau_o} that is
// at most ln 2 above it. Arguments are unitless (pre-scaled by the caller).
double lse_delay_bound(double tau_l, double tau_o);

// Difference-of-concave split of the uplink rate in alpha:
//   rate_m(alpha) = p_m - q_m,
//   p_m = W log2(xi1 + sum_n xi2_n alpha_mn + noise),
//   q_m = W log2(sum_n xi2_n alpha_mn + noise).
struct DcParts {
    double xi1 = 0.0;      // P_m |h_mB + reflected cascade|^2
    Eigen::VectorXd xi2;   // P_t |h_nB|^2 per pair (same for every CV)
    double noise = 0.0;
    double bandwidth = 0.0;

    double p(const Eigen::VectorXd& alpha_row) const;
    double q(const Eigen::VectorXd& alpha_row) const;
    double rate(const Eigen::VectorXd& alpha_row) const { return p(alpha_row) - q(alpha_row); }
};

DcParts dc_rate_parts(const ChannelSet& channels, const RicsState& rics,
                      const SystemParams& params, int m);

// Linear outage-surrogate constraint per pair:
//   sum_m alpha_mn weight(m,n) <= bound(n),
// where weight is the mean interference power scaled by P_m and bound comes
// from the surrogate threshold.
struct OutagePolytope {
    Eigen::MatrixXd weight;  // M x N
    Eigen::VectorXd bound;   // N
};

OutagePolytope outage_polytope(const ChannelSet& channels, const RicsState& rics,
                               const SystemParams& params);

struct ScaResult {
    Eigen::MatrixXd alpha;
    std::vector<double> trace;  // sum of delay bounds (seconds) per iteration
    int iterations = 0;
    bool converged = false;
};

// One convex subproblem: minimize the summed delay bound with each q_m
// replaced by its tangent at alpha_k, over the sharing polytope. Solved by
// projected gradient with a Dykstra projection.
Eigen::MatrixXd sca_step(const Eigen::MatrixXd& alpha_k, const std::vector<DcParts>& parts,
                         const Scenario& scenario, const Eigen::VectorXd& rho,
                         const OutagePolytope& polytope);

// Sharing-matrix block: iterates sca_step until the true delay bound stalls.
// Throws "outage-infeasible scenario" when no alpha satisfies the surrogate
// constraints.
ScaResult solve_alpha(const Scenario& scenario, const ChannelSet& channels,
                      const RicsState& rics, const Eigen::VectorXd& rho,
                      const Eigen::MatrixXd& init_alpha);

}  // namespace ricsim
