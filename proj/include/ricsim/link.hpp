#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "ricsim/channel.hpp"
#include "ricsim/decision.hpp"
#include "ricsim/rics.hpp"
#include "ricsim/scenario.hpp"

namespace ricsim {

// Reflected cascade seen by the BS for CV m: sum_l h_RB_l phi_r_l h_mR_l.
std::complex<double> uplink_cascade(const ChannelSet& ch, const RicsState& rics, int m);

// Refracted cascade seen by Rx n from CV m: sum_l conj(h_Rn_l) phi_t_l h_mR_l.
std::complex<double> v2v_cascade(const ChannelSet& ch, const RicsState& rics, int m, int n);

// Uplink SINR of CV m under sharing matrix alpha (linear).
double sinr_uplink(const ChannelSet& ch, const RicsState& rics,
                   const Eigen::MatrixXd& alpha, const SystemParams& params, int m);

// V2V SINR of pair n (linear).
double sinr_v2v(const ChannelSet& ch, const RicsState& rics,
                const Eigen::MatrixXd& alpha, const SystemParams& params, int n);

double rate_bps(double sinr, double bandwidth_hz);

// Logistic step approximation 1/(1+e^{-omega x}); overflow-safe.
double smooth_step(double x, double omega);

// Mean interference power E|h_mn + cascade|^2 normalized by the direct
// link's path-loss power. Exact under the stored Rician split for any
// refraction diagonal, so it agrees with a Monte-Carlo over the NLoS parts.
double expected_interference_gain(const ChannelSet& ch, const RicsState& rics, int m, int n);

// Unnormalized form of the same mean, in watts per unit transmit power.
double expected_interference_power(const ChannelSet& ch, const RicsState& rics, int m, int n);

// Mean V2V SINR of pair n under the surrogate outage model.
double expected_sinr_v2v(const ChannelSet& ch, const RicsState& rics,
                         const Eigen::MatrixXd& alpha, const SystemParams& params, int n);

// Surrogate threshold gamma_th + (1/omega) ln(1/P_out - 1).
double surrogate_threshold(const SystemParams& params);

struct LinkMetrics {
    Eigen::VectorXd gamma_b;      // uplink SINR per CV
    Eigen::VectorXd rate_b;       // W log2(1+gamma_b)
    Eigen::VectorXd gamma_v2v;    // V2V SINR per pair
    Eigen::VectorXd rate_v2v;
    Eigen::VectorXd gamma_tilde;  // expected V2V SINR per pair
    double gamma_tilde_c = 0.0;
};

LinkMetrics compute_link_metrics(const ChannelSet& ch, const SystemParams& params,
                                 const Decision& decision);

struct OutageEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    int trials = 0;
};

// Empirical Pr{gamma_n <= gamma_th} per pair over redraws of the NLoS parts
// (LoS structure and geometry stay fixed). Requires trials >= 100.
std::vector<OutageEstimate> outage_monte_carlo(const Scenario& scenario,
                                               const ChannelSet& channels,
                                               const Decision& decision, int trials,
                                               std::uint64_t seed);

}  // namespace ricsim
