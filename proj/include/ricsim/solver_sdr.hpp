#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "ricsim/channel.hpp"
#include "ricsim/decision.hpp"
#include "ricsim/scenario.hpp"

namespace ricsim {

// Lifted SDP state for the surface block. The lifted vector is
// [conj(passive diagonal); 1], so diagonals of V_r / V_t carry the energy
// splits and the refraction amplification is absorbed into the data
// matrices.
struct LiftedMatrices {
    Eigen::MatrixXcd v_r;  // (L+1)x(L+1) Hermitian PSD
    Eigen::MatrixXcd v_t;
    std::vector<Eigen::MatrixXcd> r_b;                // uplink data per CV
    std::vector<std::vector<Eigen::MatrixXcd>> r_t;   // outage data per (m,n)
    Eigen::VectorXd d;          // per-CV interference+noise at fixed alpha
    double objective = 0.0;     // sum_m log2(1 + Tr(V_r r_b)/d) at the solution
    int iterations = 0;
    bool converged = false;     // false = iteration cap hit, best iterate kept
    double max_residual = 0.0;  // worst constraint violation at the solution
};

// Rank-one lifted data: for v = [theta; 1],
//   v^H R v = power |direct + theta^H cascade|^2.
Eigen::MatrixXcd build_lifted_data(const Eigen::VectorXcd& cascade,
                                   std::complex<double> direct, double power);

// Instantaneous uplink data matrix for CV m (reflection side).
Eigen::MatrixXcd uplink_lifted_data(const ChannelSet& channels, const SystemParams& params,
                                    int m);

// Instantaneous V2V interference data matrix for pair (m,n), refraction side,
// amplification absorbed.
Eigen::MatrixXcd v2v_lifted_data(const ChannelSet& channels, const Eigen::VectorXd& psi,
                                 const SystemParams& params, int m, int n);

// Mean-interference data matrix: Tr(V_t R) equals P_m E|h_mn + cascade|^2
// for a rank-one V_t, which makes the outage constraint linear in V_t and
// consistent with the surrogate used by the sharing block.
Eigen::MatrixXcd build_outage_data(const ChannelSet& channels, const Eigen::VectorXd& psi,
                                   const SystemParams& params, int m, int n);

// Relaxed SDP: maximize sum_m log2(1 + Tr(V_r r_b)/d) subject to the energy
// split diagonals, unit corners, PSD cones and the per-pair interference
// halfspaces. Solved by projected gradient with a Dykstra projection onto
// the constraint intersection.
LiftedMatrices solve_sdp(const ChannelSet& channels, const SystemParams& params,
                         const Eigen::MatrixXd& alpha, const RicsState& init);

struct RandomizeResult {
    RicsState state;
    bool fallback = false;  // no feasible candidate; nulling warm start used
    double objective = 0.0;
    int feasible_candidates = 0;
};

// Gaussian randomization: samples candidate rank-one solutions from the
// lifted covariances (plus the dominant-eigenvector candidate), keeps the
// feasible one with the best true objective. Deterministic per seed.
RandomizeResult gaussian_randomize(const LiftedMatrices& lifted, const Scenario& scenario,
                                   const ChannelSet& channels, const Eigen::MatrixXd& alpha,
                                   const Eigen::VectorXd& rho, int trials,
                                   std::uint64_t seed);

struct PhiResult {
    RicsState state;
    double objective = 0.0;      // true objective at the returned state
    double sdp_objective = 0.0;  // relaxation value (upper-bound side)
    bool sdp_converged = true;
    bool randomize_fallback = false;
    bool kept_init = false;      // init beat every candidate
};

// Surface block: build -> solve_sdp -> randomize, never returning a state
// that scores below the init under the true objective.
PhiResult solve_phi(const Scenario& scenario, const ChannelSet& channels,
                    const Eigen::MatrixXd& alpha, const Eigen::VectorXd& rho,
                    const RicsState& init, std::uint64_t seed);

// SDP-metric value of a rank-one state (for relaxation-sandwich checks).
double sdp_objective_of_state(const LiftedMatrices& lifted, const RicsState& state);

void dump_lifted_csv(const Eigen::MatrixXcd& v, const std::string& path);

}  // namespace ricsim
