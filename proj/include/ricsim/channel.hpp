#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "ricsim/scenario.hpp"

namespace ricsim {

// One scalar link with its Rician split kept alongside the composed gain:
// total = amp * (sqrt(k/(1+k)) los + sqrt(1/(1+k)) nlos).
struct ScalarLink {
    std::complex<double> los;
    std::complex<double> nlos;
    double kappa = 0.0;
    double amp = 1.0;  // amplitude path loss sqrt(g0 d^-beta)
    std::complex<double> total;

    double path_power() const { return amp * amp; }
};

struct VectorLink {
    Eigen::VectorXcd los;
    Eigen::VectorXcd nlos;
    double kappa = 0.0;
    double amp = 1.0;
    Eigen::VectorXcd total;

    double path_power() const { return amp * amp; }
};

// One quasi-static realization of every channel gain in the system.
struct ChannelSet {
    std::vector<ScalarLink> cv_bs;                // h_mB, size M
    std::vector<ScalarLink> v2v;                  // h_n, size N
    std::vector<std::vector<ScalarLink>> cv_rx;   // h_mn, [M][N]
    std::vector<ScalarLink> tx_bs;                // h_nB, size N
    std::vector<VectorLink> cv_rics;              // h_mR, size M, each length L
    VectorLink rics_bs;                           // h_RB, length L
    std::vector<VectorLink> rics_rx;              // h_Rn, size N, each length L
};

// Unit-modulus steering vector of the surface's uniform linear array
// (half-wavelength spacing): entry l has phase -pi l sin(azimuth), where the
// azimuth is measured at the array toward the endpoint.
Eigen::VectorXcd los_steering(const Eigen::Vector3d& array_pos,
                              const Eigen::Vector3d& endpoint, int elements);

// Draws one realization. Deterministic per seed; throws on coincident
// positions (zero distance).
ChannelSet draw_channels(const Placement& placement, const SystemParams& params,
                         std::uint64_t seed);

// Recomposes a link from its stored split (used by tests and the outage
// Monte-Carlo, which redraws only the NLoS parts).
std::complex<double> compose(const ScalarLink& link);
Eigen::VectorXcd compose(const VectorLink& link);

// CSV dump (re,im pairs) for cross-implementation comparison.
void dump_channels_csv(const ChannelSet& channels, const std::string& path);

}  // namespace ricsim
