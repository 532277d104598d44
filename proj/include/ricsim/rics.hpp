#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace ricsim {

// Per-element surface state. Each element splits the incident energy between
// a reflected branch (amplitude sqrt(beta_r), phase theta_r) and a refracted
// branch that is additionally amplified by psi.
struct RicsState {
    Eigen::VectorXd theta_r;  // reflection phases, [0,2pi)
    Eigen::VectorXd theta_t;  // refraction phases, [0,2pi)
    Eigen::VectorXd beta_r;   // reflection split, [0,1]
    Eigen::VectorXd beta_t;   // refraction split, beta_r + beta_t = 1
    Eigen::VectorXd psi;      // refraction amplification, >= 1

    int elements() const { return static_cast<int>(theta_r.size()); }

    // throws std::invalid_argument on a violated invariant
    void validate() const;

    // beta_r = beta_t = 1/2, zero phases, uniform amplification
    static RicsState identity_split(int elements, double psi_value);
};

// Diagonal of the reflection matrix: sqrt(beta_r_l) e^{j theta_r_l}.
Eigen::VectorXcd phi_r(const RicsState& state);

// Diagonal of the refraction matrix: psi_l sqrt(beta_t_l) e^{j theta_t_l}.
Eigen::VectorXcd phi_t(const RicsState& state);

struct NullingPhases {
    Eigen::VectorXd theta_t;
    std::vector<std::uint8_t> degenerate;  // 1 where the element product vanished
};

// Refraction phases that put every cascaded term in opposite phase with the
// direct interference channel h_mn. Used as a warm start, not as an optimum.
NullingPhases interference_nulling_phases(std::complex<double> h_mn,
                                          const Eigen::VectorXcd& h_rn,
                                          const Eigen::VectorXcd& h_mr,
                                          const RicsState& state);

double wrap_phase(double theta);  // to [0,2pi)

}  // namespace ricsim
