#include "ricsim/rics.hpp"

#include <cmath>
#include <stdexcept>

namespace ricsim {

double wrap_phase(double theta) {
    double t = std::fmod(theta, 2.0 * M_PI);
    if (t < 0.0) t += 2.0 * M_PI;
    return t;
}

void RicsState::validate() const {
    const auto len = theta_r.size();
    if (theta_t.size() != len || beta_r.size() != len || beta_t.size() != len ||
        psi.size() != len) {
        throw std::invalid_argument("rics state: mismatched vector lengths");
    }
    for (Eigen::Index l = 0; l < len; ++l) {
        if (beta_r[l] < -1e-12 || beta_r[l] > 1.0 + 1e-12)
            throw std::invalid_argument("rics state: beta_r out of [0,1]");
        if (std::abs(beta_r[l] + beta_t[l] - 1.0) > 1e-9)
            throw std::invalid_argument("rics state: beta_r + beta_t != 1");
        if (psi[l] < 1.0)
            throw std::invalid_argument("rics state: psi < 1");
    }
}

RicsState RicsState::identity_split(int elements, double psi_value) {
    RicsState s;
    s.theta_r = Eigen::VectorXd::Zero(elements);
    s.theta_t = Eigen::VectorXd::Zero(elements);
    s.beta_r = Eigen::VectorXd::Constant(elements, 0.5);
    s.beta_t = Eigen::VectorXd::Constant(elements, 0.5);
    s.psi = Eigen::VectorXd::Constant(elements, psi_value);
    return s;
}

Eigen::VectorXcd phi_r(const RicsState& state) {
    const int len = state.elements();
    Eigen::VectorXcd out(len);
    for (int l = 0; l < len; ++l) {
        const double amp = std::sqrt(std::max(0.0, state.beta_r[l]));
        out[l] = std::polar(amp, state.theta_r[l]);
    }
    return out;
}

Eigen::VectorXcd phi_t(const RicsState& state) {
    const int len = state.elements();
    Eigen::VectorXcd out(len);
    for (int l = 0; l < len; ++l) {
        const double amp = state.psi[l] * std::sqrt(std::max(0.0, state.beta_t[l]));
        out[l] = std::polar(amp, state.theta_t[l]);
    }
    return out;
}

NullingPhases interference_nulling_phases(std::complex<double> h_mn,
                                          const Eigen::VectorXcd& h_rn,
                                          const Eigen::VectorXcd& h_mr,
                                          const RicsState& state) {
    const int len = state.elements();
    if (h_rn.size() != len || h_mr.size() != len)
        throw std::invalid_argument("nulling: channel vectors must have L entries");

    // cascaded term l carries phase arg(conj(h_rn_l) h_mr_l) + theta_t_l;
    // aim every term at arg(h_mn) + pi so the sum opposes the direct path
    const double target = std::arg(h_mn) + M_PI;
    NullingPhases result;
    result.theta_t = Eigen::VectorXd::Zero(len);
    result.degenerate.assign(len, 0);
    for (int l = 0; l < len; ++l) {
        const std::complex<double> prod = std::conj(h_rn[l]) * h_mr[l];
        if (std::abs(prod) == 0.0) {
            result.degenerate[l] = 1;
            continue;
        }
        result.theta_t[l] = wrap_phase(target - std::arg(prod));
    }
    return result;
}

}  // namespace ricsim
