#include "ricsim/link.hpp"

#include <cmath>
#include <stdexcept>

#include "ricsim/rng.hpp"

namespace ricsim {

std::complex<double> uplink_cascade(const ChannelSet& ch, const RicsState& rics, int m) {
    const Eigen::VectorXcd phi = phi_r(rics);
    std::complex<double> acc = 0.0;
    for (int l = 0; l < rics.elements(); ++l)
        acc += ch.rics_bs.total[l] * phi[l] * ch.cv_rics[m].total[l];
    return acc;
}

std::complex<double> v2v_cascade(const ChannelSet& ch, const RicsState& rics, int m, int n) {
    const Eigen::VectorXcd phi = phi_t(rics);
    std::complex<double> acc = 0.0;
    for (int l = 0; l < rics.elements(); ++l)
        acc += std::conj(ch.rics_rx[n].total[l]) * phi[l] * ch.cv_rics[m].total[l];
    return acc;
}

double sinr_uplink(const ChannelSet& ch, const RicsState& rics,
                   const Eigen::MatrixXd& alpha, const SystemParams& params, int m) {
    const std::complex<double> h = ch.cv_bs[m].total + uplink_cascade(ch, rics, m);
    double interference = 0.0;
    for (int n = 0; n < params.pair_count; ++n)
        interference += alpha(m, n) * params.v2v_power_w * std::norm(ch.tx_bs[n].total);
    return params.cv_power_w * std::norm(h) / (interference + params.noise_power_w);
}

double sinr_v2v(const ChannelSet& ch, const RicsState& rics,
                const Eigen::MatrixXd& alpha, const SystemParams& params, int n) {
    double interference = 0.0;
    for (int m = 0; m < params.cv_count; ++m) {
        if (alpha(m, n) == 0.0) continue;
        const std::complex<double> h = ch.cv_rx[m][n].total + v2v_cascade(ch, rics, m, n);
        interference += alpha(m, n) * params.cv_power_w * std::norm(h);
    }
    return params.v2v_power_w * std::norm(ch.v2v[n].total) /
           (interference + params.noise_power_w);
}

double rate_bps(double sinr, double bandwidth_hz) {
    return bandwidth_hz * std::log2(1.0 + sinr);
}

double smooth_step(double x, double omega) {
    if (!(omega > 0.0)) throw std::invalid_argument("smooth_step: omega must be positive");
    const double t = omega * x;
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

double expected_interference_power(const ChannelSet& ch, const RicsState& rics, int m, int n) {
    const ScalarLink& direct = ch.cv_rx[m][n];
    const VectorLink& side_rx = ch.rics_rx[n];
    const VectorLink& side_cv = ch.cv_rics[m];
    const Eigen::VectorXcd phi = phi_t(rics);

    const double k1 = side_rx.kappa;
    const double k2 = side_cv.kappa;
    const double c1 = 1.0 / ((1.0 + k1) * (1.0 + k2));
    const double amp_cascade = side_rx.amp * side_cv.amp;

    // deterministic LoS part of the cascade and the total |phi|^2 budget
    std::complex<double> los_cascade = 0.0;
    double sum_phi2 = 0.0;
    for (int l = 0; l < rics.elements(); ++l) {
        los_cascade += std::conj(side_rx.los[l]) * phi[l] * side_cv.los[l];
        sum_phi2 += std::norm(phi[l]);
    }
    const std::complex<double> h1 = std::sqrt(k1 * k2) * los_cascade;

    const double mean_cascade_power =
        amp_cascade * amp_cascade * c1 *
        (std::norm(h1) + (k1 + k2 + 1.0) * sum_phi2);

    // cross term is nonzero only when the direct link has a LoS component
    double cross = 0.0;
    if (direct.kappa > 0.0) {
        const std::complex<double> mean_direct =
            direct.amp * std::sqrt(direct.kappa / (1.0 + direct.kappa)) * direct.los;
        const std::complex<double> mean_cascade = amp_cascade * std::sqrt(c1) * h1;
        cross = 2.0 * std::real(std::conj(mean_direct) * mean_cascade);
    }

    return direct.path_power() + cross + mean_cascade_power;
}

double expected_interference_gain(const ChannelSet& ch, const RicsState& rics, int m, int n) {
    return expected_interference_power(ch, rics, m, n) / ch.cv_rx[m][n].path_power();
}

double expected_sinr_v2v(const ChannelSet& ch, const RicsState& rics,
                         const Eigen::MatrixXd& alpha, const SystemParams& params, int n) {
    double interference = 0.0;
    for (int m = 0; m < params.cv_count; ++m) {
        if (alpha(m, n) == 0.0) continue;
        interference += alpha(m, n) * params.cv_power_w *
                        expected_interference_power(ch, rics, m, n);
    }
    // E|h_n|^2 equals the path-loss power for a unit-normalized Rician split
    return params.v2v_power_w * ch.v2v[n].path_power() /
           (interference + params.noise_power_w);
}

double surrogate_threshold(const SystemParams& params) {
    if (!(params.outage_bound > 0.0 && params.outage_bound < 1.0))
        throw std::invalid_argument("surrogate_threshold: P_out out of (0,1)");
    return params.gamma_th +
           std::log(1.0 / params.outage_bound - 1.0) / params.omega;
}

LinkMetrics compute_link_metrics(const ChannelSet& ch, const SystemParams& params,
                                 const Decision& decision) {
    LinkMetrics lm;
    lm.gamma_b.resize(params.cv_count);
    lm.rate_b.resize(params.cv_count);
    for (int m = 0; m < params.cv_count; ++m) {
        lm.gamma_b[m] = sinr_uplink(ch, decision.rics, decision.alpha, params, m);
        lm.rate_b[m] = rate_bps(lm.gamma_b[m], params.bandwidth_hz);
    }
    lm.gamma_v2v.resize(params.pair_count);
    lm.rate_v2v.resize(params.pair_count);
    lm.gamma_tilde.resize(params.pair_count);
    for (int n = 0; n < params.pair_count; ++n) {
        lm.gamma_v2v[n] = sinr_v2v(ch, decision.rics, decision.alpha, params, n);
        lm.rate_v2v[n] = rate_bps(lm.gamma_v2v[n], params.bandwidth_hz);
        lm.gamma_tilde[n] = expected_sinr_v2v(ch, decision.rics, decision.alpha, params, n);
    }
    lm.gamma_tilde_c = surrogate_threshold(params);
    return lm;
}

std::vector<OutageEstimate> outage_monte_carlo(const Scenario& scenario,
                                               const ChannelSet& channels,
                                               const Decision& decision, int trials,
                                               std::uint64_t seed) {
    if (trials < 100) throw std::invalid_argument("outage_monte_carlo: trials < 100");
    const SystemParams& params = scenario.params;
    const int m_count = params.cv_count;
    const int n_count = params.pair_count;

    ChannelSet work = channels;
    std::vector<int> hits(n_count, 0);

    for (int t = 0; t < trials; ++t) {
        Philox rng(seed, substream(streams::outage_trial, static_cast<std::uint64_t>(t)));
        for (int n = 0; n < n_count; ++n) {
            work.v2v[n].nlos = rng.cgaussian();
            work.v2v[n].total = compose(work.v2v[n]);
        }
        for (int m = 0; m < m_count; ++m) {
            for (int n = 0; n < n_count; ++n) {
                work.cv_rx[m][n].nlos = rng.cgaussian();
                work.cv_rx[m][n].total = compose(work.cv_rx[m][n]);
            }
        }
        for (int m = 0; m < m_count; ++m) {
            for (int l = 0; l < params.element_count; ++l)
                work.cv_rics[m].nlos[l] = rng.cgaussian();
            work.cv_rics[m].total = compose(work.cv_rics[m]);
        }
        for (int n = 0; n < n_count; ++n) {
            for (int l = 0; l < params.element_count; ++l)
                work.rics_rx[n].nlos[l] = rng.cgaussian();
            work.rics_rx[n].total = compose(work.rics_rx[n]);
        }
        for (int n = 0; n < n_count; ++n) {
            if (sinr_v2v(work, decision.rics, decision.alpha, params, n) <= params.gamma_th)
                ++hits[n];
        }
    }

    std::vector<OutageEstimate> out(n_count);
    for (int n = 0; n < n_count; ++n) {
        const double p = static_cast<double>(hits[n]) / trials;
        out[n] = {p, std::sqrt(std::max(0.0, p * (1.0 - p)) / trials), trials};
    }
    return out;
}

}  // namespace ricsim
