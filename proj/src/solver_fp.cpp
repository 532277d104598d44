#include "ricsim/solver_fp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ricsim/link.hpp"
#include "ricsim/offload.hpp"

namespace ricsim {

namespace {

struct CvProblem {
    double a = 0.0;       // A_B (1-lambda), numerator slope in rho
    double b = 0.0;       // A_B lambda, numerator at rho=0
    double local_c = 0.0; // c/f: tau_l = (1-rho) local_c
    double k_off = 0.0;   // s/R + c/F: tau_o = rho k_off (inf when R=0)

    double tau(double rho) const {
        const double tau_l = (1.0 - rho) * local_c;
        const double tau_o = rho > 0.0 ? rho * k_off : 0.0;
        return std::max(tau_l, tau_o);
    }
    double num(double rho) const { return a * rho + b; }
    double safety(double rho) const { return num(rho) / tau(rho); }
    double surrogate(double rho, double mu) const {
        return 2.0 * mu * std::sqrt(num(rho)) - mu * mu * tau(rho);
    }
};

// Maximizes 2 mu sqrt(a rho + b) - mu^2 max{tau_l, tau_o} over [0,1].
// On the tau_l branch both terms increase with rho, so only the branch's
// right end matters; the tau_o branch is concave with a closed-form
// stationary point.
double best_rho(const CvProblem& p, double mu) {
    if (std::isinf(p.k_off)) return 0.0;

    const double kink = p.local_c / (p.local_c + p.k_off);  // tau_l == tau_o
    std::vector<double> candidates = {0.0, 1.0, std::clamp(kink, 0.0, 1.0)};
    if (p.a > 0.0 && mu > 0.0 && p.k_off > 0.0) {
        // stationary point of the offload branch: sqrt(a rho + b) = a/(mu k)
        const double root = p.a / (mu * p.k_off);
        const double stat = (root * root - p.b) / p.a;
        candidates.push_back(std::clamp(stat, std::clamp(kink, 0.0, 1.0), 1.0));
    }

    double best = candidates[0];
    double best_value = p.surrogate(best, mu);
    for (double rho : candidates) {
        const double v = p.surrogate(rho, mu);
        if (v > best_value) {
            best_value = v;
            best = rho;
        }
    }
    return best;
}

}  // namespace

FpResult solve_rho(const Scenario& scenario, const ChannelSet& channels,
                   const Eigen::MatrixXd& alpha, const RicsState& rics,
                   const Eigen::VectorXd& init_rho) {
    const SystemParams& params = scenario.params;
    const int m_count = params.cv_count;

    std::vector<CvProblem> problems(m_count);
    for (int m = 0; m < m_count; ++m) {
        const TaskSpec& task = scenario.tasks[m];
        const double gamma = sinr_uplink(channels, rics, alpha, params, m);
        const double share =
            tdm_uplink_share(rate_bps(gamma, params.bandwidth_hz), m_count);
        CvProblem& p = problems[m];
        p.a = params.server_accuracy * (1.0 - params.lambda_acc);
        p.b = params.server_accuracy * params.lambda_acc;
        p.local_c = task.cycles / task.cpu_hz;
        p.k_off = share > 0.0
                      ? task.size_bits / share + task.cycles / params.mec_cpu_hz
                      : std::numeric_limits<double>::infinity();
        if (p.local_c <= 0.0)
            throw std::invalid_argument("solve_rho: degenerate task at CV " + std::to_string(m));
    }

    FpResult result;
    result.rho = init_rho;
    Eigen::VectorXd mu(m_count);

    double prev_surrogate = -std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 100; ++iter) {
        result.iterations = iter + 1;

        double total_surrogate = 0.0;
        double total_safety = 0.0;
        for (int m = 0; m < m_count; ++m) {
            const CvProblem& p = problems[m];
            mu[m] = std::sqrt(p.num(result.rho[m])) / p.tau(result.rho[m]);
            result.rho[m] = best_rho(p, mu[m]);
            const double f = p.surrogate(result.rho[m], mu[m]);
            if (!std::isfinite(f))
                throw std::runtime_error("solve_rho: non-finite surrogate at CV " +
                                         std::to_string(m));
            total_surrogate += f;
            total_safety += p.safety(result.rho[m]);
        }
        result.trace.push_back(total_safety);

        if (std::abs(total_surrogate - prev_surrogate) <=
            1e-8 * std::max(1.0, std::abs(total_surrogate)))
            break;
        prev_surrogate = total_surrogate;
    }
    return result;
}

}  // namespace ricsim
