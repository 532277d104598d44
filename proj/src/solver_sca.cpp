#include "ricsim/solver_sca.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "ricsim/link.hpp"
#include "ricsim/numopt.hpp"
#include "ricsim/offload.hpp"

namespace ricsim {

double lse_delay_bound(double tau_l, double tau_o) {
    const std::array<double, 2> vals = {tau_l, tau_o};
    return numopt::logsumexp(vals);
}

double DcParts::p(const Eigen::VectorXd& alpha_row) const {
    return bandwidth * std::log2(xi1 + xi2.dot(alpha_row) + noise);
}

double DcParts::q(const Eigen::VectorXd& alpha_row) const {
    return bandwidth * std::log2(xi2.dot(alpha_row) + noise);
}

DcParts dc_rate_parts(const ChannelSet& channels, const RicsState& rics,
                      const SystemParams& params, int m) {
    DcParts parts;
    const std::complex<double> h = channels.cv_bs[m].total + uplink_cascade(channels, rics, m);
    parts.xi1 = params.cv_power_w * std::norm(h);
    parts.xi2.resize(params.pair_count);
    for (int n = 0; n < params.pair_count; ++n)
        parts.xi2[n] = params.v2v_power_w * std::norm(channels.tx_bs[n].total);
    parts.noise = params.noise_power_w;
    parts.bandwidth = params.bandwidth_hz;
    return parts;
}

OutagePolytope outage_polytope(const ChannelSet& channels, const RicsState& rics,
                               const SystemParams& params) {
    OutagePolytope poly;
    poly.weight.resize(params.cv_count, params.pair_count);
    poly.bound.resize(params.pair_count);
    const double gamma_c = surrogate_threshold(params);
    for (int n = 0; n < params.pair_count; ++n) {
        for (int m = 0; m < params.cv_count; ++m)
            poly.weight(m, n) =
                params.cv_power_w * expected_interference_power(channels, rics, m, n);
        poly.bound[n] =
            params.v2v_power_w * channels.v2v[n].path_power() / gamma_c -
            params.noise_power_w;
    }
    return poly;
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd flatten(const MatrixXd& a) {
    return Eigen::Map<const VectorXd>(a.data(), a.size());
}

MatrixXd unflatten(const VectorXd& v, int rows, int cols) {
    return Eigen::Map<const MatrixXd>(v.data(), rows, cols);
}

std::vector<numopt::Projection> sharing_projections(int m_count, int n_count,
                                                    const OutagePolytope& polytope) {
    std::vector<numopt::Projection> sets;

    sets.push_back([](const VectorXd& x) -> VectorXd {
        return x.cwiseMax(0.0).cwiseMin(1.0);
    });

    // each CV shares its slice with at most one pair: row sums <= 1
    for (int m = 0; m < m_count; ++m) {
        sets.push_back([m, m_count, n_count](const VectorXd& x) -> VectorXd {
            double s = 0.0;
            for (int n = 0; n < n_count; ++n) s += x[m + n * m_count];
            if (s <= 1.0) return x;
            VectorXd y = x;
            const double shift = (s - 1.0) / n_count;
            for (int n = 0; n < n_count; ++n) y[m + n * m_count] -= shift;
            return y;
        });
    }

    // surrogate outage halfspace per pair
    for (int n = 0; n < n_count; ++n) {
        VectorXd w = VectorXd::Zero(m_count * n_count);
        for (int m = 0; m < m_count; ++m) w[m + n * m_count] = polytope.weight(m, n);
        const double b = polytope.bound[n];
        const double w2 = w.squaredNorm();
        sets.push_back([w, b, w2](const VectorXd& x) -> VectorXd {
            const double v = w.dot(x);
            if (v <= b || w2 == 0.0) return x;
            return x - ((v - b) / w2) * w;
        });
    }
    return sets;
}

struct SurrogateObjective {
    const std::vector<DcParts>* parts;
    const Scenario* scenario;
    const VectorXd* rho;
    MatrixXd q_grad;     // d q_m / d alpha_mn at the expansion point (M x N)
    VectorXd q_at_k;     // q_m(alpha_k)
    MatrixXd alpha_k;

    double surrogate_rate(int m, const VectorXd& row) const {
        const DcParts& dc = (*parts)[m];
        double q_hat = q_at_k[m];
        for (int n = 0; n < row.size(); ++n)
            q_hat += q_grad(m, n) * (row[n] - alpha_k(m, n));
        return dc.p(row) - q_hat;
    }

    // summed delay bound in seconds; gradient w.r.t. flattened alpha
    double value(const VectorXd& x, VectorXd* grad) const {
        const SystemParams& params = scenario->params;
        const int m_count = params.cv_count;
        const int n_count = params.pair_count;
        const MatrixXd alpha = unflatten(x, m_count, n_count);
        if (grad) grad->setZero(x.size());

        double total = 0.0;
        for (int m = 0; m < m_count; ++m) {
            const DcParts& dc = (*parts)[m];
            const TaskSpec& task = scenario->tasks[m];
            const VectorXd row = alpha.row(m);
            const double rate = surrogate_rate(m, row);
            const double tau_l = (1.0 - (*rho)[m]) * task.cycles / task.cpu_hz;
            const double tau_o =
                (*rho)[m] * (task.size_bits * m_count / rate + task.cycles / params.mec_cpu_hz);
            const double xl = tau_l / kDelayScaleSeconds;
            const double xo = tau_o / kDelayScaleSeconds;
            const double bound = lse_delay_bound(xl, xo) * kDelayScaleSeconds;
            total += bound;

            if (grad) {
                const double w_o = std::exp(xo - bound / kDelayScaleSeconds);
                const double denom_p = dc.xi1 + dc.xi2.dot(row) + dc.noise;
                const double dtau_scale =
                    w_o * (*rho)[m] * task.size_bits * m_count / (rate * rate);
                for (int n = 0; n < n_count; ++n) {
                    const double drate =
                        dc.bandwidth / M_LN2 * dc.xi2[n] / denom_p - q_grad(m, n);
                    (*grad)[m + n * m_count] += -dtau_scale * drate;
                }
            }
        }
        return total;
    }
};

SurrogateObjective make_surrogate(const MatrixXd& alpha_k, const std::vector<DcParts>& parts,
                                  const Scenario& scenario, const VectorXd& rho) {
    SurrogateObjective obj;
    obj.parts = &parts;
    obj.scenario = &scenario;
    obj.rho = &rho;
    obj.alpha_k = alpha_k;
    const int m_count = scenario.params.cv_count;
    const int n_count = scenario.params.pair_count;
    obj.q_grad.resize(m_count, n_count);
    obj.q_at_k.resize(m_count);
    for (int m = 0; m < m_count; ++m) {
        const DcParts& dc = parts[m];
        const VectorXd row = alpha_k.row(m);
        obj.q_at_k[m] = dc.q(row);
        const double denom = dc.xi2.dot(row) + dc.noise;
        for (int n = 0; n < n_count; ++n)
            obj.q_grad(m, n) = dc.bandwidth / M_LN2 * dc.xi2[n] / denom;
    }
    return obj;
}

double true_delay_bound(const MatrixXd& alpha, const std::vector<DcParts>& parts,
                        const Scenario& scenario, const VectorXd& rho) {
    const SystemParams& params = scenario.params;
    double total = 0.0;
    for (int m = 0; m < params.cv_count; ++m) {
        const TaskSpec& task = scenario.tasks[m];
        const double rate = parts[m].rate(alpha.row(m));
        const double tau_l = (1.0 - rho[m]) * task.cycles / task.cpu_hz;
        const double tau_o =
            rho[m] * (task.size_bits * params.cv_count / rate + task.cycles / params.mec_cpu_hz);
        total += lse_delay_bound(tau_l / kDelayScaleSeconds, tau_o / kDelayScaleSeconds) *
                 kDelayScaleSeconds;
    }
    return total;
}

}  // namespace

Eigen::MatrixXd sca_step(const Eigen::MatrixXd& alpha_k, const std::vector<DcParts>& parts,
                         const Scenario& scenario, const Eigen::VectorXd& rho,
                         const OutagePolytope& polytope) {
    const int m_count = scenario.params.cv_count;
    const int n_count = scenario.params.pair_count;

    const SurrogateObjective surrogate = make_surrogate(alpha_k, parts, scenario, rho);
    const auto sets = sharing_projections(m_count, n_count, polytope);

    numopt::Projection project = [&sets](const VectorXd& x) -> VectorXd {
        return numopt::dykstra(x, sets).point;
    };

    // projected gradient maximizes, so hand it the negated bound
    auto objective = [&surrogate](const VectorXd& x, VectorXd* grad) -> double {
        const double v = surrogate.value(x, grad);
        if (grad) *grad = -*grad;
        return -v;
    };

    numopt::PgOptions opts;
    opts.max_iters = 400;
    opts.stall_tol = 1e-10;
    const auto pg = numopt::projected_gradient(objective, project, flatten(alpha_k), opts);
    return unflatten(pg.x, m_count, n_count);
}

ScaResult solve_alpha(const Scenario& scenario, const ChannelSet& channels,
                      const RicsState& rics, const Eigen::VectorXd& rho,
                      const Eigen::MatrixXd& init_alpha) {
    const SystemParams& params = scenario.params;

    const OutagePolytope polytope = outage_polytope(channels, rics, params);
    for (int n = 0; n < params.pair_count; ++n) {
        if (polytope.bound[n] < 0.0)
            throw std::runtime_error("outage-infeasible scenario: pair " + std::to_string(n) +
                                     " misses the surrogate threshold even without sharing");
    }

    std::vector<DcParts> parts;
    parts.reserve(params.cv_count);
    for (int m = 0; m < params.cv_count; ++m)
        parts.push_back(dc_rate_parts(channels, rics, params, m));

    ScaResult result;
    result.alpha = init_alpha;
    double current = true_delay_bound(result.alpha, parts, scenario, rho);
    result.trace.push_back(current);

    for (int iter = 0; iter < 50; ++iter) {
        result.iterations = iter + 1;
        const Eigen::MatrixXd candidate = sca_step(result.alpha, parts, scenario, rho, polytope);
        const double value = true_delay_bound(candidate, parts, scenario, rho);
        if (value <= current + 1e-12) {
            result.alpha = candidate;
        }
        result.trace.push_back(std::min(value, current));
        const double improvement = current - std::min(value, current);
        current = std::min(value, current);
        if (improvement <= 1e-6 * std::max(1.0, std::abs(current))) {
            result.converged = true;
            break;
        }
    }
    return result;
}

}  // namespace ricsim
