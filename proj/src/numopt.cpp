#include "ricsim/numopt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ricsim::numopt {

Eigen::MatrixXcd project_psd(const Eigen::MatrixXcd& a) {
    const double scale = std::max(1.0, a.norm());
    if ((a - a.adjoint()).norm() > 1e-10 * scale)
        throw std::invalid_argument("project_psd: input is not Hermitian");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(a);
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("project_psd: eigendecomposition failed");

    Eigen::VectorXd lambda = eig.eigenvalues().cwiseMax(0.0);
    Eigen::MatrixXcd out = eig.eigenvectors() * lambda.asDiagonal() *
                           eig.eigenvectors().adjoint();
    // symmetrize away roundoff so repeated projections stay Hermitian
    return 0.5 * (out + out.adjoint());
}

DykstraResult dykstra(const Eigen::VectorXd& start,
                      std::span<const Projection> projections,
                      const DykstraOptions& opts) {
    DykstraResult result;
    if (projections.empty()) {
        result.point = start;
        result.converged = true;
        return result;
    }

    const auto set_count = projections.size();
    Eigen::VectorXd x = start;
    std::vector<Eigen::VectorXd> corrections(set_count,
                                             Eigen::VectorXd::Zero(start.size()));

    double prev_residual = std::numeric_limits<double>::infinity();
    int plateau = 0;
    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        double residual = 0.0;
        for (size_t i = 0; i < set_count; ++i) {
            const Eigen::VectorXd y = x + corrections[i];
            Eigen::VectorXd projected = projections[i](y);
            corrections[i] = y - projected;
            residual = std::max(residual, (projected - x).norm());
            x = std::move(projected);
        }
        result.sweeps = sweep + 1;
        result.residual = residual;
        if (residual < opts.tol) {
            result.converged = true;
            break;
        }
        // a residual that stops shrinking signals an empty intersection
        if (residual > prev_residual * (1.0 - 1e-12)) {
            if (++plateau > 50 && residual > 1e3 * opts.tol)
                throw std::runtime_error("dykstra: infeasible set");
        } else {
            plateau = 0;
        }
        prev_residual = residual;
    }
    result.point = x;
    return result;
}

PgResult projected_gradient(
    const std::function<double(const Eigen::VectorXd&, Eigen::VectorXd*)>& objective,
    const Projection& project, const Eigen::VectorXd& start, const PgOptions& opts) {
    PgResult result;
    Eigen::VectorXd x = project(start);
    Eigen::VectorXd grad(x.size());
    double value = objective(x, &grad);
    if (!std::isfinite(value) || !grad.allFinite())
        throw std::runtime_error("projected_gradient: non-finite objective or gradient at start");

    result.trace.push_back(value);
    double step = opts.init_step;

    for (int iter = 0; iter < opts.max_iters; ++iter) {
        result.iterations = iter + 1;

        Eigen::VectorXd candidate;
        double cand_value = value;
        bool accepted = false;
        double t = step;
        for (int bt = 0; bt < opts.max_backtracks; ++bt) {
            candidate = project(x + t * grad);
            const Eigen::VectorXd dx = candidate - x;
            const double dir = grad.dot(dx);
            cand_value = objective(candidate, nullptr);
            if (std::isfinite(cand_value) &&
                cand_value >= value + opts.armijo * dir - 1e-15) {
                accepted = true;
                break;
            }
            t *= opts.backtrack;
        }
        if (!accepted) {
            result.converged = true;  // no ascent direction left at this scale
            break;
        }
        // gentle step-size recovery keeps later iterations from crawling
        step = std::min(opts.init_step, t * 2.0);

        const double prev = value;
        x = std::move(candidate);
        value = cand_value;
        objective(x, &grad);
        if (!grad.allFinite())
            throw std::runtime_error("projected_gradient: non-finite gradient");
        result.trace.push_back(value);

        if (std::abs(value - prev) <= opts.stall_tol * std::max(1.0, std::abs(value))) {
            result.converged = true;
            break;
        }
    }
    result.x = std::move(x);
    result.value = value;
    return result;
}

double logsumexp(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("logsumexp: empty list");
    const double m = *std::max_element(values.begin(), values.end());
    if (!std::isfinite(m)) return m;  // +-inf propagates
    double acc = 0.0;
    for (double v : values) acc += std::exp(v - m);
    return m + std::log(acc);
}

}  // namespace ricsim::numopt
