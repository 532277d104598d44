#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <vector>

namespace ricsim::numopt {

// Frobenius-nearest PSD matrix: eigendecompose and clamp negative
// eigenvalues. Throws if the input is not Hermitian within 1e-10.
Eigen::MatrixXcd project_psd(const Eigen::MatrixXcd& a);

using Projection = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct DykstraOptions {
    double tol = 1e-8;
    int max_sweeps = 10000;
};

struct DykstraResult {
    Eigen::VectorXd point;
    int sweeps = 0;
    bool converged = false;
    double residual = 0.0;
};

// Dykstra's alternating projections onto the intersection of closed convex
// sets. Unlike plain alternating projections this converges to the true
// (nearest-point) projection, which the projected-gradient solver relies on.
// Throws "infeasible set" when the residual plateaus above tolerance.
DykstraResult dykstra(const Eigen::VectorXd& start,
                      std::span<const Projection> projections,
                      const DykstraOptions& opts = {});

struct PgOptions {
    double stall_tol = 1e-8;    // relative objective change
    int max_iters = 1000;
    double init_step = 1.0;
    double armijo = 1e-4;
    double backtrack = 0.5;
    int max_backtracks = 40;
};

struct PgResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> trace;
};

// Maximizes a smooth concave objective over a convex set given a projection
// oracle. Armijo backtracking on the projection arc; the ascent trace is
// non-decreasing. Throws on a non-finite gradient.
PgResult projected_gradient(
    const std::function<double(const Eigen::VectorXd&, Eigen::VectorXd*)>& objective,
    const Projection& project, const Eigen::VectorXd& start, const PgOptions& opts = {});

// Max-shifted log(sum(exp(values))). Throws on an empty list.
double logsumexp(std::span<const double> values);

}  // namespace ricsim::numopt
