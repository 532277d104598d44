#include "ricsim/solver_sdr.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "ricsim/link.hpp"
#include "ricsim/numopt.hpp"
#include "ricsim/offload.hpp"
#include "ricsim/rng.hpp"

namespace ricsim {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

// real embedding of a pair of complex matrices; Frobenius metric preserved
VectorXd embed(const MatrixXcd& a, const MatrixXcd& b) {
    const Eigen::Index na = a.size();
    const Eigen::Index nb = b.size();
    VectorXd x(2 * (na + nb));
    for (Eigen::Index i = 0; i < na; ++i) {
        x[i] = a.data()[i].real();
        x[na + i] = a.data()[i].imag();
    }
    for (Eigen::Index i = 0; i < nb; ++i) {
        x[2 * na + i] = b.data()[i].real();
        x[2 * na + nb + i] = b.data()[i].imag();
    }
    return x;
}

void unembed(const VectorXd& x, MatrixXcd& a, MatrixXcd& b) {
    const Eigen::Index na = a.size();
    const Eigen::Index nb = b.size();
    for (Eigen::Index i = 0; i < na; ++i)
        a.data()[i] = {x[i], x[na + i]};
    for (Eigen::Index i = 0; i < nb; ++i)
        b.data()[i] = {x[2 * na + i], x[2 * na + nb + i]};
}

MatrixXcd hermitize(const MatrixXcd& a) { return 0.5 * (a + a.adjoint()); }

// Tr(V R); real for Hermitian arguments
double real_trace_product(const MatrixXcd& v, const MatrixXcd& r) {
    return std::real(v.cwiseProduct(r.transpose()).sum());
}

}  // namespace

Eigen::MatrixXcd build_lifted_data(const Eigen::VectorXcd& cascade,
                                   std::complex<double> direct, double power) {
    const Eigen::Index len = cascade.size();
    MatrixXcd r(len + 1, len + 1);
    r.topLeftCorner(len, len) = cascade * cascade.adjoint();
    r.topRightCorner(len, 1) = cascade * std::conj(direct);
    r.bottomLeftCorner(1, len) = (cascade * std::conj(direct)).adjoint();
    r(len, len) = std::norm(direct);
    return power * r;
}

Eigen::MatrixXcd uplink_lifted_data(const ChannelSet& channels, const SystemParams& params,
                                    int m) {
    const int len = params.element_count;
    VectorXcd cascade(len);
    for (int l = 0; l < len; ++l)
        cascade[l] = channels.rics_bs.total[l] * channels.cv_rics[m].total[l];
    return build_lifted_data(cascade, channels.cv_bs[m].total, params.cv_power_w);
}

Eigen::MatrixXcd v2v_lifted_data(const ChannelSet& channels, const Eigen::VectorXd& psi,
                                 const SystemParams& params, int m, int n) {
    const int len = params.element_count;
    VectorXcd cascade(len);
    for (int l = 0; l < len; ++l)
        cascade[l] =
            psi[l] * std::conj(channels.rics_rx[n].total[l]) * channels.cv_rics[m].total[l];
    return build_lifted_data(cascade, channels.cv_rx[m][n].total, params.cv_power_w);
}

Eigen::MatrixXcd build_outage_data(const ChannelSet& channels, const Eigen::VectorXd& psi,
                                   const SystemParams& params, int m, int n) {
    const int len = params.element_count;
    const ScalarLink& direct = channels.cv_rx[m][n];
    const VectorLink& side_rx = channels.rics_rx[n];
    const VectorLink& side_cv = channels.cv_rics[m];

    const double k1 = side_rx.kappa;
    const double k2 = side_cv.kappa;
    const double c1 = 1.0 / ((1.0 + k1) * (1.0 + k2));
    const double amp2 = side_rx.path_power() * side_cv.path_power();

    VectorXcd w(len);
    for (int l = 0; l < len; ++l)
        w[l] = std::sqrt(k1 * k2) * psi[l] * std::conj(side_rx.los[l]) * side_cv.los[l];

    MatrixXcd r(len + 1, len + 1);
    r.setZero();
    r.topLeftCorner(len, len) = amp2 * c1 * (w * w.adjoint());
    for (int l = 0; l < len; ++l)
        r(l, l) += amp2 * c1 * (k1 + k2 + 1.0) * psi[l] * psi[l];
    r(len, len) = direct.path_power();

    if (direct.kappa > 0.0) {
        const std::complex<double> mean_direct =
            direct.amp * std::sqrt(direct.kappa / (1.0 + direct.kappa)) * direct.los;
        const VectorXcd g =
            side_rx.amp * side_cv.amp * std::sqrt(c1) * std::conj(mean_direct) * w;
        r.topRightCorner(len, 1) = g;
        r.bottomLeftCorner(1, len) = g.adjoint();
    }
    return params.cv_power_w * r;
}

namespace {

struct SdpSets {
    std::vector<numopt::Projection> projections;
    std::vector<MatrixXcd> halfspace_normals;  // A_n (already alpha-weighted)
    std::vector<double> halfspace_bounds;
};

SdpSets make_sdp_sets(int len, const LiftedMatrices& lifted, const SystemParams& params,
                      const Eigen::MatrixXd& alpha, const ChannelSet& channels) {
    SdpSets sets;

    auto psd_pair = [len](const VectorXd& x) -> VectorXd {
        MatrixXcd a(len + 1, len + 1), b(len + 1, len + 1);
        unembed(x, a, b);
        a = numopt::project_psd(hermitize(a));
        b = numopt::project_psd(hermitize(b));
        return embed(a, b);
    };
    sets.projections.push_back(psd_pair);

    // energy-split diagonals, unit corners, real diagonal
    auto affine = [len](const VectorXd& x) -> VectorXd {
        MatrixXcd a(len + 1, len + 1), b(len + 1, len + 1);
        unembed(x, a, b);
        for (int l = 0; l < len; ++l) {
            const double ra = a(l, l).real();
            const double rb = b(l, l).real();
            const double shift = 0.5 * (1.0 - ra - rb);
            a(l, l) = ra + shift;
            b(l, l) = rb + shift;
        }
        a(len, len) = 1.0;
        b(len, len) = 1.0;
        return embed(a, b);
    };
    sets.projections.push_back(affine);

    // interference halfspaces act on V_t only
    const double gamma_c = surrogate_threshold(params);
    for (int n = 0; n < params.pair_count; ++n) {
        MatrixXcd a_n = MatrixXcd::Zero(len + 1, len + 1);
        double used = 0.0;
        for (int m = 0; m < params.cv_count; ++m) {
            if (alpha(m, n) == 0.0) continue;
            a_n += alpha(m, n) * lifted.r_t[m][n];
            used += alpha(m, n);
        }
        if (used == 0.0) continue;
        const double bound = params.v2v_power_w * channels.v2v[n].path_power() / gamma_c -
                             params.noise_power_w;
        sets.halfspace_normals.push_back(a_n);
        sets.halfspace_bounds.push_back(bound);

        const VectorXd normal = embed(MatrixXcd::Zero(len + 1, len + 1), a_n);
        const double norm2 = normal.squaredNorm();
        sets.projections.push_back([normal, bound, norm2](const VectorXd& x) -> VectorXd {
            const double v = normal.dot(x);
            if (v <= bound || norm2 == 0.0) return x;
            return x - ((v - bound) / norm2) * normal;
        });
    }
    return sets;
}

double sdp_value(const VectorXd& x, const LiftedMatrices& lifted, int len, VectorXd* grad) {
    MatrixXcd v_r(len + 1, len + 1), v_t(len + 1, len + 1);
    unembed(x, v_r, v_t);

    double value = 0.0;
    MatrixXcd g = MatrixXcd::Zero(len + 1, len + 1);
    for (size_t m = 0; m < lifted.r_b.size(); ++m) {
        const MatrixXcd scaled = lifted.r_b[m] / lifted.d[m];
        const double t = std::max(0.0, real_trace_product(v_r, scaled));
        value += std::log2(1.0 + t);
        if (grad) g += scaled / (M_LN2 * (1.0 + t));
    }
    if (grad) *grad = embed(hermitize(g), MatrixXcd::Zero(len + 1, len + 1));
    return value;
}

double constraint_residual(const MatrixXcd& v_r, const MatrixXcd& v_t,
                           const SdpSets& sets) {
    const int size = static_cast<int>(v_r.rows());
    const int len = size - 1;
    double residual = 0.0;
    for (int l = 0; l < len; ++l)
        residual = std::max(residual,
                            std::abs(v_r(l, l).real() + v_t(l, l).real() - 1.0));
    residual = std::max(residual, std::abs(v_r(len, len).real() - 1.0));
    residual = std::max(residual, std::abs(v_t(len, len).real() - 1.0));
    for (const MatrixXcd& v : {v_r, v_t}) {
        Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(hermitize(v));
        residual = std::max(residual, std::max(0.0, -eig.eigenvalues().minCoeff()));
    }
    for (size_t i = 0; i < sets.halfspace_normals.size(); ++i) {
        const double v = real_trace_product(v_t, sets.halfspace_normals[i]);
        const double scale = std::max(1.0, std::abs(sets.halfspace_bounds[i]));
        residual = std::max(residual, (v - sets.halfspace_bounds[i]) / scale);
    }
    return residual;
}

// lifted vector of a state: top block conj of the passive diagonal
VectorXcd lift_passive(const VectorXd& theta, const VectorXd& beta) {
    const Eigen::Index len = theta.size();
    VectorXcd v(len + 1);
    for (Eigen::Index l = 0; l < len; ++l)
        v[l] = std::conj(std::polar(std::sqrt(std::max(0.0, beta[l])), theta[l]));
    v[len] = 1.0;
    return v;
}

RicsState state_from_lifted(const VectorXcd& u_r, const VectorXcd& u_t,
                            const MatrixXcd& v_r, const VectorXd& psi) {
    const int len = static_cast<int>(u_r.size()) - 1;
    RicsState s;
    s.theta_r.resize(len);
    s.theta_t.resize(len);
    s.beta_r.resize(len);
    s.beta_t.resize(len);
    s.psi = psi;
    for (int l = 0; l < len; ++l) {
        s.theta_r[l] = wrap_phase(-std::arg(u_r[l]));
        s.theta_t[l] = wrap_phase(-std::arg(u_t[l]));
        const double beta = std::clamp(v_r(l, l).real(), 0.0, 1.0);
        s.beta_r[l] = beta;
        s.beta_t[l] = 1.0 - beta;
    }
    return s;
}

VectorXcd normalize_last(const VectorXcd& z) {
    const Eigen::Index last = z.size() - 1;
    if (std::abs(z[last]) == 0.0) return z;
    return z / (z[last] / std::abs(z[last]));  // rotate, keep magnitudes
}

bool state_outage_feasible(const RicsState& state, const ChannelSet& channels,
                           const SystemParams& params, const Eigen::MatrixXd& alpha) {
    const double gamma_c = surrogate_threshold(params);
    for (int n = 0; n < params.pair_count; ++n) {
        double acc = 0.0;
        bool any = false;
        for (int m = 0; m < params.cv_count; ++m) {
            if (alpha(m, n) == 0.0) continue;
            any = true;
            acc += alpha(m, n) * params.cv_power_w *
                   expected_interference_power(channels, state, m, n);
        }
        if (!any) continue;
        const double bound = params.v2v_power_w * channels.v2v[n].path_power() / gamma_c -
                             params.noise_power_w;
        if (acc > bound * (1.0 + 1e-9) + 1e-30) return false;
    }
    return true;
}

}  // namespace

namespace {

// With no interference halfspace active, V_t only appears through the
// diagonal coupling, and a diagonal PSD completion with the complementary
// diagonal always exists. The relaxation then reduces to V_r alone with its
// diagonal boxed to [0,1], which halves the projection work.
void solve_reflection_only(LiftedMatrices& lifted, int len, const VectorXcd& u_r0) {
    const Eigen::Index size = (len + 1) * static_cast<Eigen::Index>(len + 1);

    auto embed_one = [size](const MatrixXcd& a) {
        VectorXd x(2 * size);
        for (Eigen::Index i = 0; i < size; ++i) {
            x[i] = a.data()[i].real();
            x[size + i] = a.data()[i].imag();
        }
        return x;
    };
    auto unembed_one = [size, len](const VectorXd& x) {
        MatrixXcd a(len + 1, len + 1);
        for (Eigen::Index i = 0; i < size; ++i) a.data()[i] = {x[i], x[size + i]};
        return a;
    };

    std::vector<numopt::Projection> sets;
    sets.push_back([&](const VectorXd& x) {
        return embed_one(numopt::project_psd(hermitize(unembed_one(x))));
    });
    sets.push_back([&](const VectorXd& x) {
        MatrixXcd a = unembed_one(x);
        for (int l = 0; l < len; ++l)
            a(l, l) = std::clamp(a(l, l).real(), 0.0, 1.0);
        a(len, len) = 1.0;
        return embed_one(a);
    });

    numopt::DykstraOptions inner;
    inner.tol = 1e-7;  // final iterate gets a tighter polish below
    numopt::Projection project = [&sets, inner](const VectorXd& x) -> VectorXd {
        return numopt::dykstra(x, sets, inner).point;
    };
    auto objective = [&lifted, len, &unembed_one, &embed_one](const VectorXd& x,
                                                              VectorXd* grad) -> double {
        const MatrixXcd v_r = unembed_one(x);
        double value = 0.0;
        MatrixXcd g = MatrixXcd::Zero(len + 1, len + 1);
        for (size_t m = 0; m < lifted.r_b.size(); ++m) {
            const MatrixXcd scaled = lifted.r_b[m] / lifted.d[m];
            const double t = std::max(0.0, real_trace_product(v_r, scaled));
            value += std::log2(1.0 + t);
            if (grad) g += scaled / (M_LN2 * (1.0 + t));
        }
        if (grad) *grad = embed_one(hermitize(g));
        return value;
    };

    const VectorXd x0 = embed_one(u_r0 * u_r0.adjoint());
    VectorXd grad0(x0.size());
    objective(x0, &grad0);

    numopt::PgOptions opts;
    opts.max_iters = 5000;
    opts.stall_tol = 1e-6;
    // first trial step displaces the iterate by about the feasible set's size
    opts.init_step = std::sqrt(static_cast<double>(len + 1)) /
                     std::max(1e-12, grad0.norm());
    const auto pg = numopt::projected_gradient(objective, project, x0, opts);

    numopt::DykstraOptions polish;
    polish.tol = 1e-9;
    lifted.v_r = hermitize(unembed_one(numopt::dykstra(pg.x, sets, polish).point));
    lifted.v_t = MatrixXcd::Zero(len + 1, len + 1);
    for (int l = 0; l < len; ++l)
        lifted.v_t(l, l) = std::clamp(1.0 - lifted.v_r(l, l).real(), 0.0, 1.0);
    lifted.v_t(len, len) = 1.0;
    lifted.objective = objective(embed_one(lifted.v_r), nullptr);
    lifted.iterations = pg.iterations;
    lifted.converged = pg.converged;
}

}  // namespace

LiftedMatrices solve_sdp(const ChannelSet& channels, const SystemParams& params,
                         const Eigen::MatrixXd& alpha, const RicsState& init) {
    const int len = params.element_count;

    LiftedMatrices lifted;
    lifted.r_b.reserve(params.cv_count);
    lifted.d.resize(params.cv_count);
    for (int m = 0; m < params.cv_count; ++m) {
        lifted.r_b.push_back(uplink_lifted_data(channels, params, m));
        double interference = 0.0;
        for (int n = 0; n < params.pair_count; ++n)
            interference +=
                alpha(m, n) * params.v2v_power_w * std::norm(channels.tx_bs[n].total);
        lifted.d[m] = interference + params.noise_power_w;
    }
    lifted.r_t.resize(params.cv_count);
    for (int m = 0; m < params.cv_count; ++m)
        for (int n = 0; n < params.pair_count; ++n)
            lifted.r_t[m].push_back(build_outage_data(channels, init.psi, params, m, n));

    const SdpSets sets = make_sdp_sets(len, lifted, params, alpha, channels);

    // rank-one feasible start from the incoming state
    const VectorXcd u_r0 = lift_passive(init.theta_r, init.beta_r);
    const VectorXcd u_t0 = lift_passive(init.theta_t, init.beta_t);

    if (sets.halfspace_normals.empty()) {
        solve_reflection_only(lifted, len, u_r0);
        lifted.max_residual = constraint_residual(lifted.v_r, lifted.v_t, sets);
        return lifted;
    }

    const VectorXd x0 = embed(u_r0 * u_r0.adjoint(), u_t0 * u_t0.adjoint());

    numopt::DykstraOptions inner;
    inner.tol = 1e-7;
    numopt::Projection project = [&sets, inner](const VectorXd& x) -> VectorXd {
        return numopt::dykstra(x, sets.projections, inner).point;
    };
    auto objective = [&lifted, len](const VectorXd& x, VectorXd* grad) -> double {
        return sdp_value(x, lifted, len, grad);
    };

    VectorXd grad0(x0.size());
    objective(x0, &grad0);

    numopt::PgOptions opts;
    opts.max_iters = 5000;
    opts.stall_tol = 1e-6;
    opts.init_step = std::sqrt(2.0 * (len + 1)) / std::max(1e-12, grad0.norm());
    const auto pg = numopt::projected_gradient(objective, project, x0, opts);

    numopt::DykstraOptions polish;
    polish.tol = 1e-9;
    const VectorXd polished = numopt::dykstra(pg.x, sets.projections, polish).point;

    lifted.v_r.resize(len + 1, len + 1);
    lifted.v_t.resize(len + 1, len + 1);
    unembed(polished, lifted.v_r, lifted.v_t);
    lifted.v_r = hermitize(lifted.v_r);
    lifted.v_t = hermitize(lifted.v_t);
    lifted.objective = sdp_value(polished, lifted, len, nullptr);
    lifted.iterations = pg.iterations;
    lifted.converged = pg.converged;
    lifted.max_residual = constraint_residual(lifted.v_r, lifted.v_t, sets);
    return lifted;
}

double sdp_objective_of_state(const LiftedMatrices& lifted, const RicsState& state) {
    const VectorXcd u_r = lift_passive(state.theta_r, state.beta_r);
    double value = 0.0;
    for (size_t m = 0; m < lifted.r_b.size(); ++m) {
        const std::complex<double> quad = u_r.dot(lifted.r_b[m] * u_r);
        const double t = std::max(0.0, quad.real() / lifted.d[m]);
        value += std::log2(1.0 + t);
    }
    return value;
}

RandomizeResult gaussian_randomize(const LiftedMatrices& lifted, const Scenario& scenario,
                                   const ChannelSet& channels, const Eigen::MatrixXd& alpha,
                                   const Eigen::VectorXd& rho, int trials,
                                   std::uint64_t seed) {
    const SystemParams& params = scenario.params;
    const int len = params.element_count;

    Eigen::SelfAdjointEigenSolver<MatrixXcd> eig_r(hermitize(lifted.v_r));
    Eigen::SelfAdjointEigenSolver<MatrixXcd> eig_t(hermitize(lifted.v_t));
    const MatrixXcd factor_r =
        eig_r.eigenvectors() * eig_r.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
    const MatrixXcd factor_t =
        eig_t.eigenvectors() * eig_t.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();

    RandomizeResult result;
    result.objective = -std::numeric_limits<double>::infinity();
    const VectorXd psi_vec = VectorXd::Constant(len, params.psi);

    auto consider = [&](const VectorXcd& z_r, const VectorXcd& z_t) {
        const RicsState candidate = state_from_lifted(normalize_last(z_r),
                                                      normalize_last(z_t), lifted.v_r,
                                                      psi_vec);
        if (!state_outage_feasible(candidate, channels, params, alpha)) return;
        ++result.feasible_candidates;
        const double value = objective(scenario, channels, Decision{rho, alpha, candidate});
        if (value > result.objective) {
            result.objective = value;
            result.state = candidate;
        }
    };

    // dominant eigenvector first: exact for rank-one covariances
    consider(eig_r.eigenvectors().col(len), eig_t.eigenvectors().col(len));

    Philox rng(seed, streams::randomize);
    for (int t = 0; t < trials; ++t) {
        VectorXcd w_r(len + 1), w_t(len + 1);
        for (int i = 0; i <= len; ++i) w_r[i] = rng.cgaussian();
        for (int i = 0; i <= len; ++i) w_t[i] = rng.cgaussian();
        consider(factor_r * w_r, factor_t * w_t);
    }

    if (result.feasible_candidates == 0) {
        // fall back to nulling the strongest shared interferer of each pair,
        // elements split round-robin across pairs
        RicsState fallback = RicsState::identity_split(len, params.psi);
        for (int n = 0; n < params.pair_count; ++n) {
            int worst_m = 0;
            double worst = -1.0;
            for (int m = 0; m < params.cv_count; ++m) {
                const double v = alpha(m, n) * channels.cv_rx[m][n].path_power();
                if (v > worst) {
                    worst = v;
                    worst_m = m;
                }
            }
            const auto nulling = interference_nulling_phases(
                channels.cv_rx[worst_m][n].total, channels.rics_rx[n].total,
                channels.cv_rics[worst_m].total, fallback);
            for (int l = n; l < len; l += params.pair_count)
                fallback.theta_t[l] = nulling.theta_t[l];
        }
        result.state = fallback;
        result.fallback = true;
        result.objective = objective(scenario, channels, Decision{rho, alpha, fallback});
    }
    return result;
}

PhiResult solve_phi(const Scenario& scenario, const ChannelSet& channels,
                    const Eigen::MatrixXd& alpha, const Eigen::VectorXd& rho,
                    const RicsState& init, std::uint64_t seed) {
    const SystemParams& params = scenario.params;
    const LiftedMatrices lifted = solve_sdp(channels, params, alpha, init);
    const RandomizeResult randomized = gaussian_randomize(
        lifted, scenario, channels, alpha, rho, params.sdr_trials, seed);

    PhiResult result;
    result.sdp_objective = lifted.objective;
    result.sdp_converged = lifted.converged;
    result.randomize_fallback = randomized.fallback;

    const double init_value = objective(scenario, channels, Decision{rho, alpha, init});
    if (randomized.objective >= init_value) {
        result.state = randomized.state;
        result.objective = randomized.objective;
    } else {
        result.state = init;
        result.objective = init_value;
        result.kept_init = true;
    }
    return result;
}

void dump_lifted_csv(const Eigen::MatrixXcd& v, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open lifted dump file: " + path);
    out << "row,col,re,im\n";
    for (Eigen::Index i = 0; i < v.rows(); ++i)
        for (Eigen::Index j = 0; j < v.cols(); ++j)
            out << i << ',' << j << ',' << v(i, j).real() << ',' << v(i, j).imag() << '\n';
}

}  // namespace ricsim
