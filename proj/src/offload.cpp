#include "ricsim/offload.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ricsim/link.hpp"

namespace ricsim {

Delays delays(const TaskSpec& task, double rho, double uplink_rate_bps, double mec_cpu_hz) {
    Delays d;
    d.local_s = (1.0 - rho) * task.cycles / task.cpu_hz;
    if (rho <= 0.0) {
        d.offload_s = 0.0;
    } else if (uplink_rate_bps <= 0.0) {
        d.offload_s = std::numeric_limits<double>::infinity();
    } else {
        d.offload_s = rho * (task.size_bits / uplink_rate_bps + task.cycles / mec_cpu_hz);
    }
    d.total_s = std::max(d.local_s, d.offload_s);
    return d;
}

double accuracy(double rho, const SystemParams& params) {
    return (1.0 - rho) * params.lambda_acc * params.server_accuracy +
           rho * params.server_accuracy;
}

double safety_coefficient(const TaskSpec& task, double rho, double uplink_rate_bps,
                          const SystemParams& params) {
    const Delays d = delays(task, rho, uplink_rate_bps, params.mec_cpu_hz);
    if (d.total_s == 0.0) throw std::invalid_argument("degenerate task: zero delay");
    if (std::isinf(d.total_s)) return 0.0;
    const double numerator =
        params.server_accuracy * (params.lambda_acc + rho * (1.0 - params.lambda_acc));
    return numerator / d.total_s;
}

double tdm_uplink_share(double phy_rate_bps, int cv_count) {
    return phy_rate_bps / static_cast<double>(cv_count);
}

Eigen::VectorXd per_cv_safety(const Scenario& scenario, const ChannelSet& channels,
                              const Decision& decision) {
    const SystemParams& params = scenario.params;
    Eigen::VectorXd s(params.cv_count);
    for (int m = 0; m < params.cv_count; ++m) {
        const double gamma = sinr_uplink(channels, decision.rics, decision.alpha, params, m);
        const double share = tdm_uplink_share(rate_bps(gamma, params.bandwidth_hz),
                                              params.cv_count);
        s[m] = safety_coefficient(scenario.tasks[m], decision.rho[m], share, params);
    }
    return s;
}

double objective(const Scenario& scenario, const ChannelSet& channels,
                 const Decision& decision) {
    return per_cv_safety(scenario, channels, decision).sum();
}

}  // namespace ricsim
