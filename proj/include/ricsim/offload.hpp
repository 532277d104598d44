#pragma once

#include <Eigen/Dense>

#include "ricsim/channel.hpp"
#include "ricsim/decision.hpp"
#include "ricsim/scenario.hpp"

namespace ricsim {

struct Delays {
    double local_s = 0.0;    // (1-rho) c / f
    double offload_s = 0.0;  // rho (s/R + c/F); +inf when rho>0 with zero rate
    double total_s = 0.0;    // max of the two branches
};

// uplink_rate_bps is the throughput actually available to this CV's
// offloaded bits (after any spectrum sharing between CVs).
Delays delays(const TaskSpec& task, double rho, double uplink_rate_bps, double mec_cpu_hz);

// Mean inference accuracy (1-rho) lambda A_B + rho A_B.
double accuracy(double rho, const SystemParams& params);

// Accuracy per second of end-to-end delay. Throws "degenerate task" when
// both delay branches are zero; an infinite offload delay yields 0 so the
// optimizer can move away from it.
double safety_coefficient(const TaskSpec& task, double rho, double uplink_rate_bps,
                          const SystemParams& params);

// V2I spectrum is time-shared between the CVs, so each one sees an equal
// fraction of its PHY uplink rate while offloading.
double tdm_uplink_share(double phy_rate_bps, int cv_count);

// Sum of safety coefficients under the decision-induced rates.
double objective(const Scenario& scenario, const ChannelSet& channels,
                 const Decision& decision);

Eigen::VectorXd per_cv_safety(const Scenario& scenario, const ChannelSet& channels,
                              const Decision& decision);

}  // namespace ricsim
