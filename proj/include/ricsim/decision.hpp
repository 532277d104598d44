#pragma once

#include <Eigen/Dense>

#include "ricsim/rics.hpp"

namespace ricsim {

// The full set of decision variables: offload ratios, spectrum sharing and
// surface configuration. alpha is kept relaxed in [0,1]; rounding to the
// binary constraint is a separate step.
struct Decision {
    Eigen::VectorXd rho;    // per-CV offload ratio, [0,1]
    Eigen::MatrixXd alpha;  // M x N sharing matrix
    RicsState rics;
};

}  // namespace ricsim
