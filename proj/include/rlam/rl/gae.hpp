#pragma once

#include <vector>

#include "rlam/rl/trajectory.hpp"

namespace rlam::rl {

// Generalized advantage estimation by backward recursion:
//   delta_t = r_t + gamma * V(s_{t+1}) - V(s_t),   V after the final step = 0
//   A_t     = delta_t + gamma * lambda * A_{t+1}
std::vector<double> gae_advantages(const std::vector<double>& rewards,
                                   const std::vector<double>& values, double gamma,
                                   double lambda);

// Fills trajectory.advantages and value_targets (= advantages + values).
void compute_gae(Trajectory& trajectory, double gamma, double lambda);

}  // namespace rlam::rl
