#include "rlam/rl/gae.hpp"

#include <stdexcept>

namespace rlam::rl {

std::vector<double> gae_advantages(const std::vector<double>& rewards,
                                   const std::vector<double>& values, double gamma,
                                   double lambda) {
    if (rewards.size() != values.size())
        throw std::invalid_argument("rewards and values must align");
    const std::size_t n = rewards.size();
    std::vector<double> adv(n);
    double next_adv = 0.0;
    double next_value = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        double delta = rewards[i] + gamma * next_value - values[i];
        next_adv = delta + gamma * lambda * next_adv;
        next_value = values[i];
        adv[i] = next_adv;
    }
    return adv;
}

void compute_gae(Trajectory& trajectory, double gamma, double lambda) {
    trajectory.advantages =
        gae_advantages(trajectory.rewards, trajectory.values, gamma, lambda);
    trajectory.value_targets.resize(trajectory.advantages.size());
    for (std::size_t i = 0; i < trajectory.advantages.size(); ++i)
        trajectory.value_targets[i] = trajectory.advantages[i] + trajectory.values[i];
}

}  // namespace rlam::rl
