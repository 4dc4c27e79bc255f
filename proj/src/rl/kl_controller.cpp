#include "rlam/rl/kl_controller.hpp"

#include <algorithm>
#include <stdexcept>

namespace rlam::rl {

double kl_controller_step(KlController& controller, double measured_kl) {
    if (controller.target <= 0.0)
        throw std::invalid_argument("kl controller target must be positive");
    if (controller.min_beta > controller.max_beta)
        throw std::invalid_argument("kl controller bounds are inverted");
    double err = (measured_kl - controller.target) / controller.target;
    err = std::clamp(err, -controller.error_clip, controller.error_clip);
    double beta = controller.beta * (1.0 + controller.gain * err);
    controller.beta = std::clamp(beta, controller.min_beta, controller.max_beta);
    return controller.beta;
}

}  // namespace rlam::rl
