#pragma once

namespace rlam::rl {

// Adaptive coefficient for the per-token KL penalty. Each update nudges beta
// multiplicatively toward the divergence target:
//   err  = clamp((measured - target) / target, -error_clip, +error_clip)
//   beta = clamp(beta * (1 + gain * err), min_beta, max_beta)
struct KlController {
    double beta = 0.2;
    double target = 8.0;
    double gain = 0.01;
    double error_clip = 0.2;
    double min_beta = 0.15;
    double max_beta = 0.25;
};

// Applies one controller update in place and returns the new beta.
double kl_controller_step(KlController& controller, double measured_kl);

}  // namespace rlam::rl
