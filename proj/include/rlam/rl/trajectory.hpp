#pragma once

#include <cstdint>
#include <vector>

namespace rlam::rl {

// One sampled generation. All per-token vectors share the same length; the
// state for step t is the last token before action t (prompt tail for t=0).
// Log-probs are untempered log softmax values even when sampling used a
// temperature.
struct Trajectory {
    std::vector<int> prompt;
    std::vector<int> actions;
    std::vector<double> logprobs;      // behavior policy at rollout time
    std::vector<double> ref_logprobs;  // frozen reference policy
    std::vector<double> kl_terms;      // logprobs - ref_logprobs
    std::vector<double> values;        // V(s_t) at rollout time
    std::vector<double> rewards;       // zeros except the terminal step
    bool finished = false;
    double terminal_reward = 0.0;

    std::vector<double> advantages;     // filled by compute_gae
    std::vector<double> value_targets;  // advantages + values

    std::size_t length() const { return actions.size(); }
};

struct PpoConfig {
    double gamma = 1.0;
    double gae_lambda = 0.95;
    double clip_epsilon = 0.2;
    int epochs = 4;
    int micro_batch = 4;
    int grad_accum = 4;  // update batch = micro_batch * grad_accum rollouts
    double lr = 1e-6;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    double weight_decay = 0.0;
    double value_coef = 0.1;
    double temperature = 0.7;
    int max_new_tokens = 241;
    bool whiten_advantages = true;
    std::uint64_t seed = 0;

    int batch_size() const { return micro_batch * grad_accum; }
};

}  // namespace rlam::rl
