#include "rlam/rl/rollout.hpp"

#include <stdexcept>

#include "rlam/util/rng.hpp"

namespace rlam::rl {

Trajectory sample_rollout(const toy::BigramPolicy& policy,
                          const toy::BigramPolicy& reference,
                          const toy::TabularValue& value,
                          const std::vector<int>& prompt, int eos_id,
                          double temperature, int max_new_tokens,
                          std::mt19937_64& rng) {
    if (prompt.empty()) throw std::invalid_argument("sample_rollout: empty prompt");
    if (max_new_tokens <= 0)
        throw std::invalid_argument("sample_rollout: max_new_tokens must be positive");

    Trajectory traj;
    traj.prompt = prompt;
    int state = prompt.back();
    for (int t = 0; t < max_new_tokens; ++t) {
        const Eigen::VectorXd probs = policy.row_probs(state, temperature);
        const int action = static_cast<int>(util::sample_categorical(rng, probs));
        traj.actions.push_back(action);
        traj.logprobs.push_back(policy.row_log_probs(state)[action]);
        traj.ref_logprobs.push_back(reference.row_log_probs(state)[action]);
        traj.kl_terms.push_back(traj.logprobs.back() - traj.ref_logprobs.back());
        traj.values.push_back(value.value(state));
        traj.rewards.push_back(0.0);
        if (action == eos_id) {
            traj.finished = true;
            break;
        }
        state = action;
    }
    return traj;
}

std::vector<Trajectory> collect_rollouts(const toy::BigramPolicy& policy,
                                         const toy::BigramPolicy& reference,
                                         const toy::TabularValue& value,
                                         const std::vector<std::vector<int>>& prompts,
                                         int eos_id, const PpoConfig& cfg,
                                         std::uint64_t seed) {
    if (prompts.empty()) throw std::invalid_argument("collect_rollouts: no prompts");
    std::mt19937_64 rng(seed);
    std::vector<Trajectory> batch;
    batch.reserve(prompts.size());
    for (const auto& prompt : prompts)
        batch.push_back(sample_rollout(policy, reference, value, prompt, eos_id,
                                       cfg.temperature, cfg.max_new_tokens, rng));
    return batch;
}

std::vector<int> greedy_decode(const toy::BigramPolicy& policy,
                               const std::vector<int>& prompt, int eos_id,
                               int max_new_tokens) {
    if (prompt.empty()) throw std::invalid_argument("greedy_decode: empty prompt");
    std::vector<int> out;
    int state = prompt.back();
    for (int t = 0; t < max_new_tokens; ++t) {
        const int action = policy.greedy(state);
        out.push_back(action);
        if (action == eos_id) break;
        state = action;
    }
    return out;
}

}  // namespace rlam::rl
