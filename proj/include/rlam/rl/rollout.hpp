#pragma once

#include <random>
#include <vector>

#include "rlam/rl/trajectory.hpp"
#include "rlam/toy/bigram_policy.hpp"

namespace rlam::rl {

// Samples one generation from the policy at the given temperature, recording
// untempered log-probs for the sampled and reference policies plus the value
// estimate of each pre-action state. Stops after emitting eos_id (included in
// actions, finished = true) or after max_new_tokens actions. Rewards are left
// at zero; the caller scores the finished text and sets terminal_reward.
Trajectory sample_rollout(const toy::BigramPolicy& policy,
                          const toy::BigramPolicy& reference,
                          const toy::TabularValue& value,
                          const std::vector<int>& prompt, int eos_id,
                          double temperature, int max_new_tokens,
                          std::mt19937_64& rng);

// Deterministic argmax decode (ties toward the lowest id). Returns the
// emitted tokens, including the final eos_id when one is produced.
std::vector<int> greedy_decode(const toy::BigramPolicy& policy,
                               const std::vector<int>& prompt, int eos_id,
                               int max_new_tokens);

// One trajectory per prompt, in order, from a single engine seeded with
// `seed`; fixed inputs give bit-identical trajectories across runs.
std::vector<Trajectory> collect_rollouts(const toy::BigramPolicy& policy,
                                         const toy::BigramPolicy& reference,
                                         const toy::TabularValue& value,
                                         const std::vector<std::vector<int>>& prompts,
                                         int eos_id, const PpoConfig& cfg,
                                         std::uint64_t seed);

}  // namespace rlam::rl
