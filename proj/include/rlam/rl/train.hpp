#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rlam/rl/kl_controller.hpp"
#include "rlam/rl/ppo.hpp"
#include "rlam/rl/trajectory.hpp"
#include "rlam/toy/bigram_policy.hpp"

namespace rlam::rl {

// Verdict of the scoring callback on one generation. `tokens` passed to the
// scorer exclude the trailing end-of-sequence id; `finished` says whether one
// was emitted. sentence_spread carries the per-sentence accessibility
// standard deviation when the text was measurable (the instability monitor).
struct ScoredGeneration {
    double reward = 0.0;
    std::optional<double> sentence_spread;
};
using GenerationScorer =
    std::function<ScoredGeneration(const std::vector<int>& tokens, bool finished)>;

struct TrainStepStats {
    int step = 0;  // 1-based
    double reward_mean = 0.0;
    double reward_std = 0.0;  // population, across the batch
    double kl = 0.0;          // batch token-mean sampled KL
    double beta_kl = 0.0;     // coefficient used for this update's penalty
    double clip_fraction = 0.0;
    double policy_loss = 0.0;
    double value_loss = 0.0;
    double sentence_spread = 0.0;  // mean over measurable generations
    double finished_fraction = 0.0;
    bool unstable = false;  // sentence_spread above the configured threshold
};

struct TrainOptions {
    int steps = 300;
    double instability_threshold = 0.6;
    int checkpoint_every = 0;  // 0 = final checkpoint callback only
    std::function<void(const TrainStepStats&)> on_step;
    std::function<void(int step, const toy::BigramPolicy&, const toy::TabularValue&)>
        on_checkpoint;
};

struct TrainResult {
    std::vector<TrainStepStats> log;
    int steps_completed = 0;
    bool halted = false;  // non-finite update; parameters restored to the
    std::string halt_reason;  // last finite state
};

// Complete training loop. Per step: draw cfg.batch_size() prompts uniformly
// with replacement, sample rollouts at cfg.temperature, score terminal
// rewards, run one PPO update using the controller's current coefficient for
// the per-token penalty, then adapt the controller from the batch's token-
// mean sampled KL. A non-finite loss, gradient, or parameter halts training
// and restores the parameters saved before the failing step. Deterministic
// for fixed inputs and cfg.seed; options.steps = 0 leaves the policy
// bit-identical.
TrainResult train(toy::BigramPolicy& policy, const toy::BigramPolicy& reference,
                  toy::TabularValue& value,
                  const std::vector<std::vector<int>>& prompts, int eos_id,
                  const GenerationScorer& scorer, const PpoConfig& cfg,
                  KlController& controller, const TrainOptions& options);

}  // namespace rlam::rl
