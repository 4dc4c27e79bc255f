#include "rlam/rl/train.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "rlam/rl/rollout.hpp"
#include "rlam/util/rng.hpp"

namespace rlam::rl {

TrainResult train(toy::BigramPolicy& policy, const toy::BigramPolicy& reference,
                  toy::TabularValue& value,
                  const std::vector<std::vector<int>>& prompts, int eos_id,
                  const GenerationScorer& scorer, const PpoConfig& cfg,
                  KlController& controller, const TrainOptions& options) {
    if (prompts.empty()) throw std::invalid_argument("train: no prompts");
    if (!scorer) throw std::invalid_argument("train: no scorer");
    if (options.steps < 0) throw std::invalid_argument("train: negative step count");

    std::mt19937_64 rng(cfg.seed);
    AdamW policy_opt(cfg.lr, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps,
                     cfg.weight_decay);
    AdamW value_opt(cfg.lr, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps,
                    cfg.weight_decay);

    TrainResult result;
    for (int step = 1; step <= options.steps; ++step) {
        const Eigen::MatrixXd logits_snapshot = policy.logits;
        const Eigen::VectorXd value_snapshot = value.v;

        std::vector<Trajectory> batch;
        batch.reserve(cfg.batch_size());
        for (int b = 0; b < cfg.batch_size(); ++b) {
            const auto& prompt = prompts[util::uniform_index(rng, prompts.size())];
            batch.push_back(sample_rollout(policy, reference, value, prompt, eos_id,
                                           cfg.temperature, cfg.max_new_tokens, rng));
        }

        TrainStepStats stats;
        stats.step = step;
        double spread_sum = 0.0;
        int spread_count = 0;
        for (Trajectory& traj : batch) {
            std::vector<int> tokens = traj.actions;
            if (traj.finished) tokens.pop_back();
            const ScoredGeneration scored = scorer(tokens, traj.finished);
            traj.terminal_reward = scored.reward;
            traj.rewards.back() = scored.reward;
            stats.reward_mean += scored.reward;
            if (traj.finished) stats.finished_fraction += 1.0;
            if (scored.sentence_spread) {
                spread_sum += *scored.sentence_spread;
                ++spread_count;
            }
        }
        const double n = static_cast<double>(batch.size());
        stats.reward_mean /= n;
        for (const Trajectory& traj : batch) {
            const double d = traj.terminal_reward - stats.reward_mean;
            stats.reward_std += d * d;
        }
        stats.reward_std = std::sqrt(stats.reward_std / n);
        stats.finished_fraction /= n;
        if (spread_count > 0) stats.sentence_spread = spread_sum / spread_count;
        stats.unstable = stats.sentence_spread > options.instability_threshold;
        stats.beta_kl = controller.beta;

        bool ok = true;
        try {
            const UpdateStats update = ppo_update(policy, value, batch, cfg,
                                                  controller.beta, policy_opt, value_opt);
            stats.kl = update.mean_kl;
            stats.clip_fraction = update.clip_fraction_last;
            stats.policy_loss = update.policy_loss;
            stats.value_loss = update.value_loss;
        } catch (const std::runtime_error& e) {
            result.halted = true;
            result.halt_reason = e.what();
            ok = false;
        }
        if (ok && (!policy.logits.allFinite() || !value.v.allFinite())) {
            result.halted = true;
            result.halt_reason = "non-finite parameters after update";
            ok = false;
        }
        if (!ok) {
            policy.logits = logits_snapshot;
            value.v = value_snapshot;
            break;
        }

        kl_controller_step(controller, stats.kl);
        result.log.push_back(stats);
        result.steps_completed = step;
        if (options.on_step) options.on_step(stats);
        if (options.on_checkpoint && options.checkpoint_every > 0 &&
            step % options.checkpoint_every == 0)
            options.on_checkpoint(step, policy, value);
    }
    if (options.on_checkpoint && options.steps > 0)
        options.on_checkpoint(result.steps_completed, policy, value);
    return result;
}

}  // namespace rlam::rl
