#pragma once

#include <cstddef>
#include <vector>

#include "rlam/rl/adamw.hpp"
#include "rlam/rl/trajectory.hpp"
#include "rlam/toy/bigram_policy.hpp"

namespace rlam::rl {

struct UpdateStats {
    double policy_loss = 0.0;  // negated clipped surrogate, last epoch
    double value_loss = 0.0;   // unweighted value error term, last epoch
    double mean_kl = 0.0;      // token mean of rollout kl_terms across the batch
    double mean_ratio_last = 1.0;
    double clip_fraction_first = 0.0;  // tokens with |ratio - 1| > epsilon
    double clip_fraction_last = 0.0;
    double mean_advantage_raw = 0.0;  // before penalty and whitening
    int optimizer_steps = 0;
};

// Mean squared error between one trajectory's value estimates and targets.
double value_mse(const std::vector<double>& values, const std::vector<double>& targets);

// Advantage pipeline shared by the update and its tests: GAE fills each
// trajectory's advantages and value targets from the raw rewards, then
// kl_beta * kl_terms is subtracted per token, then (if configured) the
// result is whitened across every token in the batch: (a - mean) divided by
// the population standard deviation + 1e-8.
std::vector<std::vector<double>> prepare_advantages(std::vector<Trajectory>& batch,
                                                    const PpoConfig& cfg,
                                                    double kl_beta);

// Loss, diagnostics, and exact gradients of one pass over trajectories
// [begin, end) at the current parameters, which are left untouched.
// Per-token weight is 1 / (batch_total * T_i), so chunk results summed over
// a partition of the batch equal one full-batch evaluation.
struct PpoBatchEval {
    double surrogate = 0.0;   // clipped objective contribution (maximized)
    double value_term = 0.0;  // squared-error contribution (unweighted)
    Eigen::MatrixXd policy_grad;  // d loss / d logits, loss = -surrogate + value_coef * value_term
    Eigen::VectorXd value_grad;   // d loss / d value table
    std::size_t tokens = 0;
    std::size_t clipped = 0;  // tokens with |ratio - 1| > epsilon
    double ratio_sum = 0.0;

    double loss(double value_coef) const { return -surrogate + value_coef * value_term; }
};
PpoBatchEval ppo_eval_range(const toy::BigramPolicy& policy,
                            const toy::TabularValue& value,
                            const std::vector<Trajectory>& batch,
                            const std::vector<std::vector<double>>& advantages,
                            std::size_t begin, std::size_t end,
                            std::size_t batch_total, const PpoConfig& cfg);

// One PPO update over a batch of scored rollouts.
//
// For cfg.epochs passes the policy maximizes
//   (1/n) sum_traj (1/T) sum_t min(ratio * A, clip(ratio, 1-eps, 1+eps) * A)
// with ratio = exp(logprob_now - logprob_rollout) and A from
// prepare_advantages, while the value table minimizes value_coef times the
// squared-error term. Gradients accumulate over micro_batch-sized chunks and
// the optimizers step every grad_accum chunks (and at epoch end), so a full
// batch of micro_batch * grad_accum rollouts steps exactly once per epoch.
//
// Throws if any loss or gradient turns non-finite; parameters keep whatever
// state the last completed optimizer step left them in.
UpdateStats ppo_update(toy::BigramPolicy& policy, toy::TabularValue& value,
                       std::vector<Trajectory>& batch, const PpoConfig& cfg,
                       double kl_beta, AdamW& policy_opt, AdamW& value_opt);

}  // namespace rlam::rl
