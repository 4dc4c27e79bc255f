#include "rlam/rl/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rlam/rl/gae.hpp"

namespace rlam::rl {

double value_mse(const std::vector<double>& values, const std::vector<double>& targets) {
    if (values.size() != targets.size() || values.empty())
        throw std::invalid_argument("value_mse: mismatched or empty inputs");
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = values[i] - targets[i];
        acc += d * d;
    }
    return acc / static_cast<double>(values.size());
}

std::vector<std::vector<double>> prepare_advantages(std::vector<Trajectory>& batch,
                                                    const PpoConfig& cfg,
                                                    double kl_beta) {
    if (batch.empty()) throw std::invalid_argument("prepare_advantages: empty batch");
    std::size_t total_tokens = 0;
    std::vector<std::vector<double>> adv(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        Trajectory& traj = batch[i];
        if (traj.length() == 0)
            throw std::invalid_argument("prepare_advantages: empty rollout");
        compute_gae(traj, cfg.gamma, cfg.gae_lambda);
        adv[i].resize(traj.length());
        for (std::size_t t = 0; t < traj.length(); ++t)
            adv[i][t] = traj.advantages[t] - kl_beta * traj.kl_terms[t];
        total_tokens += traj.length();
    }

    if (cfg.whiten_advantages) {
        double mean = 0.0;
        for (const auto& a : adv)
            for (double x : a) mean += x;
        mean /= static_cast<double>(total_tokens);
        double var = 0.0;
        for (const auto& a : adv)
            for (double x : a) var += (x - mean) * (x - mean);
        const double std = std::sqrt(var / static_cast<double>(total_tokens));
        for (auto& a : adv)
            for (double& x : a) x = (x - mean) / (std + 1e-8);
    }
    return adv;
}

namespace {

// Gradient of min(r*A, clip(r)*A) w.r.t. the current log-prob is zero exactly
// when the clipped branch is active and flat.
bool clip_blocks_gradient(double ratio, double advantage, double eps) {
    return (advantage >= 0.0 && ratio > 1.0 + eps) ||
           (advantage <= 0.0 && ratio < 1.0 - eps);
}

}  // namespace

PpoBatchEval ppo_eval_range(const toy::BigramPolicy& policy,
                            const toy::TabularValue& value,
                            const std::vector<Trajectory>& batch,
                            const std::vector<std::vector<double>>& advantages,
                            std::size_t begin, std::size_t end,
                            std::size_t batch_total, const PpoConfig& cfg) {
    const int vocab = policy.vocab_size();
    PpoBatchEval eval;
    eval.policy_grad = Eigen::MatrixXd::Zero(vocab, vocab);
    eval.value_grad = Eigen::VectorXd::Zero(vocab);
    const double eps = cfg.clip_epsilon;

    for (std::size_t i = begin; i < end; ++i) {
        const Trajectory& traj = batch[i];
        const std::size_t len = traj.length();
        const double w =
            1.0 / (static_cast<double>(batch_total) * static_cast<double>(len));
        int state = traj.prompt.back();
        for (std::size_t t = 0; t < len; ++t) {
            const int action = traj.actions[t];
            const Eigen::VectorXd row_lp = policy.row_log_probs(state);
            const double ratio = std::exp(row_lp[action] - traj.logprobs[t]);
            const double a = advantages[i][t];
            const double clipped_ratio = std::clamp(ratio, 1.0 - eps, 1.0 + eps);
            eval.surrogate += w * std::min(ratio * a, clipped_ratio * a);
            eval.ratio_sum += ratio;
            ++eval.tokens;
            if (std::abs(ratio - 1.0) > eps) ++eval.clipped;
            if (!clip_blocks_gradient(ratio, a, eps)) {
                const double scale = w * ratio * a;
                eval.policy_grad.row(state) -=
                    scale * toy::log_prob_grad(row_lp, action).transpose();
            }

            const double diff = value.value(state) - traj.value_targets[t];
            eval.value_term += w * diff * diff;
            eval.value_grad[state] += cfg.value_coef * w * 2.0 * diff;

            state = action;
        }
    }
    return eval;
}

UpdateStats ppo_update(toy::BigramPolicy& policy, toy::TabularValue& value,
                       std::vector<Trajectory>& batch, const PpoConfig& cfg,
                       double kl_beta, AdamW& policy_opt, AdamW& value_opt) {
    const std::size_t n = batch.size();
    const int vocab = policy.vocab_size();
    const auto adv = prepare_advantages(batch, cfg, kl_beta);

    UpdateStats stats;
    std::size_t total_tokens = 0;
    for (const Trajectory& traj : batch) {
        for (double k : traj.kl_terms) stats.mean_kl += k;
        for (double a : traj.advantages) stats.mean_advantage_raw += a;
        total_tokens += traj.length();
    }
    stats.mean_kl /= static_cast<double>(total_tokens);
    stats.mean_advantage_raw /= static_cast<double>(total_tokens);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        Eigen::MatrixXd policy_grad = Eigen::MatrixXd::Zero(vocab, vocab);
        Eigen::VectorXd value_grad = Eigen::VectorXd::Zero(vocab);
        double surrogate = 0.0, vterm = 0.0, ratio_sum = 0.0;
        std::size_t clipped = 0;
        int pending_chunks = 0;

        auto flush = [&]() {
            if (!policy_grad.allFinite() || !value_grad.allFinite())
                throw std::runtime_error("non-finite gradient in policy update");
            policy_opt.step(policy.logits, policy_grad);
            value_opt.step(value.v, value_grad);
            ++stats.optimizer_steps;
            policy_grad.setZero();
            value_grad.setZero();
            pending_chunks = 0;
        };

        const std::size_t chunk = static_cast<std::size_t>(cfg.micro_batch);
        for (std::size_t start = 0; start < n; start += chunk) {
            const std::size_t stop = std::min(n, start + chunk);
            PpoBatchEval eval = ppo_eval_range(policy, value, batch, adv, start, stop, n, cfg);
            surrogate += eval.surrogate;
            vterm += eval.value_term;
            ratio_sum += eval.ratio_sum;
            clipped += eval.clipped;
            policy_grad += eval.policy_grad;
            value_grad += eval.value_grad;
            if (++pending_chunks == cfg.grad_accum) flush();
        }
        if (pending_chunks > 0) flush();

        if (!std::isfinite(surrogate) || !std::isfinite(vterm))
            throw std::runtime_error("non-finite loss in policy update");

        const double clip_fraction =
            static_cast<double>(clipped) / static_cast<double>(total_tokens);
        if (epoch == 0) stats.clip_fraction_first = clip_fraction;
        stats.clip_fraction_last = clip_fraction;
        stats.mean_ratio_last = ratio_sum / static_cast<double>(total_tokens);
        stats.policy_loss = -surrogate;
        stats.value_loss = vterm;
    }
    return stats;
}

}  // namespace rlam::rl
