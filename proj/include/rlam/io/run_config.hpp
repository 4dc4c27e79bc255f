#pragma once

#include <string>

#include "rlam/reward/reward.hpp"
#include "rlam/rl/kl_controller.hpp"
#include "rlam/rl/trajectory.hpp"

namespace rlam::io {

// Flat key=value run configuration for training and evaluation. A `preset`
// key pulls in a named base configuration; keys after it override the preset
// values. Field names match the CLI's --set overrides one for one.
struct RunConfig {
    std::string preset;  // last preset applied, "" if none

    // Toy task shape.
    int vocab_size = 64;
    int synonym_pairs = 8;
    int train_docs = 64;
    int eval_docs = 32;
    std::uint64_t corpus_seed = 1013;
    std::uint64_t eval_corpus_seed = 2026;
    double sft_alpha = 1.0;

    // Reward.
    std::string reward_kind = "accessibility";  // or "negated_ari"
    double wa_weight = 4.0;
    double sl_weight = 0.1;
    double wa_floor = 10.0;
    double unfinished_penalty = -10.0;

    // Optimization.
    double gamma = 1.0;
    double gae_lambda = 0.95;
    double clip_epsilon = 0.2;
    int ppo_epochs = 4;
    int micro_batch = 4;
    int grad_accum = 4;
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

    // KL control.
    double kl_beta = 0.2;
    double kl_target = 8.0;
    double kl_gain = 0.01;
    double kl_error_clip = 0.2;
    double kl_beta_min = 0.15;
    double kl_beta_max = 0.25;

    // Loop control.
    int steps = 300;
    double instability_threshold = 0.6;
    int checkpoint_every = 0;
};

// Applies a named preset onto `config`. Known names: "rlam-default" (toy
// accessibility reward, tuned toy optimizer settings) and "rlari" (same but
// the reward is the negated readability grade). Unknown name throws with the
// offending value in the message.
void apply_preset(RunConfig& config, const std::string& name);

// Applies a single `key = value` assignment, with the same field-level
// diagnostics as file parsing. `preset = NAME` is a valid assignment.
void apply_config_field(RunConfig& config, const std::string& key,
                        const std::string& value);

// Parses the flat key=value format. Lines starting with '#' and blank lines
// are ignored. Throws std::invalid_argument naming the field for unknown
// keys or unparseable values.
RunConfig parse_run_config(const std::string& text);

RunConfig load_run_config(const std::string& path);

// Canonical text form: version header comment, then every field in a fixed
// order. parse_run_config(serialize_run_config(c)) reproduces c.
std::string serialize_run_config(const RunConfig& config);

// Throws std::invalid_argument naming the first field whose value is out of
// range (non-positive batch sizes, bad reward kind, inverted bounds, ...).
void validate_run_config(const RunConfig& config);

rl::PpoConfig to_ppo_config(const RunConfig& config);
reward::RewardConfig to_reward_config(const RunConfig& config);
rl::KlController to_kl_controller(const RunConfig& config);

}  // namespace rlam::io
