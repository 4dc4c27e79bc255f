#include "rlam/io/run_config.hpp"

#include "rlam/io/text_format.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace rlam::io {
namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
    throw std::invalid_argument("invalid value for config field '" + key +
                                "': '" + value + "'");
}

double parse_double(const std::string& key, const std::string& value) {
    double out = 0.0;
    const char* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) bad_value(key, value);
    return out;
}

int parse_int(const std::string& key, const std::string& value) {
    int out = 0;
    const char* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) bad_value(key, value);
    return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::uint64_t out = 0;
    const char* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) bad_value(key, value);
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    bad_value(key, value);
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

#define RLAM_FIELD(name, parser) \
    {#name, [](RunConfig& c, const std::string& k, const std::string& v) { \
         c.name = parser(k, v); \
     }}

const std::vector<std::pair<std::string, Setter>>& field_table() {
    static const std::vector<std::pair<std::string, Setter>> table = {
        {"preset",
         [](RunConfig& c, const std::string&, const std::string& v) {
             apply_preset(c, v);
         }},
        RLAM_FIELD(vocab_size, parse_int),
        RLAM_FIELD(synonym_pairs, parse_int),
        RLAM_FIELD(train_docs, parse_int),
        RLAM_FIELD(eval_docs, parse_int),
        RLAM_FIELD(corpus_seed, parse_u64),
        RLAM_FIELD(eval_corpus_seed, parse_u64),
        RLAM_FIELD(sft_alpha, parse_double),
        {"reward_kind",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             if (v != "accessibility" && v != "negated_ari") bad_value(k, v);
             c.reward_kind = v;
         }},
        RLAM_FIELD(wa_weight, parse_double),
        RLAM_FIELD(sl_weight, parse_double),
        RLAM_FIELD(wa_floor, parse_double),
        RLAM_FIELD(unfinished_penalty, parse_double),
        RLAM_FIELD(gamma, parse_double),
        RLAM_FIELD(gae_lambda, parse_double),
        RLAM_FIELD(clip_epsilon, parse_double),
        RLAM_FIELD(ppo_epochs, parse_int),
        RLAM_FIELD(micro_batch, parse_int),
        RLAM_FIELD(grad_accum, parse_int),
        RLAM_FIELD(lr, parse_double),
        RLAM_FIELD(adam_beta1, parse_double),
        RLAM_FIELD(adam_beta2, parse_double),
        RLAM_FIELD(adam_eps, parse_double),
        RLAM_FIELD(weight_decay, parse_double),
        RLAM_FIELD(value_coef, parse_double),
        RLAM_FIELD(temperature, parse_double),
        RLAM_FIELD(max_new_tokens, parse_int),
        RLAM_FIELD(whiten_advantages, parse_bool),
        RLAM_FIELD(seed, parse_u64),
        RLAM_FIELD(kl_beta, parse_double),
        RLAM_FIELD(kl_target, parse_double),
        RLAM_FIELD(kl_gain, parse_double),
        RLAM_FIELD(kl_error_clip, parse_double),
        RLAM_FIELD(kl_beta_min, parse_double),
        RLAM_FIELD(kl_beta_max, parse_double),
        RLAM_FIELD(steps, parse_int),
        RLAM_FIELD(instability_threshold, parse_double),
        RLAM_FIELD(checkpoint_every, parse_int),
    };
    return table;
}

#undef RLAM_FIELD

[[noreturn]] void bad_field(const std::string& key, const std::string& what) {
    throw std::invalid_argument("config field '" + key + "' " + what);
}

}  // namespace

void apply_preset(RunConfig& config, const std::string& name) {
    if (name == "rlam-default") {
        config.preset = name;
        config.reward_kind = "accessibility";
        config.wa_weight = 4.0;
        config.sl_weight = 0.1;
        config.vocab_size = 64;
        config.synonym_pairs = 8;
        config.seed = 0;
        config.steps = 300;
        // Toy-scale optimizer and KL settings; the tabular policy needs far
        // larger steps than a neural one, and the per-token KL budget is
        // correspondingly smaller.
        config.lr = 0.008;
        config.kl_target = 1.3;
        config.max_new_tokens = 96;
        return;
    }
    if (name == "rlari") {
        apply_preset(config, "rlam-default");
        config.preset = name;
        config.reward_kind = "negated_ari";
        return;
    }
    bad_value("preset", name);
}

void apply_config_field(RunConfig& config, const std::string& key,
                        const std::string& value) {
    for (const auto& [name, setter] : field_table()) {
        if (name == key) {
            setter(config, key, value);
            return;
        }
    }
    throw std::invalid_argument("unknown config field '" + key + "'");
}

RunConfig parse_run_config(const std::string& text) {
    RunConfig config;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected 'key = value', got '" +
                                        stripped + "'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": empty key");
        apply_config_field(config, key, value);
    }
    return config;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

std::string serialize_run_config(const RunConfig& c) {
    std::ostringstream out;
    out << "# rlam-config v1\n";
    // Every field is written explicitly below, so re-applying the preset on
    // reparse is harmless; keeping the key preserves provenance.
    if (!c.preset.empty()) out << "preset = " << c.preset << "\n";
    out << "vocab_size = " << c.vocab_size << "\n";
    out << "synonym_pairs = " << c.synonym_pairs << "\n";
    out << "train_docs = " << c.train_docs << "\n";
    out << "eval_docs = " << c.eval_docs << "\n";
    out << "corpus_seed = " << c.corpus_seed << "\n";
    out << "eval_corpus_seed = " << c.eval_corpus_seed << "\n";
    out << "sft_alpha = " << format_double(c.sft_alpha) << "\n";
    out << "reward_kind = " << c.reward_kind << "\n";
    out << "wa_weight = " << format_double(c.wa_weight) << "\n";
    out << "sl_weight = " << format_double(c.sl_weight) << "\n";
    out << "wa_floor = " << format_double(c.wa_floor) << "\n";
    out << "unfinished_penalty = " << format_double(c.unfinished_penalty) << "\n";
    out << "gamma = " << format_double(c.gamma) << "\n";
    out << "gae_lambda = " << format_double(c.gae_lambda) << "\n";
    out << "clip_epsilon = " << format_double(c.clip_epsilon) << "\n";
    out << "ppo_epochs = " << c.ppo_epochs << "\n";
    out << "micro_batch = " << c.micro_batch << "\n";
    out << "grad_accum = " << c.grad_accum << "\n";
    out << "lr = " << format_double(c.lr) << "\n";
    out << "adam_beta1 = " << format_double(c.adam_beta1) << "\n";
    out << "adam_beta2 = " << format_double(c.adam_beta2) << "\n";
    out << "adam_eps = " << format_double(c.adam_eps) << "\n";
    out << "weight_decay = " << format_double(c.weight_decay) << "\n";
    out << "value_coef = " << format_double(c.value_coef) << "\n";
    out << "temperature = " << format_double(c.temperature) << "\n";
    out << "max_new_tokens = " << c.max_new_tokens << "\n";
    out << "whiten_advantages = " << (c.whiten_advantages ? "true" : "false")
        << "\n";
    out << "seed = " << c.seed << "\n";
    out << "kl_beta = " << format_double(c.kl_beta) << "\n";
    out << "kl_target = " << format_double(c.kl_target) << "\n";
    out << "kl_gain = " << format_double(c.kl_gain) << "\n";
    out << "kl_error_clip = " << format_double(c.kl_error_clip) << "\n";
    out << "kl_beta_min = " << format_double(c.kl_beta_min) << "\n";
    out << "kl_beta_max = " << format_double(c.kl_beta_max) << "\n";
    out << "steps = " << c.steps << "\n";
    out << "instability_threshold = " << format_double(c.instability_threshold)
        << "\n";
    out << "checkpoint_every = " << c.checkpoint_every << "\n";
    return out.str();
}

void validate_run_config(const RunConfig& c) {
    if (c.vocab_size < 5) bad_field("vocab_size", "must be at least 5");
    if (c.synonym_pairs < 1) bad_field("synonym_pairs", "must be positive");
    if (c.train_docs < 1) bad_field("train_docs", "must be positive");
    if (c.eval_docs < 1) bad_field("eval_docs", "must be positive");
    if (!(c.sft_alpha > 0.0)) bad_field("sft_alpha", "must be positive");
    if (c.reward_kind != "accessibility" && c.reward_kind != "negated_ari")
        bad_field("reward_kind", "must be 'accessibility' or 'negated_ari'");
    if (!std::isfinite(c.wa_weight)) bad_field("wa_weight", "must be finite");
    if (!std::isfinite(c.sl_weight)) bad_field("sl_weight", "must be finite");
    if (!(c.gamma > 0.0) || c.gamma > 1.0)
        bad_field("gamma", "must lie in (0, 1]");
    if (c.gae_lambda < 0.0 || c.gae_lambda > 1.0)
        bad_field("gae_lambda", "must lie in [0, 1]");
    if (!(c.clip_epsilon > 0.0)) bad_field("clip_epsilon", "must be positive");
    if (c.ppo_epochs < 1) bad_field("ppo_epochs", "must be positive");
    if (c.micro_batch < 1) bad_field("micro_batch", "must be positive");
    if (c.grad_accum < 1) bad_field("grad_accum", "must be positive");
    if (!(c.lr > 0.0)) bad_field("lr", "must be positive");
    if (!(c.temperature > 0.0)) bad_field("temperature", "must be positive");
    if (c.max_new_tokens < 1) bad_field("max_new_tokens", "must be positive");
    if (!(c.kl_target > 0.0)) bad_field("kl_target", "must be positive");
    if (!(c.kl_beta_min <= c.kl_beta_max))
        bad_field("kl_beta_min", "must not exceed kl_beta_max");
    if (c.kl_beta < c.kl_beta_min || c.kl_beta > c.kl_beta_max)
        bad_field("kl_beta", "must lie within [kl_beta_min, kl_beta_max]");
    if (c.steps < 0) bad_field("steps", "must be non-negative");
    if (c.instability_threshold < 0.0)
        bad_field("instability_threshold", "must be non-negative");
    if (c.checkpoint_every < 0)
        bad_field("checkpoint_every", "must be non-negative");
}

rl::PpoConfig to_ppo_config(const RunConfig& c) {
    rl::PpoConfig ppo;
    ppo.gamma = c.gamma;
    ppo.gae_lambda = c.gae_lambda;
    ppo.clip_epsilon = c.clip_epsilon;
    ppo.epochs = c.ppo_epochs;
    ppo.micro_batch = c.micro_batch;
    ppo.grad_accum = c.grad_accum;
    ppo.lr = c.lr;
    ppo.adam_beta1 = c.adam_beta1;
    ppo.adam_beta2 = c.adam_beta2;
    ppo.adam_eps = c.adam_eps;
    ppo.weight_decay = c.weight_decay;
    ppo.value_coef = c.value_coef;
    ppo.temperature = c.temperature;
    ppo.max_new_tokens = c.max_new_tokens;
    ppo.whiten_advantages = c.whiten_advantages;
    ppo.seed = c.seed;
    return ppo;
}

reward::RewardConfig to_reward_config(const RunConfig& c) {
    reward::RewardConfig reward;
    reward.kind = c.reward_kind == "negated_ari"
                      ? reward::RewardKind::negated_ari
                      : reward::RewardKind::accessibility;
    reward.wa_weight = c.wa_weight;
    reward.sl_weight = c.sl_weight;
    reward.wa_floor = c.wa_floor;
    reward.unfinished_penalty = c.unfinished_penalty;
    return reward;
}

rl::KlController to_kl_controller(const RunConfig& c) {
    rl::KlController controller;
    controller.beta = c.kl_beta;
    controller.target = c.kl_target;
    controller.gain = c.kl_gain;
    controller.error_clip = c.kl_error_clip;
    controller.min_beta = c.kl_beta_min;
    controller.max_beta = c.kl_beta_max;
    return controller;
}

}  // namespace rlam::io
