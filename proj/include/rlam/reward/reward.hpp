#pragma once

#include <string_view>

#include "rlam/freq/frequency_model.hpp"
#include "rlam/metrics/readability.hpp"

namespace rlam::reward {

enum class RewardKind {
    accessibility,  // weighted word accessibility minus sentence-length cost
    negated_ari,    // contrast objective: minimize the ARI grade level
};

struct RewardConfig {
    RewardKind kind = RewardKind::accessibility;
    double wa_weight = 4.0;
    double sl_weight = 0.1;
    double wa_floor = 10.0;           // subtracted from mean accessibility, clamped at 0
    double unfinished_penalty = -10.0;
};

struct RewardBreakdown {
    double total = 0.0;
    double wa_component = 0.0;  // max(0, mean word accessibility - floor)
    double sl_component = 0.0;  // mean tokens per sentence
    double mean_word_accessibility = 0.0;
    double sentence_accessibility_std = 0.0;
    bool finished = false;
    bool degenerate = false;  // unfinished or unmeasurable, penalty applied
};

// Terminal (sequence-level) reward for a generated text. Unfinished
// generations and texts without any measurable sentence score the fixed
// penalty. For the accessibility kind,
//   total = wa_weight * max(0, mean_wa - wa_floor) - sl_weight * mean_sl;
// for the negated-ARI kind, total = -ARI(text).
RewardBreakdown terminal_reward(std::string_view text, bool finished,
                                const freq::FrequencyModel& model,
                                const RewardConfig& config);

}  // namespace rlam::reward
