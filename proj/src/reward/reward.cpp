#include "rlam/reward/reward.hpp"

#include <algorithm>
#include <cmath>

#include "rlam/text/tokenizer.hpp"

namespace rlam::reward {

RewardBreakdown terminal_reward(std::string_view text, bool finished,
                                const freq::FrequencyModel& model,
                                const RewardConfig& config) {
    RewardBreakdown out;
    out.finished = finished;

    auto doc = text::tokenize(text);
    bool has_words = false;
    for (const auto& sentence : doc.sentences) {
        for (const auto& token : sentence) {
            if (text::is_word_token(token)) {
                has_words = true;
                break;
            }
        }
        if (has_words) break;
    }
    if (!finished || doc.sentence_count() == 0 || !has_words) {
        out.degenerate = true;
        out.total = config.unfinished_penalty;
        return out;
    }

    auto report = metrics::compute_report(doc, &model, nullptr);
    out.mean_word_accessibility = *report.mean_word_accessibility;
    out.sentence_accessibility_std = *report.sentence_accessibility_std;
    out.sl_component = report.mean_sentence_length;
    out.wa_component = std::max(0.0, out.mean_word_accessibility - config.wa_floor);

    switch (config.kind) {
        case RewardKind::accessibility:
            out.total = config.wa_weight * out.wa_component -
                        config.sl_weight * out.sl_component;
            break;
        case RewardKind::negated_ari:
            out.total = -report.ari;
            break;
    }
    return out;
}

}  // namespace rlam::reward
