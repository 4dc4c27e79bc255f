#include "rlam/analysis/tds.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace rlam::analysis {

std::vector<int> rank_tokens(const Eigen::VectorXd& scores) {
    std::vector<int> ids(static_cast<std::size_t>(scores.size()));
    std::iota(ids.begin(), ids.end(), 0);
    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    return ids;
}

TokenShift classify_token(int rl_choice, const std::vector<int>& reference_ranking) {
    const auto it =
        std::find(reference_ranking.begin(), reference_ranking.end(), rl_choice);
    if (it == reference_ranking.end())
        throw std::invalid_argument("classify_token: token not in the ranking");
    const auto rank = (it - reference_ranking.begin()) + 1;
    if (rank == 1) return TokenShift::unshifted;
    if (rank <= 3) return TokenShift::marginal;
    return TokenShift::shifted;
}

TdsReport tds_analyze(const toy::BigramPolicy& rl_policy,
                      const toy::BigramPolicy& reference_policy,
                      const std::vector<std::vector<int>>& prompts, int eos_id,
                      int max_new_tokens) {
    if (prompts.empty()) throw std::invalid_argument("tds_analyze: no prompts");
    if (rl_policy.vocab_size() != reference_policy.vocab_size())
        throw std::invalid_argument("tds_analyze: vocabulary mismatch");

    TdsReport report;
    std::array<std::int64_t, 10> marginal_by_decile{};
    std::array<std::int64_t, 10> shifted_by_decile{};
    for (const auto& prompt : prompts) {
        if (prompt.empty()) throw std::invalid_argument("tds_analyze: empty prompt");
        // First pass: decode so relative positions know the final length.
        std::vector<int> generated;
        int state = prompt.back();
        for (int t = 0; t < max_new_tokens; ++t) {
            const int action = rl_policy.greedy(state);
            generated.push_back(action);
            if (action == eos_id) break;
            state = action;
        }

        state = prompt.back();
        const auto len = static_cast<std::int64_t>(generated.size());
        for (std::int64_t t = 0; t < len; ++t) {
            const int action = generated[static_cast<std::size_t>(t)];
            const std::vector<int> ranking =
                rank_tokens(reference_policy.row_log_probs(state));
            const TokenShift shift = classify_token(action, ranking);
            const auto decile = static_cast<std::size_t>((10 * t) / len);
            ++report.tokens_by_decile[decile];
            switch (shift) {
                case TokenShift::unshifted: ++report.unshifted_count; break;
                case TokenShift::marginal:
                    ++report.marginal_count;
                    ++marginal_by_decile[decile];
                    break;
                case TokenShift::shifted:
                    ++report.shifted_count;
                    ++shifted_by_decile[decile];
                    break;
            }
            state = action;
        }
    }

    const double total = static_cast<double>(report.total());
    report.unshifted_prop = static_cast<double>(report.unshifted_count) / total;
    report.marginal_prop = static_cast<double>(report.marginal_count) / total;
    report.shifted_prop = static_cast<double>(report.shifted_count) / total;
    for (std::size_t d = 0; d < 10; ++d) {
        if (report.tokens_by_decile[d] == 0) continue;
        const double n = static_cast<double>(report.tokens_by_decile[d]);
        report.marginal_rate_by_decile[d] = static_cast<double>(marginal_by_decile[d]) / n;
        report.shifted_rate_by_decile[d] = static_cast<double>(shifted_by_decile[d]) / n;
    }
    return report;
}

}  // namespace rlam::analysis
