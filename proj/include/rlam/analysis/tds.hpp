#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "rlam/toy/bigram_policy.hpp"

namespace rlam::analysis {

enum class TokenShift { unshifted, marginal, shifted };

// Token ids sorted by descending score, ties broken by ascending id. Works
// on probabilities or log-probabilities alike (rank-preserving).
std::vector<int> rank_tokens(const Eigen::VectorXd& scores);

// Rank of the generated token under the reference ranking: rank 1 is
// unshifted, ranks 2-3 marginal, anything deeper shifted. Throws if the
// token is absent from the ranking.
TokenShift classify_token(int rl_choice, const std::vector<int>& reference_ranking);

struct TdsReport {
    std::int64_t unshifted_count = 0;
    std::int64_t marginal_count = 0;
    std::int64_t shifted_count = 0;
    double unshifted_prop = 0.0;
    double marginal_prop = 0.0;
    double shifted_prop = 0.0;
    // Relative-position profile: tokens bucketed by decile of their position
    // within their own generation; rates are per-decile fractions.
    std::array<std::int64_t, 10> tokens_by_decile{};
    std::array<double, 10> marginal_rate_by_decile{};
    std::array<double, 10> shifted_rate_by_decile{};

    std::int64_t total() const {
        return unshifted_count + marginal_count + shifted_count;
    }
};

// Greedy-decodes each prompt with the trained policy and classifies every
// emitted token (end-of-sequence included) by its rank under the reference
// policy's distribution at the identical state.
TdsReport tds_analyze(const toy::BigramPolicy& rl_policy,
                      const toy::BigramPolicy& reference_policy,
                      const std::vector<std::vector<int>>& prompts, int eos_id,
                      int max_new_tokens);

}  // namespace rlam::analysis
