#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rlam::metrics {

// Simplification score in [0, 100] comparing a candidate rewrite against a
// source and one or more references, averaged over n-gram orders 1..4.
// N-grams are compared as sets; multiple references contribute the union of
// their n-grams. Per order the score is the mean of keep-F1, add-F1, and
// delete-precision, with empty/empty ratios counting as 1. A candidate
// identical to the sole reference scores exactly 100.
double sari(const std::vector<std::string>& source_tokens,
            const std::vector<std::string>& candidate_tokens,
            const std::vector<std::vector<std::string>>& reference_tokens);

// Convenience overload: tokenizes each text and uses the flattened token
// stream, punctuation included.
double sari(std::string_view source_text, std::string_view candidate_text,
            const std::vector<std::string>& reference_texts);

}  // namespace rlam::metrics
