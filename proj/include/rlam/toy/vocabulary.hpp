#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace rlam::toy {

// Synthetic vocabulary for the desk-scale task. Fixed specials: 0 ".", the
// sentence terminator; 1 "|", the prompt separator; 2 "</s>", end of
// generation. Word ids start at 3; each word is a four-letter title-case
// pseudo-word (title case so re-tokenized sentence boundaries resolve).
//
// Words carry a Zipf sampling weight 1/rank. Synonym pairs are (rare,
// common) id pairs with identical surface length; commons hold the top odd
// ranks, rares the very last ranks, so every rare type is strictly less
// frequent than every common type. Fillers take the remaining ranks.
class ToyVocabulary {
  public:
    static constexpr int kPeriod = 0;
    static constexpr int kSeparator = 1;
    static constexpr int kEos = 2;
    static constexpr int kFirstWord = 3;

    static ToyVocabulary create(int vocab_size, int synonym_pairs);

    int size() const { return static_cast<int>(surface_.size()); }
    const std::string& token(int id) const { return surface_.at(id); }
    int id_of(std::string_view token) const;
    bool is_word(int id) const { return id >= kFirstWord && id < size(); }

    const std::vector<std::pair<int, int>>& synonym_pairs() const { return pairs_; }
    const std::vector<int>& filler_ids() const { return fillers_; }
    double sample_weight(int id) const { return weights_.at(id); }
    int zipf_rank(int id) const { return ranks_.at(id); }  // 0 for specials

    // Tokens joined with detokenizer spacing ("." attaches left). Skips
    // nothing; callers strip eos before decoding.
    std::string decode(const std::vector<int>& ids) const;

  private:
    std::vector<std::string> surface_;
    std::vector<double> weights_;
    std::vector<int> ranks_;
    std::vector<std::pair<int, int>> pairs_;
    std::vector<int> fillers_;
    std::unordered_map<std::string, int> index_;
};

}  // namespace rlam::toy
