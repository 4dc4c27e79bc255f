#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>

#include "rlam/freq/frequency_model.hpp"
#include "rlam/text/tokenizer.hpp"

namespace rlam::metrics {

// Heuristic syllable count: maximal groups of [aeiouy] (case-insensitive),
// minus a silent trailing "e" unless it closes a consonant+"le" ending,
// floored at one. Non-letters break vowel groups.
std::size_t syllable_count(std::string_view word);

// Letters and digits only; the character count used by the ARI ratio.
std::size_t alnum_char_count(std::string_view token);

// 4.71*(chars/words) + 0.5*(words/sentences) - 21.43 over word tokens.
// Throws std::invalid_argument when the document has no sentences or words.
double automated_readability_index(const text::TokenizedDocument& doc);

// 0.39*(words/sentences) + 11.8*(syllables/words) - 15.59.
double flesch_kincaid_grade(const text::TokenizedDocument& doc);

// Case-insensitive membership list of "easy" words, one word per line.
class VoaLexicon {
  public:
    VoaLexicon() = default;
    static VoaLexicon from_file(const std::string& path);
    static VoaLexicon from_words(const std::vector<std::string>& words);

    bool contains(std::string_view word) const;
    std::size_t size() const { return words_.size(); }

  private:
    std::unordered_set<std::string> words_;
};

// ln((in + 0.5) / (out + 0.5)) over word tokens; swapping the in/out counts
// flips the sign exactly.
double voa_log_ratio(const text::TokenizedDocument& doc, const VoaLexicon& lexicon);

struct MetricReport {
    std::size_t sentence_count = 0;
    std::size_t token_count = 0;
    std::size_t word_count = 0;
    double ari = 0.0;
    double fk_grade = 0.0;
    double mean_sentence_length = 0.0;  // all tokens, punctuation included
    double mean_word_length = 0.0;      // code points per word token
    std::optional<double> voa = {};     // needs a lexicon
    std::optional<double> mean_word_accessibility = {};  // needs a model
    std::optional<double> sentence_accessibility_std = {};
};

// Full per-document report. The accessibility fields are filled only when a
// frequency model is supplied, the VOA ratio only when a lexicon is.
// sentence_accessibility_std is the population standard deviation across
// sentences of the per-sentence mean word accessibility (sentences without
// word tokens are skipped).
MetricReport compute_report(const text::TokenizedDocument& doc,
                            const freq::FrequencyModel* model,
                            const VoaLexicon* lexicon);

}  // namespace rlam::metrics
