#include "rlam/metrics/readability.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace rlam::metrics {
namespace {

bool is_ascii_letter(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_ascii_digit(unsigned char c) { return c >= '0' && c <= '9'; }

char lower(unsigned char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a')
                                  : static_cast<char>(c);
}

bool is_vowel(char c) {
    c = lower(static_cast<unsigned char>(c));
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return lower(c); });
    return out;
}

void require_measurable(const text::TokenizedDocument& doc, std::size_t words) {
    if (doc.sentence_count() == 0 || words == 0)
        throw std::invalid_argument("document has no sentences or no words");
}

}  // namespace

std::size_t syllable_count(std::string_view word) {
    std::size_t groups = 0;
    bool in_group = false;
    for (char c : word) {
        bool v = is_ascii_letter(static_cast<unsigned char>(c)) && is_vowel(c);
        if (v && !in_group) ++groups;
        in_group = v;
    }
    const std::size_t n = word.size();
    if (n >= 1 && lower(static_cast<unsigned char>(word[n - 1])) == 'e') {
        bool consonant_le = n >= 3 &&
                            lower(static_cast<unsigned char>(word[n - 2])) == 'l' &&
                            is_ascii_letter(static_cast<unsigned char>(word[n - 3])) &&
                            !is_vowel(word[n - 3]);
        if (!consonant_le && groups > 0) --groups;
    }
    return std::max<std::size_t>(groups, 1);
}

std::size_t alnum_char_count(std::string_view token) {
    std::size_t n = 0;
    for (unsigned char c : token) {
        if (is_ascii_letter(c) || is_ascii_digit(c) || c >= 0x80) ++n;
    }
    return n;
}

double automated_readability_index(const text::TokenizedDocument& doc) {
    auto words = text::word_tokens(doc);
    require_measurable(doc, words.size());
    std::size_t chars = 0;
    for (const auto& w : words) chars += alnum_char_count(w);
    double cw = static_cast<double>(chars) / static_cast<double>(words.size());
    double ws = static_cast<double>(words.size()) /
                static_cast<double>(doc.sentence_count());
    return 4.71 * cw + 0.5 * ws - 21.43;
}

double flesch_kincaid_grade(const text::TokenizedDocument& doc) {
    auto words = text::word_tokens(doc);
    require_measurable(doc, words.size());
    std::size_t syllables = 0;
    for (const auto& w : words) syllables += syllable_count(w);
    double ws = static_cast<double>(words.size()) /
                static_cast<double>(doc.sentence_count());
    double sw = static_cast<double>(syllables) / static_cast<double>(words.size());
    return 0.39 * ws + 11.8 * sw - 15.59;
}

VoaLexicon VoaLexicon::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw std::runtime_error("cannot open lexicon: " + path);
    VoaLexicon lex;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        std::size_t start = line.find_first_not_of(' ');
        if (start == std::string::npos) continue;
        lex.words_.insert(to_lower(line.substr(start)));
    }
    return lex;
}

VoaLexicon VoaLexicon::from_words(const std::vector<std::string>& words) {
    VoaLexicon lex;
    for (const auto& w : words) lex.words_.insert(to_lower(w));
    return lex;
}

bool VoaLexicon::contains(std::string_view word) const {
    return words_.find(to_lower(word)) != words_.end();
}

double voa_log_ratio(const text::TokenizedDocument& doc, const VoaLexicon& lexicon) {
    auto words = text::word_tokens(doc);
    require_measurable(doc, words.size());
    std::size_t in = 0;
    for (const auto& w : words)
        if (lexicon.contains(w)) ++in;
    std::size_t out = words.size() - in;
    // log(in+.5) - log(out+.5): algebraically ln((in+.5)/(out+.5)), written
    // as a difference so swapping in and out negates the result exactly.
    return std::log(static_cast<double>(in) + 0.5) -
           std::log(static_cast<double>(out) + 0.5);
}

MetricReport compute_report(const text::TokenizedDocument& doc,
                            const freq::FrequencyModel* model,
                            const VoaLexicon* lexicon) {
    auto words = text::word_tokens(doc);
    require_measurable(doc, words.size());

    MetricReport rep;
    rep.sentence_count = doc.sentence_count();
    rep.token_count = doc.token_count;
    rep.word_count = words.size();
    rep.ari = automated_readability_index(doc);
    rep.fk_grade = flesch_kincaid_grade(doc);
    rep.mean_sentence_length = static_cast<double>(doc.token_count) /
                               static_cast<double>(doc.sentence_count());

    std::size_t length_sum = 0;
    for (const auto& w : words) length_sum += text::codepoint_count(w);
    rep.mean_word_length =
        static_cast<double>(length_sum) / static_cast<double>(words.size());

    if (lexicon != nullptr) rep.voa = voa_log_ratio(doc, *lexicon);

    if (model != nullptr) {
        double total = 0.0;
        std::vector<double> sentence_means;
        sentence_means.reserve(doc.sentence_count());
        for (const auto& sentence : doc.sentences) {
            double sum = 0.0;
            std::size_t n = 0;
            for (const auto& token : sentence) {
                if (!text::is_word_token(token)) continue;
                double wa = model->word_accessibility(token);
                sum += wa;
                total += wa;
                ++n;
            }
            if (n > 0) sentence_means.push_back(sum / static_cast<double>(n));
        }
        rep.mean_word_accessibility = total / static_cast<double>(words.size());
        double mean = 0.0;
        for (double m : sentence_means) mean += m;
        mean /= static_cast<double>(sentence_means.size());
        double var = 0.0;
        for (double m : sentence_means) var += (m - mean) * (m - mean);
        var /= static_cast<double>(sentence_means.size());
        rep.sentence_accessibility_std = std::sqrt(var);
    }
    return rep;
}

}  // namespace rlam::metrics
