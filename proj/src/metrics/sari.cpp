#include "rlam/metrics/sari.hpp"

#include <stdexcept>
#include <unordered_set>

#include "rlam/text/tokenizer.hpp"

namespace rlam::metrics {
namespace {

using NgramSet = std::unordered_set<std::string>;

// N-grams keyed by joining tokens with a separator byte that tokenizer
// output cannot contain.
NgramSet ngrams(const std::vector<std::string>& tokens, std::size_t n) {
    NgramSet set;
    if (tokens.size() < n) return set;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string key;
        for (std::size_t j = 0; j < n; ++j) {
            if (j > 0) key.push_back('\x1f');
            key.append(tokens[i + j]);
        }
        set.insert(std::move(key));
    }
    return set;
}

std::size_t intersection_size(const NgramSet& a, const NgramSet& b) {
    const NgramSet& small = a.size() <= b.size() ? a : b;
    const NgramSet& large = a.size() <= b.size() ? b : a;
    std::size_t n = 0;
    for (const auto& g : small)
        if (large.count(g)) ++n;
    return n;
}

std::size_t difference_size(const NgramSet& a, const NgramSet& b) {
    std::size_t n = 0;
    for (const auto& g : a)
        if (!b.count(g)) ++n;
    return n;
}

// x/y with the empty/empty case scored as a perfect 1.
double ratio(std::size_t num, std::size_t den) {
    if (den == 0) return 1.0;
    return static_cast<double>(num) / static_cast<double>(den);
}

double f1(double p, double r) {
    if (p + r == 0.0) return 0.0;
    return 2.0 * p * r / (p + r);
}

}  // namespace

double sari(const std::vector<std::string>& source_tokens,
            const std::vector<std::string>& candidate_tokens,
            const std::vector<std::vector<std::string>>& reference_tokens) {
    if (reference_tokens.empty())
        throw std::invalid_argument("sari needs at least one reference");

    double total = 0.0;
    for (std::size_t n = 1; n <= 4; ++n) {
        NgramSet s = ngrams(source_tokens, n);
        NgramSet c = ngrams(candidate_tokens, n);
        NgramSet r;
        for (const auto& ref : reference_tokens)
            for (auto& g : ngrams(ref, n)) r.insert(g);

        // keep: source n-grams the candidate kept vs those references kept
        NgramSet s_and_c, s_and_r;
        for (const auto& g : s) {
            if (c.count(g)) s_and_c.insert(g);
            if (r.count(g)) s_and_r.insert(g);
        }
        std::size_t keep_good = intersection_size(s_and_c, s_and_r);
        double keep_f = f1(ratio(keep_good, s_and_c.size()),
                           ratio(keep_good, s_and_r.size()));

        // add: candidate n-grams absent from the source, credited when some
        // reference contains them
        NgramSet c_not_s;
        for (const auto& g : c)
            if (!s.count(g)) c_not_s.insert(g);
        std::size_t add_good = intersection_size(c_not_s, r);
        std::size_t should_add = difference_size(r, s);
        double add_f = f1(ratio(add_good, c_not_s.size()),
                          ratio(add_good, should_add));

        // delete: source n-grams the candidate dropped, credited when the
        // references dropped them too (precision only)
        NgramSet s_not_c;
        for (const auto& g : s)
            if (!c.count(g)) s_not_c.insert(g);
        std::size_t del_good = 0;
        for (const auto& g : s_not_c)
            if (!r.count(g)) ++del_good;
        double del_p = ratio(del_good, s_not_c.size());

        total += (keep_f + add_f + del_p) / 3.0;
    }
    return 100.0 * total / 4.0;
}

double sari(std::string_view source_text, std::string_view candidate_text,
            const std::vector<std::string>& reference_texts) {
    auto flatten = [](std::string_view text) {
        std::vector<std::string> tokens;
        for (auto& sentence : text::tokenize(text).sentences)
            for (auto& tok : sentence) tokens.push_back(std::move(tok));
        return tokens;
    };
    std::vector<std::vector<std::string>> refs;
    refs.reserve(reference_texts.size());
    for (const auto& ref : reference_texts) refs.push_back(flatten(ref));
    return sari(flatten(source_text), flatten(candidate_text), refs);
}

}  // namespace rlam::metrics
