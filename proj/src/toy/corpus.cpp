#include "rlam/toy/corpus.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "rlam/text/tokenizer.hpp"
#include "rlam/util/rng.hpp"

namespace rlam::toy {

std::vector<int> ToyDocument::prompt(const ToyVocabulary&) const {
    std::vector<int> ids = source;
    ids.push_back(ToyVocabulary::kSeparator);
    return ids;
}

ToyCorpus generate_corpus(const ToyVocabulary& vocab, int n_docs, std::uint64_t seed) {
    if (n_docs <= 0) throw std::invalid_argument("generate_corpus: need n_docs > 0");
    const auto& fillers = vocab.filler_ids();
    const auto& pairs = vocab.synonym_pairs();
    if (fillers.empty() || pairs.empty())
        throw std::invalid_argument("generate_corpus: vocabulary has no fillers or pairs");

    if (fillers.size() < 4)
        throw std::invalid_argument("generate_corpus: need at least 4 filler words");
    // Two rare fillers get fixed grammatical roles: documents open with a
    // starter word and every clause closes on a terminator word. The rest
    // form the free pool: Zipf-weighted mid-clause, uniform right after a
    // clause boundary (sentence openers are deliberately varied).
    const int starter = fillers[fillers.size() - 2];
    const int terminator = fillers[fillers.size() - 1];
    std::vector<int> pool(fillers.begin(), fillers.end() - 2);
    Eigen::VectorXd pool_weights(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i)
        pool_weights[static_cast<Eigen::Index>(i)] = vocab.sample_weight(pool[i]);

    std::mt19937_64 rng(seed);
    ToyCorpus corpus;
    corpus.docs.reserve(n_docs);
    for (int d = 0; d < n_docs; ++d) {
        ToyDocument doc;
        const int n_sentences = 2 + static_cast<int>(util::uniform_index(rng, 3));
        for (int s = 0; s < n_sentences; ++s) {
            const int length = 9 + static_cast<int>(util::uniform_index(rng, 4));
            const int split = length / 2;
            // Substitutable pair slots sit strictly mid-clause.
            std::vector<std::size_t> open;
            for (int w = 1; w < length - 1; ++w)
                if (w != split - 1 && w != split)
                    open.push_back(static_cast<std::size_t>(w));
            std::size_t pick_a = util::uniform_index(rng, open.size());
            std::size_t pick_b = util::uniform_index(rng, open.size() - 1);
            if (pick_b >= pick_a) ++pick_b;  // two distinct positions
            const std::size_t slot_a = open[pick_a];
            const std::size_t slot_b = open[pick_b];

            std::vector<int> rare_words(length), common_words(length);
            for (int w = 0; w < length; ++w) {
                int filler;
                if (static_cast<std::size_t>(w) == slot_a ||
                    static_cast<std::size_t>(w) == slot_b) {
                    const auto& pair = pairs[util::uniform_index(rng, pairs.size())];
                    rare_words[w] = pair.first;
                    common_words[w] = pair.second;
                    continue;
                } else if (w == split - 1 || w == length - 1) {
                    filler = terminator;
                } else if (w == 0 && s == 0) {
                    filler = starter;
                } else if (w == 0 || w == split) {
                    filler = pool[util::uniform_index(rng, pool.size())];
                } else {
                    filler = pool[util::sample_categorical(rng, pool_weights)];
                }
                rare_words[w] = filler;
                common_words[w] = filler;
            }

            for (int w = 0; w < length; ++w) doc.source.push_back(rare_words[w]);
            doc.source.push_back(ToyVocabulary::kPeriod);

            for (int w = 0; w < length; ++w) {
                doc.target.push_back(common_words[w]);
                if (w + 1 == split) doc.target.push_back(ToyVocabulary::kPeriod);
            }
            doc.target.push_back(ToyVocabulary::kPeriod);
        }
        doc.source_text = vocab.decode(doc.source);
        doc.target_text = vocab.decode(doc.target);
        corpus.docs.push_back(std::move(doc));
    }
    return corpus;
}

BigramPolicy fit_sft(const ToyVocabulary& vocab, const ToyCorpus& corpus, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("fit_sft: alpha must be positive");
    const int v = vocab.size();
    Eigen::MatrixXd counts = Eigen::MatrixXd::Constant(v, v, alpha);
    for (const auto& doc : corpus.docs) {
        int prev = ToyVocabulary::kSeparator;
        for (int id : doc.target) {
            counts(prev, id) += 1.0;
            prev = id;
        }
        counts(prev, ToyVocabulary::kEos) += 1.0;
    }

    BigramPolicy policy(v);
    for (int row = 0; row < v; ++row) {
        const double total = counts.row(row).sum();
        policy.logits.row(row) = (counts.row(row) / total).array().log().matrix();
    }
    return policy;
}

freq::FrequencyModel build_toy_frequency_model(const ToyVocabulary& vocab) {
    std::unordered_map<std::string, std::uint64_t> counts;
    std::uint64_t total = 0;
    for (int id = 0; id < vocab.size(); ++id) {
        if (!vocab.is_word(id)) continue;
        const auto count =
            static_cast<std::uint64_t>(std::llround(vocab.sample_weight(id) * 3e7));
        counts[vocab.token(id)] = count;
        total += count;
    }
    return freq::fit_frequency_model(counts, total, freq::FrequencyModelConfig{});
}

std::vector<int> encode_text(const ToyVocabulary& vocab, const std::string& text) {
    const text::TokenizedDocument doc = text::tokenize(text);
    std::vector<int> ids;
    ids.reserve(doc.token_count);
    for (const auto& sentence : doc.sentences) {
        for (const auto& token : sentence) {
            const int id = vocab.id_of(token);
            if (id < 0)
                throw std::invalid_argument("encode_text: unknown token " + token);
            ids.push_back(id);
        }
    }
    return ids;
}

}  // namespace rlam::toy
