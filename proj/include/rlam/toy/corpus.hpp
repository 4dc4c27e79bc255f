#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rlam/freq/frequency_model.hpp"
#include "rlam/toy/bigram_policy.hpp"
#include "rlam/toy/vocabulary.hpp"

namespace rlam::toy {

// One synthetic source/reference pair. The source uses the rare member of
// each sampled synonym pair and long sentences; the reference swaps in the
// common member and splits every sentence in half, so the reference is both
// easier and shorter-sentenced than the source.
struct ToyDocument {
    std::vector<int> source;  // token ids, sentence periods included
    std::vector<int> target;
    std::string source_text;
    std::string target_text;

    // Conditioning prefix for generation: the source plus the separator.
    std::vector<int> prompt(const ToyVocabulary& vocab) const;
};

struct ToyCorpus {
    std::vector<ToyDocument> docs;
};

// Deterministic corpus draw. Each document has 2-4 sentences of 9-12 words;
// two mid-clause positions per sentence hold synonym-pair words. Filler
// words carry light positional structure so the fitted bigram has a finite
// multi-word greedy path: documents open with a reserved starter word, both
// clause-final positions hold a reserved terminator word, the slot right
// after a clause boundary draws uniformly over the remaining fillers, and
// all other slots draw with Zipf weights. The reference inserts a period
// after the first floor(L/2) words of each L-word sentence.
ToyCorpus generate_corpus(const ToyVocabulary& vocab, int n_docs, std::uint64_t seed);

// Supervised starting point: add-alpha smoothed bigram log-probabilities of
// the transitions in [separator] + target + [eos] across the corpus.
BigramPolicy fit_sft(const ToyVocabulary& vocab, const ToyCorpus& corpus,
                     double alpha = 1.0);

// Accessibility model for the toy task, built without external data: every
// word type is assigned a count proportional to its Zipf weight, and the
// frequency model is fit on that table.
freq::FrequencyModel build_toy_frequency_model(const ToyVocabulary& vocab);

// Tokenizes `text` and maps every token back to its vocabulary id; throws on
// tokens outside the vocabulary. Inverse of ToyVocabulary::decode.
std::vector<int> encode_text(const ToyVocabulary& vocab, const std::string& text);

}  // namespace rlam::toy
