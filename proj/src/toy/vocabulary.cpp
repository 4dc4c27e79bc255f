#include "rlam/toy/vocabulary.hpp"

#include <stdexcept>

#include "rlam/text/tokenizer.hpp"

namespace rlam::toy {
namespace {

const char* kConsonants = "bdfgklmnprst";  // 12
const char* kVowels = "aeiou";             // 5

std::string syllable(int index) {
    std::string s;
    s.push_back(kConsonants[index / 5]);
    s.push_back(kVowels[index % 5]);
    return s;
}

// Four-letter pseudo-word, unique per index for index < 3600.
std::string word_surface(int index) {
    std::string w = syllable(index % 60) + syllable(index / 60);
    w[0] = static_cast<char>(w[0] - 'a' + 'A');
    return w;
}

}  // namespace

ToyVocabulary ToyVocabulary::create(int vocab_size, int synonym_pairs) {
    const int words = vocab_size - kFirstWord;
    const int fillers = words - 2 * synonym_pairs;
    if (synonym_pairs < 1) throw std::invalid_argument("need at least one synonym pair");
    if (fillers < synonym_pairs)
        throw std::invalid_argument("vocabulary too small for the requested pairs");
    if (words > 3600) throw std::invalid_argument("vocabulary too large");

    ToyVocabulary v;
    v.surface_ = {".", "|", "</s>"};
    v.weights_ = {0.0, 0.0, 0.0};
    v.ranks_ = {0, 0, 0};
    for (int w = 0; w < words; ++w) {
        v.surface_.push_back(word_surface(w));
        v.weights_.push_back(0.0);
        v.ranks_.push_back(0);
    }

    // Word-index layout: [0, P) commons, [P, 2P) rares, rest fillers.
    const int p = synonym_pairs;
    auto id_of_word_index = [](int w) { return kFirstWord + w; };
    for (int i = 0; i < p; ++i)
        v.pairs_.emplace_back(id_of_word_index(p + i), id_of_word_index(i));
    for (int f = 0; f < fillers; ++f) v.fillers_.push_back(id_of_word_index(2 * p + f));

    // Ranks: commons 1,3,..,2P-1; first P fillers 2,4,..,2P; remaining
    // fillers 2P+1..P+F; rares P+F+1..W.
    auto set_rank = [&](int id, int rank) {
        v.ranks_[id] = rank;
        v.weights_[id] = 1.0 / static_cast<double>(rank);
    };
    for (int i = 0; i < p; ++i) set_rank(id_of_word_index(i), 2 * i + 1);
    for (int f = 0; f < fillers; ++f) {
        int rank = f < p ? 2 * (f + 1) : 2 * p + (f - p) + 1;
        set_rank(v.fillers_[f], rank);
    }
    for (int i = 0; i < p; ++i) set_rank(id_of_word_index(p + i), p + fillers + 1 + i);

    for (int id = 0; id < v.size(); ++id) v.index_[v.surface_[id]] = id;
    if (v.index_.size() != v.surface_.size())
        throw std::logic_error("vocabulary surfaces collide");
    return v;
}

int ToyVocabulary::id_of(std::string_view token) const {
    auto it = index_.find(std::string(token));
    return it == index_.end() ? -1 : it->second;
}

std::string ToyVocabulary::decode(const std::vector<int>& ids) const {
    std::vector<std::string> tokens;
    tokens.reserve(ids.size());
    for (int id : ids) tokens.push_back(token(id));
    return text::detokenize(tokens);
}

}  // namespace rlam::toy
