#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace rlam::text {

// A document split into sentences, each sentence a list of surface tokens.
// Tokenization follows the Moses word-tokenizer rules for English in
// non-aggressive mode: punctuation is padded except [.'`,-], runs of two or
// more dots stay fused, commas stay attached between digits, English
// apostrophe contractions split before the apostrophe ("don't" -> "don 't"),
// sentence-final periods detach unless the preceding token is a known
// nonbreaking prefix or contains an internal dot ("U.S." survives intact).
// Bytes >= 0x80 are treated as letter characters, so multi-byte UTF-8
// sequences are never split; rules are exact for ASCII text. No XML escaping.
struct TokenizedDocument {
    std::string raw_text;
    std::vector<std::vector<std::string>> sentences;
    std::size_t token_count = 0;

    std::size_t sentence_count() const { return sentences.size(); }
};

// Splits text into sentences, then applies the word tokenizer per sentence.
// Whitespace-only input yields a document with zero sentences.
TokenizedDocument tokenize(std::string_view raw_text);

// Sentence boundary detection: a run of [.!?], optionally followed by a
// closing quote/bracket, then whitespace, then an uppercase letter, digit, or
// opening quote/bracket. A single period does not end a sentence after a
// nonbreaking prefix, a single letter, or a token with an internal dot, nor
// when the next word starts lowercase.
std::vector<std::string> split_sentences(std::string_view raw_text);

// Moses-style word tokenization of one sentence.
std::vector<std::string> tokenize_words(std::string_view sentence);

// True if the token contains at least one alphanumeric character. Tokens that
// fail this (pure punctuation) are excluded from word-level statistics.
bool is_word_token(std::string_view token);

// All word tokens of the document in order, punctuation tokens dropped.
std::vector<std::string> word_tokens(const TokenizedDocument& doc);

// Number of code points in a UTF-8 string (continuation bytes not counted).
std::size_t codepoint_count(std::string_view token);

// Inverse-direction join for generated token streams: inserts spaces except
// before attach-left tokens (closing punctuation, clitics starting with an
// apostrophe) and after attach-right tokens (opening quotes/brackets).
// Round-trips tokenize() output for ordinary prose.
std::string detokenize(const std::vector<std::string>& tokens);

}  // namespace rlam::text
