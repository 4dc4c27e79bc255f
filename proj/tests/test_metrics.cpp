#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "rlam/metrics/readability.hpp"
#include "rlam/metrics/sari.hpp"
#include "rlam/text/tokenizer.hpp"

using rlam::metrics::automated_readability_index;
using rlam::metrics::compute_report;
using rlam::metrics::flesch_kincaid_grade;
using rlam::metrics::sari;
using rlam::metrics::syllable_count;
using rlam::metrics::VoaLexicon;
using rlam::metrics::voa_log_ratio;
using rlam::text::tokenize;

TEST_CASE("syllable heuristic") {
    CHECK(syllable_count("cat") == 1);
    CHECK(syllable_count("table") == 2);
    CHECK(syllable_count("make") == 1);
    CHECK(syllable_count("the") == 1);
    CHECK(syllable_count("apple") == 2);
    CHECK(syllable_count("queue") == 1);
    CHECK(syllable_count("strength") == 1);
    CHECK(syllable_count("paper") == 2);
    CHECK(syllable_count("accessibility") == 6);
    CHECK(syllable_count("readable") == 3);
    CHECK(syllable_count("ale") == 1);
    CHECK(syllable_count("rhythm") == 1);
    CHECK(syllable_count("7th") == 1);
    CHECK(syllable_count("42") == 1);
    CHECK(syllable_count("co-op") == 2);
}

TEST_CASE("ari golden sentence") {
    auto doc = tokenize("The cat sat on the mat.");
    // chars 17, words 6, sentences 1
    CHECK(automated_readability_index(doc) ==
          doctest::Approx(4.71 * 17.0 / 6.0 + 0.5 * 6.0 - 21.43).epsilon(1e-12));
    CHECK(automated_readability_index(doc) == doctest::Approx(-5.085).epsilon(1e-9));
}

TEST_CASE("ari counts letters and digits only") {
    auto doc = tokenize("state-of-the-art kit 42.");
    // words: state-of-the-art (13 alnum), kit (3), 42 (2) -> 18 chars, 3 words
    CHECK(automated_readability_index(doc) ==
          doctest::Approx(4.71 * 18.0 / 3.0 + 0.5 * 3.0 - 21.43).epsilon(1e-12));
}

TEST_CASE("flesch kincaid golden word") {
    auto doc = tokenize("cat");
    CHECK(flesch_kincaid_grade(doc) == doctest::Approx(-3.4).epsilon(1e-12));
}

TEST_CASE("flesch kincaid multi sentence") {
    auto doc = tokenize("The table is ready. People make dinner.");
    // words 7 (the table is ready people make dinner), syllables 1+2+1+2+2+1+2=11
    double expect = 0.39 * (7.0 / 2.0) + 11.8 * (11.0 / 7.0) - 15.59;
    CHECK(flesch_kincaid_grade(doc) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("voa log ratio") {
    auto doc = tokenize("the big cat");
    auto lex = VoaLexicon::from_words({"the", "cat"});
    CHECK(voa_log_ratio(doc, lex) ==
          doctest::Approx(std::log(2.5) - std::log(1.5)).epsilon(1e-12));

    auto flipped = VoaLexicon::from_words({"big"});
    CHECK(voa_log_ratio(doc, lex) == -voa_log_ratio(doc, flipped));
}

TEST_CASE("voa matching is case-insensitive over word tokens") {
    auto doc = tokenize("The cat, the CAT!");
    auto lex = VoaLexicon::from_words({"the", "cat"});
    // words: The cat the CAT, all easy -> in 4, out 0
    CHECK(voa_log_ratio(doc, lex) ==
          doctest::Approx(std::log(4.5) - std::log(0.5)).epsilon(1e-12));
}

TEST_CASE("report aggregates") {
    auto doc = tokenize("Hello, world. Bye now.");
    auto rep = compute_report(doc, nullptr, nullptr);
    CHECK(rep.sentence_count == 2);
    CHECK(rep.token_count == 7);
    CHECK(rep.word_count == 4);
    CHECK(rep.mean_sentence_length == doctest::Approx(3.5));
    CHECK(rep.mean_word_length == doctest::Approx(4.0));
    CHECK(!rep.voa.has_value());
    CHECK(!rep.mean_word_accessibility.has_value());
}

TEST_CASE("report accessibility fields") {
    std::unordered_map<std::string, std::uint64_t> counts{
        {"aa", 4}, {"bb", 2}, {"Cc", 1}, {"dd", 1}};
    rlam::freq::FrequencyModelConfig cfg;
    cfg.capacity = 10;
    cfg.feature_dim = 64;
    auto model = rlam::freq::fit_frequency_model(counts, 8, cfg);

    auto doc = tokenize("aa bb. Cc dd.");
    REQUIRE(doc.sentence_count() == 2);
    auto rep = compute_report(doc, &model, nullptr);
    double wa_a = std::log(4.0 / 8.0 * 1e9);
    double wa_b = std::log(2.0 / 8.0 * 1e9);
    double wa_c = std::log(1.0 / 8.0 * 1e9);
    double m1 = (wa_a + wa_b) / 2.0;
    double m2 = (wa_c + wa_c) / 2.0;
    double mean = (m1 + m2) / 2.0;
    double expect_std =
        std::sqrt(((m1 - mean) * (m1 - mean) + (m2 - mean) * (m2 - mean)) / 2.0);
    REQUIRE(rep.mean_word_accessibility.has_value());
    CHECK(*rep.mean_word_accessibility ==
          doctest::Approx((wa_a + wa_b + wa_c + wa_c) / 4.0).epsilon(1e-12));
    REQUIRE(rep.sentence_accessibility_std.has_value());
    CHECK(*rep.sentence_accessibility_std == doctest::Approx(expect_std).epsilon(1e-12));
}

TEST_CASE("metrics reject empty documents") {
    CHECK_THROWS_AS(automated_readability_index(tokenize("")), std::invalid_argument);
    CHECK_THROWS_AS(flesch_kincaid_grade(tokenize("  ")), std::invalid_argument);
    auto lex = VoaLexicon::from_words({"a"});
    CHECK_THROWS_AS(voa_log_ratio(tokenize(""), lex), std::invalid_argument);
}

TEST_CASE("sari identity scores 100") {
    std::vector<std::string> s{"the", "cat", "sat"};
    std::vector<std::string> c{"the", "cat"};
    CHECK(sari(s, c, {c}) == 100.0);
    CHECK(sari(s, s, {s}) == 100.0);
    CHECK(sari("The cat sat.", "The cat sat.", {"The cat sat."}) == 100.0);
}

TEST_CASE("sari hand-computed triple") {
    std::vector<std::string> s{"a", "b", "c"};
    std::vector<std::string> r{"a", "b"};
    std::vector<std::string> c{"a", "c"};
    // per order: (1/2 + 1 + 0)/3, (0 + 0 + 1/2)/3, 1, 1 -> mean 2/3
    CHECK(sari(s, c, {r}) == doctest::Approx(200.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("sari multi-reference union") {
    std::vector<std::string> s{"a", "b"};
    std::vector<std::string> c{"a", "x"};
    std::vector<std::string> r1{"a", "b"};
    std::vector<std::string> r2{"a", "x"};
    // orders: ((2/3+1+0)/3, (0+1+0)/3, 1, 1) -> (5/9 + 1/3 + 2)/4 = 13/18
    CHECK(sari(s, c, {r1, r2}) == doctest::Approx(100.0 * 13.0 / 18.0).epsilon(1e-12));
}

TEST_CASE("sari requires references") {
    std::vector<std::string> s{"a"};
    CHECK_THROWS_AS(sari(s, s, {}), std::invalid_argument);
}
