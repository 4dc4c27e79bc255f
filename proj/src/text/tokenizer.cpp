#include "rlam/text/tokenizer.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <unordered_set>

namespace rlam::text {
namespace {

bool is_ascii_alpha(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_ascii_digit(unsigned char c) { return c >= '0' && c <= '9'; }

// Bytes >= 0x80 count as letters so UTF-8 sequences stay intact.
bool is_letter(unsigned char c) { return is_ascii_alpha(c) || c >= 0x80; }

bool is_alnum(unsigned char c) { return is_letter(c) || is_ascii_digit(c); }

bool is_space(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Tokens that keep a trailing period when followed by anything (standard
// Moses English nonbreaking prefixes, case-sensitive).
const std::unordered_set<std::string>& nonbreaking_prefixes() {
    static const std::unordered_set<std::string> set = {
        "A", "B", "C", "D", "E", "F", "G", "H", "I", "J", "K", "L", "M",
        "N", "O", "P", "Q", "R", "S", "T", "U", "V", "W", "X", "Y", "Z",
        "Adj", "Adm", "Adv", "Asst", "Bart", "Bldg", "Brig", "Bros", "Capt",
        "Cmdr", "Col", "Comdr", "Con", "Corp", "Cpl", "DR", "Dr", "Drs",
        "Ens", "Gen", "Gov", "Hon", "Hr", "Hosp", "Insp", "Lt", "MM", "MR",
        "MRS", "MS", "Maj", "Messrs", "Mlle", "Mme", "Mr", "Mrs", "Ms",
        "Msgr", "Op", "Ord", "Pfc", "Ph", "Prof", "Pvt", "Rep", "Reps",
        "Res", "Rev", "Rt", "Sen", "Sens", "Sfc", "Sgt", "Sr", "St",
        "Supt", "Surg", "v", "vs", "i.e", "rev", "e.g",
    };
    return set;
}

// Prefixes that keep their period only when the next token starts with a digit.
const std::unordered_set<std::string>& numeric_only_prefixes() {
    static const std::unordered_set<std::string> set = {"No", "Nos", "Art", "Nr", "pp"};
    return set;
}

// Input cleaning: fold all whitespace to single spaces, drop ASCII junk.
std::string collapse_whitespace(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool in_space = false;
    for (unsigned char c : text) {
        if (is_space(c)) {
            in_space = true;
            continue;
        }
        if (c < 0x20) continue;  // ASCII junk
        if (in_space && !out.empty()) out.push_back(' ');
        in_space = false;
        out.push_back(static_cast<char>(c));
    }
    return out;
}

// Later-pass cleanup: dedup spaces only, so protected markers survive.
std::string collapse_spaces(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool in_space = false;
    for (unsigned char c : text) {
        if (c == ' ') {
            in_space = true;
            continue;
        }
        if (in_space && !out.empty()) out.push_back(' ');
        in_space = false;
        out.push_back(static_cast<char>(c));
    }
    return out;
}

// Pads every character outside [alnum, space, . ' ` , -] with spaces.
std::string pad_non_alnum(const std::string& s) {
    std::string out;
    out.reserve(s.size() * 2);
    for (unsigned char c : s) {
        bool keep = is_alnum(c) || c == ' ' || c == '.' || c == '\'' || c == '`' ||
                    c == ',' || c == '-';
        if (keep) {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back(' ');
            out.push_back(static_cast<char>(c));
            out.push_back(' ');
        }
    }
    return out;
}

constexpr char kDotRunMark = '\x01';

// Replaces runs of two or more dots with a marker token so later period
// handling cannot touch them; restore_dot_runs() inverts this.
std::string protect_dot_runs(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 8);
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] == '.' && i + 1 < s.size() && s[i + 1] == '.') {
            std::size_t j = i;
            while (j < s.size() && s[j] == '.') ++j;
            out.push_back(' ');
            out.push_back(kDotRunMark);
            out.append(std::to_string(j - i));
            out.push_back(kDotRunMark);
            out.push_back(' ');
            i = j;
        } else {
            out.push_back(s[i]);
            ++i;
        }
    }
    return out;
}

std::string restore_dot_runs(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] == kDotRunMark) {
            std::size_t j = i + 1;
            std::size_t n = 0;
            while (j < s.size() && is_ascii_digit(static_cast<unsigned char>(s[j]))) {
                n = n * 10 + static_cast<std::size_t>(s[j] - '0');
                ++j;
            }
            if (j < s.size() && s[j] == kDotRunMark) ++j;
            out.append(n, '.');
            i = j;
        } else {
            out.push_back(s[i]);
            ++i;
        }
    }
    return out;
}

// Commas detach except when sitting between two digits.
std::string separate_commas(const std::string& s) {
    std::string out;
    out.reserve(s.size() * 2);
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != ',') {
            out.push_back(s[i]);
            continue;
        }
        bool prev_digit = i > 0 && is_ascii_digit(static_cast<unsigned char>(s[i - 1]));
        bool next_digit =
            i + 1 < s.size() && is_ascii_digit(static_cast<unsigned char>(s[i + 1]));
        if (prev_digit && next_digit) {
            out.push_back(',');
        } else {
            out.append(" , ");
        }
    }
    return out;
}

// One left-to-right substitution pass with regex-sub semantics: on a match the
// cursor jumps past the full match, so overlapping candidates are skipped.
template <typename TryMatch>
std::string sub_pass(const std::string& s, TryMatch try_match) {
    std::string out;
    out.reserve(s.size() + 16);
    std::size_t i = 0;
    while (i < s.size()) {
        std::size_t consumed = 0;
        if (try_match(s, i, out, consumed) && consumed > 0) {
            i += consumed;
        } else {
            out.push_back(s[i]);
            ++i;
        }
    }
    return out;
}

// English apostrophe handling, five passes mirroring the Moses rule order.
std::string split_english_apostrophes(const std::string& s) {
    auto alpha = [](const std::string& t, std::size_t i) {
        return is_letter(static_cast<unsigned char>(t[i]));
    };
    auto digit = [](const std::string& t, std::size_t i) {
        return is_ascii_digit(static_cast<unsigned char>(t[i]));
    };
    std::string r = s;
    // non-alpha ' non-alpha  ->  x ' y
    r = sub_pass(r, [&](const std::string& t, std::size_t i, std::string& out,
                        std::size_t& consumed) {
        if (i + 2 >= t.size()) return false;
        if (alpha(t, i) || t[i + 1] != '\'' || alpha(t, i + 2)) return false;
        out.push_back(t[i]);
        out.append(" ' ");
        out.push_back(t[i + 2]);
        consumed = 3;
        return true;
    });
    // non-alpha-non-digit ' alpha  ->  x ' y
    r = sub_pass(r, [&](const std::string& t, std::size_t i, std::string& out,
                        std::size_t& consumed) {
        if (i + 2 >= t.size()) return false;
        if (alpha(t, i) || digit(t, i) || t[i + 1] != '\'' || !alpha(t, i + 2)) return false;
        out.push_back(t[i]);
        out.append(" ' ");
        out.push_back(t[i + 2]);
        consumed = 3;
        return true;
    });
    // alpha ' non-alpha  ->  x ' y
    r = sub_pass(r, [&](const std::string& t, std::size_t i, std::string& out,
                        std::size_t& consumed) {
        if (i + 2 >= t.size()) return false;
        if (!alpha(t, i) || t[i + 1] != '\'' || alpha(t, i + 2)) return false;
        out.push_back(t[i]);
        out.append(" ' ");
        out.push_back(t[i + 2]);
        consumed = 3;
        return true;
    });
    // alpha ' alpha  ->  x 'y   (contraction split point)
    r = sub_pass(r, [&](const std::string& t, std::size_t i, std::string& out,
                        std::size_t& consumed) {
        if (i + 2 >= t.size()) return false;
        if (!alpha(t, i) || t[i + 1] != '\'' || !alpha(t, i + 2)) return false;
        out.push_back(t[i]);
        out.append(" '");
        out.push_back(t[i + 2]);
        consumed = 3;
        return true;
    });
    // digit ' s  ->  x 's   (e.g. "1990's")
    r = sub_pass(r, [&](const std::string& t, std::size_t i, std::string& out,
                        std::size_t& consumed) {
        if (i + 2 >= t.size()) return false;
        if (!digit(t, i) || t[i + 1] != '\'' || t[i + 2] != 's') return false;
        out.push_back(t[i]);
        out.append(" 's");
        consumed = 3;
        return true;
    });
    return r;
}

std::vector<std::string> split_on_spaces(const std::string& s) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && s[i] == ' ') ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ') ++j;
        if (j > i) tokens.emplace_back(s.substr(i, j - i));
        i = j;
    }
    return tokens;
}

bool contains_letter(std::string_view s) {
    return std::any_of(s.begin(), s.end(),
                       [](char c) { return is_letter(static_cast<unsigned char>(c)); });
}

// Detaches trailing periods except after nonbreaking prefixes, tokens with an
// internal dot, or when the next token starts lowercase.
std::string handle_trailing_periods(const std::string& s) {
    std::vector<std::string> tokens = split_on_spaces(s);
    const auto& prefixes = nonbreaking_prefixes();
    const auto& numeric_only = numeric_only_prefixes();
    std::string out;
    out.reserve(s.size() + 8);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        std::string tok = tokens[i];
        if (tok.size() >= 2 && tok.back() == '.' &&
            tok.find(' ') == std::string::npos) {
            std::string prefix = tok.substr(0, tok.size() - 1);
            bool keep = false;
            if (prefix.find('.') != std::string::npos && contains_letter(prefix)) {
                keep = true;
            } else if (prefixes.count(prefix) > 0) {
                keep = true;
            } else if (i + 1 < tokens.size() && !tokens[i + 1].empty()) {
                unsigned char next0 = static_cast<unsigned char>(tokens[i + 1][0]);
                if ((next0 >= 'a' && next0 <= 'z') || next0 >= 0x80) keep = true;
            }
            if (!keep && numeric_only.count(prefix) > 0 && i + 1 < tokens.size() &&
                !tokens[i + 1].empty() &&
                is_ascii_digit(static_cast<unsigned char>(tokens[i + 1][0]))) {
                keep = true;
            }
            if (!keep) tok = prefix + " .";
        }
        if (!out.empty()) out.push_back(' ');
        out.append(tok);
    }
    return out;
}

}  // namespace

std::vector<std::string> tokenize_words(std::string_view sentence) {
    std::string text = collapse_whitespace(sentence);
    if (text.empty()) return {};
    text = pad_non_alnum(text);
    text = protect_dot_runs(text);
    text = separate_commas(text);
    text = split_english_apostrophes(text);
    text = collapse_spaces(text);
    text = handle_trailing_periods(text);
    text = collapse_spaces(text);
    if (text.size() >= 2 && text.compare(text.size() - 2, 2, ".'") == 0) {
        text.replace(text.size() - 2, 2, " . '");
    }
    text = restore_dot_runs(text);
    return split_on_spaces(text);
}

std::vector<std::string> split_sentences(std::string_view raw_text) {
    std::string text = collapse_whitespace(raw_text);
    std::vector<std::string> sentences;
    if (text.empty()) return sentences;

    const auto& prefixes = nonbreaking_prefixes();
    const auto& numeric_only = numeric_only_prefixes();
    auto is_terminal = [](char c) { return c == '.' || c == '!' || c == '?'; };
    auto is_closing = [](char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; };
    auto is_opening = [](char c) { return c == '"' || c == '\'' || c == '(' || c == '['; };

    std::size_t start = 0;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        if (!is_terminal(text[i])) {
            ++i;
            continue;
        }
        std::size_t run_begin = i;
        std::size_t run_end = i;
        while (run_end < n && is_terminal(text[run_end])) ++run_end;
        std::size_t after = run_end;
        while (after < n && is_closing(text[after])) ++after;

        if (after < n && text[after] != ' ') {  // mid-token, e.g. "3.14"
            i = run_end;
            continue;
        }
        std::size_t next = after;
        while (next < n && text[next] == ' ') ++next;

        bool boundary = true;
        if (next < n) {
            unsigned char c = static_cast<unsigned char>(text[next]);
            bool starts_sentence = (c >= 'A' && c <= 'Z') || is_ascii_digit(c) ||
                                   is_opening(static_cast<char>(c));
            if (!starts_sentence) boundary = false;
        }
        if (boundary && run_end - run_begin == 1 && text[run_begin] == '.') {
            std::size_t w = run_begin;
            while (w > start && text[w - 1] != ' ') --w;
            std::string word = text.substr(w, run_begin - w);
            while (!word.empty() &&
                   !is_alnum(static_cast<unsigned char>(word.front()))) {
                word.erase(word.begin());
            }
            bool protected_abbrev = false;
            if (!word.empty()) {
                if (prefixes.count(word) > 0) protected_abbrev = true;
                if (word.size() == 1 &&
                    is_ascii_alpha(static_cast<unsigned char>(word[0]))) {
                    protected_abbrev = true;
                }
                if (word.find('.') != std::string::npos && contains_letter(word)) {
                    protected_abbrev = true;
                }
                if (numeric_only.count(word) > 0 && next < n &&
                    is_ascii_digit(static_cast<unsigned char>(text[next]))) {
                    protected_abbrev = true;
                }
            }
            if (protected_abbrev) boundary = false;
        }
        if (boundary) {
            sentences.emplace_back(text.substr(start, after - start));
            start = next;
            i = next;
        } else {
            i = run_end;
        }
    }
    if (start < n) {
        std::string rest = text.substr(start);
        if (!rest.empty() && rest != " ") sentences.emplace_back(std::move(rest));
    }
    return sentences;
}

TokenizedDocument tokenize(std::string_view raw_text) {
    TokenizedDocument doc;
    doc.raw_text.assign(raw_text);
    for (const std::string& sentence : split_sentences(raw_text)) {
        std::vector<std::string> tokens = tokenize_words(sentence);
        if (tokens.empty()) continue;
        doc.token_count += tokens.size();
        doc.sentences.emplace_back(std::move(tokens));
    }
    return doc;
}

bool is_word_token(std::string_view token) {
    return std::any_of(token.begin(), token.end(),
                       [](char c) { return is_alnum(static_cast<unsigned char>(c)); });
}

std::vector<std::string> word_tokens(const TokenizedDocument& doc) {
    std::vector<std::string> words;
    words.reserve(doc.token_count);
    for (const auto& sentence : doc.sentences) {
        for (const auto& token : sentence) {
            if (is_word_token(token)) words.push_back(token);
        }
    }
    return words;
}

std::size_t codepoint_count(std::string_view token) {
    std::size_t n = 0;
    for (unsigned char c : token) {
        if ((c & 0xC0) != 0x80) ++n;
    }
    return n;
}

std::string detokenize(const std::vector<std::string>& tokens) {
    auto attaches_left = [](const std::string& t) {
        if (t.empty()) return false;
        if (t[0] == '\'' && t.size() > 1) return true;  // clitics: 's 't 'll ...
        return std::all_of(t.begin(), t.end(), [](char c) {
            return c == '.' || c == ',' || c == '!' || c == '?' || c == ';' ||
                   c == ':' || c == ')' || c == ']' || c == '%';
        });
    };
    auto attaches_right = [](const std::string& t) {
        return t == "(" || t == "[" || t == "$";
    };
    std::string out;
    bool suppress_space = true;
    for (const auto& tok : tokens) {
        if (!suppress_space && !attaches_left(tok)) out.push_back(' ');
        out.append(tok);
        suppress_space = attaches_right(tok);
    }
    return out;
}

}  // namespace rlam::text
