#include "docstruct/text.hpp"

#include <algorithm>
#include <cctype>

namespace docstruct::text {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_whitespace(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && is_space(s[i])) ++i;
        std::size_t j = i;
        while (j < s.size() && !is_space(s[j])) ++j;
        if (j > i) out.emplace_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

std::vector<std::string> word_tokens(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && !is_alnum(s[i])) ++i;
        std::size_t j = i;
        while (j < s.size() && is_alnum(s[j])) ++j;
        if (j > i) out.push_back(to_lower(s.substr(i, j - i)));
        i = j;
    }
    return out;
}

bool is_alpha_word(std::string_view s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(), [](char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; });
}

const std::unordered_set<std::string>& english_stopwords() {
    static const std::unordered_set<std::string> words = {
        "a",       "about",   "above",  "after",   "again",   "against", "all",     "also",    "am",
        "an",      "and",     "any",    "are",     "as",      "at",      "be",      "because", "been",
        "before",  "being",   "below",  "between", "both",    "but",     "by",      "can",     "could",
        "did",     "do",      "does",   "doing",   "down",    "during",  "each",    "few",     "for",
        "from",    "further", "had",    "has",     "have",    "having",  "he",      "her",     "here",
        "hers",    "herself", "him",    "himself", "his",     "how",     "i",       "if",      "in",
        "into",    "is",      "it",     "its",     "itself",  "just",    "may",     "me",      "might",
        "more",    "most",    "must",   "my",      "myself",  "no",      "nor",     "not",     "now",
        "of",      "off",     "on",     "once",    "only",    "or",      "other",   "our",     "ours",
        "ourselves", "out",   "over",   "own",     "same",    "shall",   "she",     "should",  "so",
        "some",    "such",    "than",   "that",    "the",     "their",   "theirs",  "them",    "themselves",
        "then",    "there",   "these",  "they",    "this",    "those",   "through", "to",      "too",
        "under",   "until",   "up",     "us",      "very",    "was",     "we",      "were",    "what",
        "when",    "where",   "which",  "while",   "who",     "whom",    "why",     "will",    "with",
        "would",   "you",     "your",   "yours",   "yourself", "yourselves"};
    return words;
}

std::vector<std::string> content_tokens(std::string_view s) {
    const auto& stop = english_stopwords();
    std::vector<std::string> out;
    for (auto& tok : word_tokens(s)) {
        if (tok.size() < 2) continue;
        if (std::none_of(tok.begin(), tok.end(), [](char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }))
            continue;
        if (stop.count(tok)) continue;
        out.push_back(std::move(tok));
    }
    return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

}  // namespace docstruct::text
