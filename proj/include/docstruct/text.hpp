#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace docstruct::text {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

// Whitespace-separated tokens, punctuation kept.
std::vector<std::string> split_whitespace(std::string_view s);

// Lowercased runs of ASCII letters and digits.
std::vector<std::string> word_tokens(std::string_view s);

bool is_alpha_word(std::string_view s);

// Common English function words. Shared by header-vocabulary filtering,
// section tokenization for topic modelling and TextRank content words.
const std::unordered_set<std::string>& english_stopwords();

// Lowercase, strip punctuation, drop tokens shorter than 2 characters,
// tokens without a letter, and stopwords.
std::vector<std::string> content_tokens(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace docstruct::text
