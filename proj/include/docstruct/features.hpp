#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "docstruct/ingest.hpp"

namespace docstruct::features {

struct HeaderVocabulary {
    std::set<std::string> words;
    int min_frequency = 100;

    bool contains(const std::string& lowered) const { return words.count(lowered) > 0; }
};

/// Alphabetic tokens of the header lines, lowercased; a token is kept when
/// it occurs more than `min_frequency` times and is not a stopword.
HeaderVocabulary build_header_vocabulary(std::span<const std::string> header_lines,
                                         const std::unordered_set<std::string>& stopwords, int min_frequency);

enum class TextLength : int { Short = 0, Medium = 1, Long = 2 };

inline constexpr std::size_t kLayoutFeatureCount = 16;

/// The sixteen hand-engineered layout features of a line. encode() emits
/// them in the order the fields are declared: booleans as 0/1, pos_nnp as
/// a count and text_len_group as its ordinal 0..2.
struct LayoutFeatures {
    int pos_nnp = 0;
    bool without_verb_higher_line_space = false;
    bool font_weight = false;
    bool bold_italic = false;
    bool at_least_3_lines_upper = false;
    bool higher_line_space = false;
    bool number_dot = false;
    TextLength text_len_group = TextLength::Short;
    bool seq_number = false;
    bool colon = false;
    bool header_0 = false;
    bool header_1 = false;
    bool header_2 = false;
    bool title_case = false;
    bool all_upper = false;
    bool voc = false;

    std::array<double, kLayoutFeatureCount> encode() const;
    static const std::array<std::string_view, kLayoutFeatureCount>& names();

    bool operator==(const LayoutFeatures&) const = default;
};

// Lexicon-plus-suffix part-of-speech heuristic.
struct PosCounts {
    int nouns = 0;
    int verbs = 0;
};
PosCounts heuristic_pos_counts(std::string_view text);

// Tunable constants of the layout rules.
inline constexpr double kHigherLineSpaceFactor = 1.5;
inline constexpr std::size_t kShortLineMaxTokens = 6;
inline constexpr std::size_t kMediumLineMaxTokens = 20;

/// `stats` must describe line.page_number. Neighbours on another page do
/// not contribute to the spacing features.
LayoutFeatures extract_layout_features(const ingest::LineRecord& line, const ingest::LineRecord* prev,
                                       const ingest::LineRecord* next, const ingest::PageStats& stats,
                                       const HeaderVocabulary& vocab);

/// Features for every line of a document, computing page statistics and
/// neighbours internally.
std::vector<LayoutFeatures> extract_document_features(std::span<const ingest::LineRecord> lines,
                                                      const HeaderVocabulary& vocab);

struct SparseVector {
    std::size_t dim = 0;
    std::vector<std::pair<std::size_t, double>> entries;  // ascending index, nonzero values

    double norm() const;
    std::vector<double> dense() const;
};

struct NgramOptions {
    int min_n = 1;
    int max_n = 3;
    double min_df_fraction = 0.05;
    double max_df_fraction = 0.95;
    std::size_t min_documents = 20;
};

class NgramVectorizer {
public:
    NgramVectorizer() = default;

    std::size_t size() const { return terms_.size(); }
    std::size_t n_documents() const { return n_documents_; }
    const NgramOptions& options() const { return options_; }
    const std::vector<std::string>& terms() const { return terms_; }
    const std::vector<std::size_t>& document_frequencies() const { return df_; }
    const std::vector<double>& idf() const { return idf_; }
    std::optional<std::size_t> column(const std::string& term) const;

    std::size_t min_df() const;
    std::size_t max_df() const;

    nlohmann::json to_json() const;
    static NgramVectorizer from_json(const nlohmann::json& j);

private:
    friend NgramVectorizer fit_ngram_vectorizer(std::span<const std::string>, const NgramOptions&);

    NgramOptions options_;
    std::size_t n_documents_ = 0;
    std::vector<std::string> terms_;  // sorted; position is the column index
    std::vector<std::size_t> df_;
    std::vector<double> idf_;
};

/// All n-grams (word tokens of two or more alphanumerics) of one text,
/// in order of occurrence, joined by single spaces.
std::vector<std::string> ngrams(std::string_view text, int min_n, int max_n);

/// Throws std::invalid_argument for fewer than options.min_documents texts.
NgramVectorizer fit_ngram_vectorizer(std::span<const std::string> texts, const NgramOptions& options = {});

/// tf * idf per in-vocabulary n-gram, then L2-normalised.
SparseVector vectorize(const NgramVectorizer& vectorizer, std::string_view text);

enum class FeatureMode { LayoutOnly, Combined };

struct FeatureVector {
    std::array<double, kLayoutFeatureCount> layout{};
    std::optional<SparseVector> text;
    FeatureMode mode = FeatureMode::LayoutOnly;

    std::size_t size() const { return kLayoutFeatureCount + (text ? text->dim : 0); }
    std::vector<double> dense() const;
};

FeatureVector combine(const LayoutFeatures& layout, const SparseVector* text_vec);

nlohmann::json to_json(const HeaderVocabulary& vocab);
HeaderVocabulary header_vocabulary_from_json(const nlohmann::json& j);

}  // namespace docstruct::features
