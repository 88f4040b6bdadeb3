#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "docstruct/matrix.hpp"

namespace docstruct::semantics {

using Tokens = std::vector<std::string>;

/// Lowercased content words of a section: punctuation stripped, tokens
/// shorter than two characters and stopwords dropped.
Tokens tokenize_section(std::string_view text);

struct DictionaryOptions {
    std::size_t min_docs = 20;
    double max_fraction = 0.10;
    std::size_t keep_n = 100000;
};

class Dictionary {
public:
    std::size_t size() const { return tokens_.size(); }
    std::size_t n_documents() const { return n_documents_; }
    const DictionaryOptions& options() const { return options_; }
    const std::vector<std::string>& tokens() const { return tokens_; }
    const std::vector<std::size_t>& document_frequencies() const { return df_; }
    std::optional<std::size_t> id(const std::string& token) const;

    /// In-dictionary token ids in order; unknown tokens are dropped.
    std::vector<std::size_t> ids(std::span<const std::string> tokens) const;

    nlohmann::json to_json() const;
    static Dictionary from_json(const nlohmann::json& j);

private:
    friend Dictionary build_dictionary(std::span<const Tokens>, const DictionaryOptions&);
    void index();

    DictionaryOptions options_;
    std::size_t n_documents_ = 0;
    std::vector<std::string> tokens_;  // sorted; position is the id
    std::vector<std::size_t> df_;
    std::unordered_map<std::string, std::size_t> lookup_;
};

/// Keeps tokens with min_docs <= df <= max_fraction * N; if more than keep_n
/// remain, the keep_n with the highest df (ties lexicographic) survive.
/// Throws std::invalid_argument when N < min_docs or nothing survives.
Dictionary build_dictionary(std::span<const Tokens> sections, const DictionaryOptions& options = {});

struct LdaOptions {
    std::size_t topics = 10;
    std::size_t passes = 50;
    double alpha = 0.0;  // <= 0 selects 50 / topics
    double beta = 0.01;
    std::size_t infer_iterations = 100;
    std::uint64_t seed = 0;
};

struct LdaModel {
    Dictionary dictionary;
    std::size_t topics = 0;
    std::size_t passes = 0;
    double alpha = 0.0;
    double beta = 0.0;
    std::size_t infer_iterations = 100;
    std::uint64_t seed = 0;
    Matrix phi;    // topics x vocabulary, rows sum to 1
    Matrix theta;  // training sections x topics, rows sum to 1

    nlohmann::json to_json() const;
    static LdaModel from_json(const nlohmann::json& j);
};

/// Collapsed Gibbs sampling for `passes` full sweeps; phi and theta are the
/// smoothed estimates from the final assignment counts.
LdaModel train_lda(std::span<const Tokens> sections, const Dictionary& dictionary, const LdaOptions& options);

/// Topic mixture of an unseen section by Gibbs sampling with phi held fixed.
/// Half of model.infer_iterations is burn-in; theta averages the rest.
/// Sections without in-dictionary tokens get the normalised prior.
std::vector<double> infer_topics(const LdaModel& model, std::span<const std::string> tokens);

/// Deterministic fold-in of theta for fixed phi: iterates
/// theta_k <- (alpha + sum_w n_w r_wk) / (n + K alpha) with responsibilities
/// r_wk proportional to theta_k phi_kw.
std::vector<double> fold_in_topics(const LdaModel& model, std::span<const std::size_t> ids);

struct SemanticLabel {
    std::size_t section_id = 0;
    std::size_t topic = 0;
    std::string label;                                // top terms joined by '-'
    std::vector<std::pair<std::string, double>> terms;  // descending probability
};

/// Dominant topic (lowest id on ties) and its n_terms most probable words.
SemanticLabel label_section(const LdaModel& model, std::span<const double> theta, std::size_t n_terms = 2,
                            std::size_t section_id = 0);

/// Mean per-token natural-log likelihood of the held-out sections under
/// fixed phi and folded-in theta. Always <= 0; closer to 0 is a better fit.
/// Throws std::invalid_argument if no held-out token is in the dictionary.
double perplexity(const LdaModel& model, std::span<const Tokens> heldout);

struct Coherence {
    double intra = 0.0;  // halves of the same section
    double inter = 0.0;  // halves of different sections
};

/// Cosine similarity of inferred topic mixtures of section halves. Inter
/// pairs follow a seeded cyclic derangement of the sections.
Coherence split_half_coherence(const LdaModel& model, std::span<const Tokens> sections, std::uint64_t seed);

double cosine_similarity(std::span<const double> a, std::span<const double> b);

}  // namespace docstruct::semantics
