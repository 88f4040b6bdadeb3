#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "docstruct/matrix.hpp"

namespace docstruct::summarize {

/// Splits on '.', '!' and '?' followed by whitespace or end of text. A
/// period closing a known abbreviation ("Dr.", "e.g.", "Fig.") or a single
/// capital initial does not end a sentence.
std::vector<std::string> split_sentences(std::string_view text);

/// Shared content words over ln|s_i| + ln|s_j|, where |s| counts all words
/// of a sentence. Zero when the denominator is not positive.
double sentence_similarity(std::string_view a, std::string_view b);

struct SentenceGraph {
    std::vector<std::string> sentences;
    Matrix adjacency;  // symmetric, zero diagonal
    std::vector<double> scores;
};

inline constexpr double kDamping = 0.85;
inline constexpr double kTolerance = 1e-6;
inline constexpr std::size_t kMaxIterations = 100;

/// Weighted PageRank with every score starting at 1:
///   s_i <- (1 - d) + d * sum_j (w_ji / W_j) s_j.
/// A node without edges spreads its score evenly over all nodes, so the
/// scores keep summing to n. Stops once the L1 change drops below `tol`.
std::vector<double> textrank_scores(const Matrix& adjacency, double damping = kDamping, double tol = kTolerance,
                                    std::size_t max_iterations = kMaxIterations);

SentenceGraph build_sentence_graph(std::vector<std::string> sentences);

struct Summary {
    std::vector<std::size_t> selected;  // ascending sentence positions
    std::string text;
};

/// Picks the ceil(ratio * n) best-scoring sentences (ties to the earlier
/// sentence) and returns them in document order. Throws
/// std::invalid_argument for ratio outside (0, 1] or text with no sentence.
Summary summarize(std::string_view section_text, double ratio = 0.2);

std::string textrank_summarize(std::string_view section_text, double ratio = 0.2);

}  // namespace docstruct::summarize
