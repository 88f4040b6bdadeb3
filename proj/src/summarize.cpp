#include "docstruct/summarize.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "docstruct/text.hpp"

namespace docstruct::summarize {

namespace {

const std::unordered_set<std::string>& abbreviations() {
    static const std::unordered_set<std::string> a = {
        "dr.",  "mr.",  "mrs.", "ms.",  "prof.", "e.g.", "i.e.", "al.",  "fig.", "figs.", "eq.",    "eqs.",
        "vs.",  "no.",  "st.",  "jr.",  "sr.",   "cf.",  "sec.", "ref.", "refs.", "approx.", "resp.", "vol."};
    return a;
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool guarded(std::string_view text, std::size_t period) {
    std::size_t b = period;
    while (b > 0 && !is_space(text[b - 1])) --b;
    const std::string word = text::to_lower(text.substr(b, period - b + 1));
    if (abbreviations().count(word)) return true;
    // Single capital initial such as "J."
    return period - b == 1 && std::isupper(static_cast<unsigned char>(text[b]));
}

}  // namespace

std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c != '.' && c != '!' && c != '?') continue;
        std::size_t end = i + 1;
        while (end < text.size() && (text[end] == '"' || text[end] == '\'' || text[end] == ')')) ++end;
        if (end < text.size() && !is_space(text[end])) continue;
        if (c == '.' && guarded(text, i)) continue;
        auto s = text::trim(text.substr(start, end - start));
        if (!s.empty()) out.push_back(std::move(s));
        start = end;
        i = end > 0 ? end - 1 : 0;
    }
    auto tail = text::trim(text.substr(std::min(start, text.size())));
    if (!tail.empty()) out.push_back(std::move(tail));
    return out;
}

double sentence_similarity(std::string_view a, std::string_view b) {
    const double la = static_cast<double>(text::word_tokens(a).size());
    const double lb = static_cast<double>(text::word_tokens(b).size());
    if (la < 1.0 || lb < 1.0) return 0.0;
    const double denom = std::log(la) + std::log(lb);
    if (!(denom > 0.0)) return 0.0;
    const auto ta = text::content_tokens(a);
    const auto tb = text::content_tokens(b);
    const std::set<std::string> sa(ta.begin(), ta.end());
    std::set<std::string> shared;
    for (const auto& t : tb)
        if (sa.count(t)) shared.insert(t);
    return static_cast<double>(shared.size()) / denom;
}

std::vector<double> textrank_scores(const Matrix& adjacency, double damping, double tol, std::size_t max_iterations) {
    if (adjacency.rows != adjacency.cols) throw std::invalid_argument("textrank: adjacency must be square");
    const std::size_t n = adjacency.rows;
    struct Edge {
        std::size_t from;
        double share;  // w_ji / W_j
    };
    std::vector<std::vector<Edge>> incoming(n);
    std::vector<std::size_t> dangling;
    for (std::size_t j = 0; j < n; ++j) {
        double out_weight = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (i != j) out_weight += adjacency(j, i);
        if (out_weight <= 0.0) {
            dangling.push_back(j);
            continue;
        }
        for (std::size_t i = 0; i < n; ++i)
            if (i != j && adjacency(j, i) > 0.0) incoming[i].push_back({j, adjacency(j, i) / out_weight});
    }

    std::vector<double> scores(n, 1.0), next(n);
    for (std::size_t it = 0; it < max_iterations; ++it) {
        double spread = 0.0;
        for (std::size_t j : dangling) spread += scores[j];
        spread /= static_cast<double>(n);
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = spread;
            for (const auto& e : incoming[i]) s += e.share * scores[e.from];
            next[i] = (1.0 - damping) + damping * s;
            change += std::abs(next[i] - scores[i]);
        }
        scores.swap(next);
        if (change < tol) break;
    }
    return scores;
}

SentenceGraph build_sentence_graph(std::vector<std::string> sentences) {
    SentenceGraph g;
    const std::size_t n = sentences.size();
    g.adjacency = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double w = sentence_similarity(sentences[i], sentences[j]);
            g.adjacency(i, j) = w;
            g.adjacency(j, i) = w;
        }
    g.sentences = std::move(sentences);
    g.scores = textrank_scores(g.adjacency);
    return g;
}

Summary summarize(std::string_view section_text, double ratio) {
    if (!(ratio > 0.0 && ratio <= 1.0)) throw std::invalid_argument("summary ratio must lie in (0, 1]");
    auto sentences = split_sentences(section_text);
    if (sentences.empty()) throw std::invalid_argument("summarize: section has no sentences");
    const SentenceGraph g = build_sentence_graph(std::move(sentences));
    const std::size_t n = g.sentences.size();
    const auto k = std::min(n, static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(n) - 1e-9)));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return g.scores[a] > g.scores[b]; });
    Summary out;
    out.selected.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(std::max<std::size_t>(k, 1)));
    std::sort(out.selected.begin(), out.selected.end());
    std::vector<std::string> parts;
    for (std::size_t i : out.selected) parts.push_back(g.sentences[i]);
    out.text = text::join(parts, " ");
    return out;
}

std::string textrank_summarize(std::string_view section_text, double ratio) {
    return summarize(section_text, ratio).text;
}

}  // namespace docstruct::summarize
