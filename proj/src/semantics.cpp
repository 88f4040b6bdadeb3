#include "docstruct/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "docstruct/random.hpp"
#include "docstruct/text.hpp"

namespace docstruct::semantics {

Tokens tokenize_section(std::string_view text) { return text::content_tokens(text); }

std::optional<std::size_t> Dictionary::id(const std::string& token) const {
    auto it = lookup_.find(token);
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::size_t> Dictionary::ids(std::span<const std::string> tokens) const {
    std::vector<std::size_t> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens)
        if (auto i = id(t)) out.push_back(*i);
    return out;
}

void Dictionary::index() {
    lookup_.clear();
    for (std::size_t i = 0; i < tokens_.size(); ++i) lookup_.emplace(tokens_[i], i);
}

Dictionary build_dictionary(std::span<const Tokens> sections, const DictionaryOptions& options) {
    const std::size_t n = sections.size();
    if (n < options.min_docs)
        throw std::invalid_argument("build_dictionary: " + std::to_string(n) + " sections is fewer than min_docs " +
                                    std::to_string(options.min_docs));
    std::map<std::string, std::size_t> df;
    for (const auto& section : sections) {
        Tokens unique(section.begin(), section.end());
        std::sort(unique.begin(), unique.end());
        unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
        for (auto& t : unique) ++df[t];
    }
    const auto max_df = static_cast<std::size_t>(std::floor(options.max_fraction * static_cast<double>(n) + 1e-9));
    std::vector<std::pair<std::string, std::size_t>> kept;
    for (const auto& [tok, count] : df)
        if (count >= options.min_docs && count <= max_df) kept.emplace_back(tok, count);
    if (kept.empty()) throw std::invalid_argument("build_dictionary: every token was filtered out");
    if (kept.size() > options.keep_n) {
        std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
        kept.resize(options.keep_n);
        std::sort(kept.begin(), kept.end());
    }
    Dictionary d;
    d.options_ = options;
    d.n_documents_ = n;
    for (auto& [tok, count] : kept) {
        d.tokens_.push_back(tok);
        d.df_.push_back(count);
    }
    d.index();
    return d;
}

nlohmann::json Dictionary::to_json() const {
    return {{"n_documents", n_documents_},
            {"min_docs", options_.min_docs},
            {"max_fraction", options_.max_fraction},
            {"keep_n", options_.keep_n},
            {"tokens", tokens_},
            {"df", df_}};
}

Dictionary Dictionary::from_json(const nlohmann::json& j) {
    Dictionary d;
    d.n_documents_ = j.at("n_documents").get<std::size_t>();
    d.options_.min_docs = j.at("min_docs").get<std::size_t>();
    d.options_.max_fraction = j.at("max_fraction").get<double>();
    d.options_.keep_n = j.at("keep_n").get<std::size_t>();
    d.tokens_ = j.at("tokens").get<std::vector<std::string>>();
    d.df_ = j.at("df").get<std::vector<std::size_t>>();
    if (d.df_.size() != d.tokens_.size()) throw std::runtime_error("dictionary: token and df lengths differ");
    d.index();
    return d;
}

namespace {

std::size_t sample(Rng& rng, const std::vector<double>& weights, double total) {
    double u = rng.uniform() * total;
    for (std::size_t k = 0; k + 1 < weights.size(); ++k) {
        u -= weights[k];
        if (u < 0.0) return k;
    }
    return weights.size() - 1;
}

std::vector<double> prior(const LdaModel& m) { return std::vector<double>(m.topics, 1.0 / static_cast<double>(m.topics)); }

}  // namespace

LdaModel train_lda(std::span<const Tokens> sections, const Dictionary& dictionary, const LdaOptions& options) {
    if (options.topics < 1) throw std::invalid_argument("train_lda: topics must be >= 1");
    if (sections.empty()) throw std::invalid_argument("train_lda: empty corpus");
    if (dictionary.size() == 0) throw std::invalid_argument("train_lda: empty dictionary");

    LdaModel m;
    m.dictionary = dictionary;
    m.topics = options.topics;
    m.passes = options.passes;
    m.alpha = options.alpha > 0.0 ? options.alpha : 50.0 / static_cast<double>(options.topics);
    m.beta = options.beta;
    m.infer_iterations = options.infer_iterations;
    m.seed = options.seed;

    const std::size_t k_topics = m.topics;
    const std::size_t v = dictionary.size();
    const double vbeta = static_cast<double>(v) * m.beta;

    std::vector<std::vector<std::size_t>> docs;
    docs.reserve(sections.size());
    for (const auto& s : sections) docs.push_back(dictionary.ids(s));

    Rng rng(options.seed);
    Matrix n_dk(docs.size(), k_topics), n_kw(k_topics, v);
    std::vector<double> n_k(k_topics, 0.0);
    std::vector<std::vector<std::size_t>> z(docs.size());
    for (std::size_t d = 0; d < docs.size(); ++d) {
        for (std::size_t w : docs[d]) {
            const std::size_t k = rng.index(k_topics);
            z[d].push_back(k);
            n_dk(d, k) += 1;
            n_kw(k, w) += 1;
            n_k[k] += 1;
        }
    }

    std::vector<double> weights(k_topics);
    for (std::size_t pass = 0; pass < options.passes; ++pass) {
        for (std::size_t d = 0; d < docs.size(); ++d) {
            for (std::size_t i = 0; i < docs[d].size(); ++i) {
                const std::size_t w = docs[d][i];
                std::size_t k = z[d][i];
                n_dk(d, k) -= 1;
                n_kw(k, w) -= 1;
                n_k[k] -= 1;
                double total = 0.0;
                for (std::size_t t = 0; t < k_topics; ++t) {
                    weights[t] = (n_dk(d, t) + m.alpha) * (n_kw(t, w) + m.beta) / (n_k[t] + vbeta);
                    total += weights[t];
                }
                k = sample(rng, weights, total);
                z[d][i] = k;
                n_dk(d, k) += 1;
                n_kw(k, w) += 1;
                n_k[k] += 1;
            }
        }
    }

    m.phi = Matrix(k_topics, v);
    for (std::size_t k = 0; k < k_topics; ++k)
        for (std::size_t w = 0; w < v; ++w) m.phi(k, w) = (n_kw(k, w) + m.beta) / (n_k[k] + vbeta);
    m.theta = Matrix(docs.size(), k_topics);
    const double kalpha = static_cast<double>(k_topics) * m.alpha;
    for (std::size_t d = 0; d < docs.size(); ++d)
        for (std::size_t k = 0; k < k_topics; ++k)
            m.theta(d, k) = (n_dk(d, k) + m.alpha) / (static_cast<double>(docs[d].size()) + kalpha);
    return m;
}

std::vector<double> infer_topics(const LdaModel& model, std::span<const std::string> tokens) {
    const auto ids = model.dictionary.ids(tokens);
    if (ids.empty()) return prior(model);
    const std::size_t k_topics = model.topics;

    Rng rng(model.seed ^ 0x5851f42d4c957f2dULL);
    std::vector<double> n_dk(k_topics, 0.0), acc(k_topics, 0.0), weights(k_topics);
    std::vector<std::size_t> z;
    z.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        z.push_back(rng.index(k_topics));
        n_dk[z.back()] += 1;
    }
    const std::size_t iterations = std::max<std::size_t>(model.infer_iterations, 2);
    const std::size_t burn_in = iterations / 2;
    for (std::size_t it = 0; it < iterations; ++it) {
        for (std::size_t i = 0; i < ids.size(); ++i) {
            n_dk[z[i]] -= 1;
            double total = 0.0;
            for (std::size_t k = 0; k < k_topics; ++k) {
                weights[k] = (n_dk[k] + model.alpha) * model.phi(k, ids[i]);
                total += weights[k];
            }
            z[i] = sample(rng, weights, total);
            n_dk[z[i]] += 1;
        }
        if (it >= burn_in)
            for (std::size_t k = 0; k < k_topics; ++k) acc[k] += n_dk[k];
    }
    const double kept = static_cast<double>(iterations - burn_in);
    const double denom = static_cast<double>(ids.size()) + static_cast<double>(k_topics) * model.alpha;
    std::vector<double> theta(k_topics);
    for (std::size_t k = 0; k < k_topics; ++k) theta[k] = (acc[k] / kept + model.alpha) / denom;
    return theta;
}

std::vector<double> fold_in_topics(const LdaModel& model, std::span<const std::size_t> ids) {
    const std::size_t k_topics = model.topics;
    std::vector<double> theta = prior(model);
    if (ids.empty()) return theta;
    std::map<std::size_t, double> counts;
    for (std::size_t w : ids) counts[w] += 1.0;
    const double denom = static_cast<double>(ids.size()) + static_cast<double>(k_topics) * model.alpha;
    std::vector<double> next(k_topics);
    for (int it = 0; it < 500; ++it) {
        std::fill(next.begin(), next.end(), model.alpha);
        for (const auto& [w, n] : counts) {
            double z = 0.0;
            for (std::size_t k = 0; k < k_topics; ++k) z += theta[k] * model.phi(k, w);
            for (std::size_t k = 0; k < k_topics; ++k) next[k] += n * theta[k] * model.phi(k, w) / z;
        }
        double change = 0.0;
        for (std::size_t k = 0; k < k_topics; ++k) {
            next[k] /= denom;
            change += std::abs(next[k] - theta[k]);
        }
        theta.swap(next);
        if (change < 1e-13) break;
    }
    return theta;
}

SemanticLabel label_section(const LdaModel& model, std::span<const double> theta, std::size_t n_terms,
                            std::size_t section_id) {
    if (n_terms < 1) throw std::invalid_argument("label_section: n_terms must be >= 1");
    if (theta.size() != model.topics) throw std::invalid_argument("label_section: theta has the wrong length");
    SemanticLabel out;
    out.section_id = section_id;
    out.topic = static_cast<std::size_t>(std::max_element(theta.begin(), theta.end()) - theta.begin());

    const std::size_t v = model.dictionary.size();
    std::vector<std::size_t> order(v);
    std::iota(order.begin(), order.end(), 0);
    const std::size_t n = std::min(n_terms, v);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          const double pa = model.phi(out.topic, a), pb = model.phi(out.topic, b);
                          return pa != pb ? pa > pb : a < b;
                      });
    std::vector<std::string> words;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& tok = model.dictionary.tokens()[order[i]];
        out.terms.emplace_back(tok, model.phi(out.topic, order[i]));
        words.push_back(tok);
    }
    out.label = text::join(words, "-");
    return out;
}

double perplexity(const LdaModel& model, std::span<const Tokens> heldout) {
    if (heldout.empty()) throw std::invalid_argument("perplexity: empty held-out set");
    double log_likelihood = 0.0;
    std::size_t tokens = 0;
    for (const auto& section : heldout) {
        const auto ids = model.dictionary.ids(section);
        if (ids.empty()) continue;
        const auto theta = fold_in_topics(model, ids);
        for (std::size_t w : ids) {
            double p = 0.0;
            for (std::size_t k = 0; k < model.topics; ++k) p += theta[k] * model.phi(k, w);
            log_likelihood += std::log(p);
        }
        tokens += ids.size();
    }
    if (tokens == 0) throw std::invalid_argument("perplexity: held-out set has no in-dictionary tokens");
    return log_likelihood / static_cast<double>(tokens);
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("cosine_similarity: length mismatch");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

Coherence split_half_coherence(const LdaModel& model, std::span<const Tokens> sections, std::uint64_t seed) {
    if (sections.size() < 2) throw std::invalid_argument("split_half_coherence: need at least 2 sections");
    std::vector<std::vector<double>> first, second;
    for (std::size_t i = 0; i < sections.size(); ++i) {
        const auto& s = sections[i];
        if (s.size() < 2)
            throw std::invalid_argument("split_half_coherence: section " + std::to_string(i) +
                                        " has fewer than 2 tokens");
        const auto mid = static_cast<std::ptrdiff_t>(s.size() / 2);
        first.push_back(infer_topics(model, Tokens(s.begin(), s.begin() + mid)));
        second.push_back(infer_topics(model, Tokens(s.begin() + mid, s.end())));
    }
    // Sattolo's algorithm: a uniformly random single cycle, hence no fixed points.
    std::vector<std::size_t> partner(sections.size());
    std::iota(partner.begin(), partner.end(), 0);
    Rng rng(seed);
    for (std::size_t i = partner.size() - 1; i > 0; --i) std::swap(partner[i], partner[rng.index(i)]);

    Coherence c;
    for (std::size_t i = 0; i < sections.size(); ++i) {
        c.intra += cosine_similarity(first[i], second[i]);
        c.inter += cosine_similarity(first[i], second[partner[i]]);
    }
    c.intra /= static_cast<double>(sections.size());
    c.inter /= static_cast<double>(sections.size());
    return c;
}

nlohmann::json LdaModel::to_json() const {
    return {{"format", "docstruct.lda"},
            {"version", 1},
            {"topics", topics},
            {"passes", passes},
            {"alpha", alpha},
            {"beta", beta},
            {"infer_iterations", infer_iterations},
            {"seed", seed},
            {"dictionary", dictionary.to_json()},
            {"phi", docstruct::to_json(phi)},
            {"theta", docstruct::to_json(theta)}};
}

LdaModel LdaModel::from_json(const nlohmann::json& j) {
    if (j.at("format") != "docstruct.lda") throw std::runtime_error("not an lda model document");
    LdaModel m;
    m.topics = j.at("topics").get<std::size_t>();
    m.passes = j.at("passes").get<std::size_t>();
    m.alpha = j.at("alpha").get<double>();
    m.beta = j.at("beta").get<double>();
    m.infer_iterations = j.at("infer_iterations").get<std::size_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.dictionary = Dictionary::from_json(j.at("dictionary"));
    m.phi = matrix_from_json(j.at("phi"));
    m.theta = matrix_from_json(j.at("theta"));
    if (m.phi.rows != m.topics || m.phi.cols != m.dictionary.size())
        throw std::runtime_error("lda: phi shape does not match topics x vocabulary");
    return m;
}

}  // namespace docstruct::semantics
