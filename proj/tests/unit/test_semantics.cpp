#include <doctest.h>

#include <cmath>
#include <set>

#include "corpora.hpp"
#include "docstruct/semantics.hpp"

using namespace docstruct;
using namespace docstruct::semantics;

namespace {

std::vector<Tokens> df_corpus(std::size_t n, const std::vector<std::pair<std::string, std::size_t>>& dfs) {
    std::vector<Tokens> s(n, Tokens{"filler"});
    for (const auto& [tok, df] : dfs)
        for (std::size_t i = 0; i < df; ++i) s[i].push_back(tok);
    return s;
}

LdaModel two_topic_model(const corpora::TwoTopic& c, std::size_t passes, std::uint64_t seed = 1) {
    const auto dict = build_dictionary(c.sections, {5, 0.9, 100000});
    LdaOptions o;
    o.topics = 2;
    o.passes = passes;
    o.seed = seed;
    return train_lda(c.sections, dict, o);
}

}  // namespace

TEST_CASE("section tokenization") {
    CHECK(tokenize_section("The Graph, a vertex; and 2 edges!") == Tokens{"graph", "vertex", "edges"});
    CHECK(tokenize_section("").empty());
}

TEST_CASE("dictionary bounds") {
    const auto d = build_dictionary(df_corpus(1000, {{"rare", 19}, {"common", 101}, {"mid", 50}, {"edge", 100}}),
                                    {20, 0.10, 100000});
    CHECK_FALSE(d.id("rare"));
    CHECK_FALSE(d.id("common"));
    CHECK(d.id("mid"));
    CHECK(d.id("edge"));
    CHECK_FALSE(d.id("filler"));
    CHECK_THROWS_AS(build_dictionary(df_corpus(10, {}), {20, 0.1, 10}), std::invalid_argument);
    CHECK_THROWS_AS(build_dictionary(df_corpus(100, {}), {20, 0.1, 10}), std::invalid_argument);
}

TEST_CASE("dictionary keep_n keeps the most frequent") {
    const auto d = build_dictionary(df_corpus(100, {{"a", 30}, {"b", 50}, {"c", 30}, {"d", 40}}), {20, 0.6, 2});
    CHECK(d.tokens() == std::vector<std::string>{"b", "d"});
    const auto e = build_dictionary(df_corpus(100, {{"b", 30}, {"a", 30}, {"c", 30}}), {20, 0.6, 2});
    CHECK(e.tokens() == std::vector<std::string>{"a", "b"});  // lexicographic tie-break
}

TEST_CASE("dictionary bounds hold over random corpora") {
    Rng rng(8);
    for (int t = 0; t < 20; ++t) {
        std::vector<Tokens> sections;
        const std::size_t n = 40 + rng.index(60);
        for (std::size_t i = 0; i < n; ++i) {
            Tokens s;
            for (std::size_t k = 0, m = rng.index(10); k < m; ++k) s.push_back("w" + std::to_string(rng.index(1 + rng.index(40))));
            sections.push_back(s);
        }
        const DictionaryOptions o{3, 0.3, 15};
        Dictionary d;
        try {
            d = build_dictionary(sections, o);
        } catch (const std::invalid_argument&) {
            continue;
        }
        CHECK(d.size() <= 15);
        for (std::size_t i = 0; i < d.size(); ++i) {
            std::size_t df = 0;
            for (const auto& s : sections) df += std::find(s.begin(), s.end(), d.tokens()[i]) != s.end();
            CHECK(df == d.document_frequencies()[i]);
            CHECK(df >= 3);
            CHECK(static_cast<double>(df) <= 0.3 * static_cast<double>(n) + 1e-9);
        }
    }
}

TEST_CASE("lda on two disjoint topics") {
    const auto c = corpora::two_topic(60, 40, 5);
    const auto m = two_topic_model(c, 50);
    for (std::size_t k = 0; k < 2; ++k) {
        double s = 0;
        for (std::size_t w = 0; w < m.dictionary.size(); ++w) s += m.phi(k, w);
        CHECK(std::abs(s - 1.0) < 1e-9);
    }
    std::size_t agree = 0, swapped = 0;
    for (std::size_t d = 0; d < c.sections.size(); ++d) {
        CHECK(std::abs(m.theta(d, 0) + m.theta(d, 1) - 1.0) < 1e-9);
        const std::size_t top = m.theta(d, 0) >= m.theta(d, 1) ? 0 : 1;
        agree += top == c.truth[d];
        swapped += top != c.truth[d];
    }
    CHECK(std::max(agree, swapped) >= 57);

    // Inference on a pure section picks the matching topic.
    const std::size_t a_topic = agree >= swapped ? 0 : 1;
    const auto theta = infer_topics(m, Tokens(c.pools[0].begin(), c.pools[0].end()));
    CHECK(std::abs(theta[0] + theta[1] - 1.0) < 1e-9);
    CHECK(theta[a_topic] > theta[1 - a_topic]);
    CHECK(infer_topics(m, {}) == std::vector<double>{0.5, 0.5});
    CHECK(infer_topics(m, Tokens{"unknown"}) == std::vector<double>{0.5, 0.5});

    const auto again = two_topic_model(c, 50);
    CHECK(again.phi.data == m.phi.data);
    CHECK(infer_topics(again, c.sections[3]) == infer_topics(m, c.sections[3]));

    const auto back = LdaModel::from_json(m.to_json());
    CHECK(back.phi.data == m.phi.data);
    CHECK(back.dictionary.tokens() == m.dictionary.tokens());
    CHECK(infer_topics(back, c.sections[3]) == infer_topics(m, c.sections[3]));
}

TEST_CASE("single topic") {
    const auto c = corpora::two_topic(20, 10, 1);
    const auto dict = build_dictionary(c.sections, {2, 0.9, 1000});
    LdaOptions o;
    o.topics = 1;
    o.passes = 5;
    const auto m = train_lda(c.sections, dict, o);
    for (std::size_t d = 0; d < c.sections.size(); ++d) CHECK(m.theta(d, 0) == 1.0);
    CHECK(m.alpha == 50.0);
}

TEST_CASE("label_section") {
    LdaModel m;
    std::vector<Tokens> sections(2, Tokens{"graph", "vertex", "edge", "tensor", "layer"});
    m.dictionary = build_dictionary(sections, {1, 1.0, 100});
    m.topics = 2;
    m.phi = Matrix(2, 5);
    // dictionary order: edge graph layer tensor vertex
    m.phi.data = {0.2, 0.4, 0.0, 0.1, 0.3, 0.1, 0.1, 0.4, 0.3, 0.1};
    const std::vector<double> theta = {0.9, 0.1};
    const auto l = label_section(m, theta, 2, 7);
    CHECK(l.label == "graph-vertex");
    CHECK(l.topic == 0);
    CHECK(l.section_id == 7);
    REQUIRE(l.terms.size() == 2);
    CHECK(l.terms[0].second >= l.terms[1].second);
    CHECK(label_section(m, std::vector<double>{0.5, 0.5}).topic == 0);
    CHECK(label_section(m, std::vector<double>{0.2, 0.8}, 1).label == "layer");
    CHECK_THROWS_AS(label_section(m, theta, 0), std::invalid_argument);
}

TEST_CASE("perplexity") {
    SUBCASE("certain single-word model") {
        std::vector<Tokens> s(3, Tokens{"only"});
        LdaOptions o;
        o.topics = 1;
        o.passes = 2;
        const auto m = train_lda(s, build_dictionary(s, {1, 1.0, 10}), o);
        CHECK(perplexity(m, s) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("finite, non-positive, improves with training, symmetric in topic labels") {
        const auto c = corpora::two_topic(60, 40, 9);
        const auto early = two_topic_model(c, 1);
        const auto late = two_topic_model(c, 50);
        const double pe = perplexity(early, c.sections), pl = perplexity(late, c.sections);
        CHECK(std::isfinite(pe));
        CHECK(pe <= 0.0);
        CHECK(std::abs(pl) < std::abs(pe));

        auto swapped = late;
        for (std::size_t w = 0; w < swapped.dictionary.size(); ++w) std::swap(swapped.phi(0, w), swapped.phi(1, w));
        CHECK(perplexity(swapped, c.sections) == doctest::Approx(pl).epsilon(1e-12));
    }
    SUBCASE("errors") {
        const auto c = corpora::two_topic(20, 10, 1);
        const auto m = two_topic_model(c, 2);
        CHECK_THROWS_AS(perplexity(m, {}), std::invalid_argument);
        CHECK_THROWS_AS(perplexity(m, std::vector<Tokens>{{"nothing"}}), std::invalid_argument);
    }
}

TEST_CASE("split-half coherence") {
    const auto c = corpora::two_topic(60, 40, 3);
    const auto m = two_topic_model(c, 50);
    const auto coh = split_half_coherence(m, c.sections, 11);
    CHECK(coh.intra > coh.inter);

    std::vector<Tokens> same;
    for (int i = 0; i < 4; ++i) same.push_back(Tokens(10, c.pools[i % 2][0]));
    CHECK(split_half_coherence(m, same, 1).intra == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(split_half_coherence(m, std::vector<Tokens>{c.sections[0]}, 1), std::invalid_argument);
    CHECK_THROWS_AS(split_half_coherence(m, std::vector<Tokens>{c.sections[0], Tokens{"x"}}, 1), std::invalid_argument);
    const std::vector<double> v = {0.3, 0.7};
    CHECK(cosine_similarity(v, v) == doctest::Approx(1.0).epsilon(1e-15));
}
