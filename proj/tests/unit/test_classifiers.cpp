#include <doctest.h>

#include <cmath>
#include <map>

#include "docstruct/classifiers/dataset.hpp"
#include "docstruct/classifiers/decision_tree.hpp"
#include "docstruct/classifiers/naive_bayes.hpp"
#include "docstruct/classifiers/rnn.hpp"
#include "docstruct/classifiers/svm.hpp"
#include "oracles.hpp"

using namespace docstruct;
using namespace docstruct::classifiers;

namespace {

std::map<int, std::size_t> class_counts(const std::vector<std::pair<int, int>>& s) {
    std::map<int, std::size_t> c;
    for (const auto& [v, y] : s) ++c[y];
    return c;
}

std::string fixtures_text(Rng& rng) {
    std::string s;
    for (std::size_t i = 0, n = rng.index(8); i < n; ++i) s += "abcz"[rng.index(4)];
    return s;
}

std::vector<std::pair<int, int>> make_counts(const std::map<int, int>& counts) {
    std::vector<std::pair<int, int>> out;
    int id = 0;
    for (const auto& [c, n] : counts)
        for (int i = 0; i < n; ++i) out.push_back({id++, c});
    return out;
}

}  // namespace

TEST_CASE("balance_dataset") {
    CHECK(class_counts(balance_dataset(make_counts({{0, 500}, {1, 100}}), 1)) ==
          std::map<int, std::size_t>{{0, 100}, {1, 100}});
    CHECK(class_counts(balance_dataset(make_counts({{1, 30}, {2, 20}, {3, 25}}), 1)) ==
          std::map<int, std::size_t>{{1, 20}, {2, 20}, {3, 20}});
    const auto even = make_counts({{0, 10}, {1, 10}});
    CHECK(balance_dataset(even, 9) == even);
    CHECK(balance_dataset(make_counts({{0, 50}, {1, 7}}), 3) == balance_dataset(make_counts({{0, 50}, {1, 7}}), 3));
    const std::vector<int> wanted = {0, 1, 2};
    CHECK_THROWS_WITH_AS(balance_dataset(make_counts({{0, 5}, {1, 5}}), std::span<const int>(wanted), 1),
                         doctest::Contains("class 2"), std::invalid_argument);
}

TEST_CASE("gini index") {
    CHECK(gini_index(0.5, 0.5) == 0.5);
    CHECK(gini_index(1.0, 0.0) == 1.0);
    CHECK(gini_index(0.9, 0.1) == doctest::Approx(0.82).epsilon(1e-15));
    CHECK_THROWS_AS(gini_index(0.5, 0.6), std::invalid_argument);
    CHECK_THROWS_AS(gini_index(-0.1, 1.1), std::invalid_argument);
    Rng rng(1);
    for (int i = 0; i < 10000; ++i) {
        const double p = rng.uniform();
        const double g = gini_index(p, 1.0 - p);
        CHECK(g >= 0.5);
        CHECK(g <= 1.0);
    }
}

TEST_CASE("linear svm") {
    SUBCASE("separable 1-D data") {
        std::vector<Row> x;
        std::vector<int> y;
        for (int i = 0; i < 200; ++i) {
            x.push_back({i % 2 ? 1.0 : -1.0});
            y.push_back(i % 2);
        }
        const auto m = train_linear_svm(x, y, {20, 0.1, 1e-4, 3});
        for (std::size_t i = 0; i < x.size(); ++i) CHECK(m.predict(x[i]) == y[i]);
    }
    SUBCASE("sign rule") {
        LinearSvmModel m;
        m.weights = {1.0};
        CHECK(m.predict(std::vector<double>{3.0}) == 1);
        CHECK(m.predict(std::vector<double>{-3.0}) == 0);
    }
    SUBCASE("xor is not separable") {
        const std::vector<Row> base = {{0, 0}, {1, 1}, {0, 1}, {1, 0}};
        const std::vector<int> yb = {0, 0, 1, 1};
        std::vector<Row> x;
        std::vector<int> y;
        for (int r = 0; r < 50; ++r)
            for (int k = 0; k < 4; ++k) x.push_back(base[static_cast<std::size_t>(k)]), y.push_back(yb[static_cast<std::size_t>(k)]);
        const auto m = train_linear_svm(x, y, {20, 0.1, 1e-4, 3});
        int correct = 0;
        for (std::size_t i = 0; i < x.size(); ++i) correct += m.predict(x[i]) == y[i];
        CHECK(correct <= 150);  // 0.75 of 200
    }
    SUBCASE("single class is an error") {
        std::vector<Row> x = {{1.0}, {2.0}};
        std::vector<int> y = {1, 1};
        CHECK_THROWS_AS(train_linear_svm(x, y, {}), std::invalid_argument);
    }
    SUBCASE("stronger regularization never grows the weights") {
        std::vector<Row> x;
        std::vector<int> y;
        Rng rng(8);
        for (int i = 0; i < 200; ++i) {
            const int c = i % 2;
            x.push_back({(c ? 2.0 : -2.0) + rng.uniform(-0.5, 0.5), rng.uniform(-1, 1)});
            y.push_back(c);
        }
        double prev = INFINITY;
        for (double l2 : {1e-4, 1e-2, 1e-1}) {
            const double n = train_linear_svm(x, y, {200, 0.1, l2, 5}).weight_norm();
            CHECK(n <= prev + 1e-12);
            prev = n;
        }
    }
    SUBCASE("deterministic and serializable") {
        std::vector<Row> x = {{0, 1}, {1, 0}, {1, 1}, {0, 0}};
        std::vector<int> y = {1, 0, 1, 0};
        const auto a = train_linear_svm(x, y, {10, 0.1, 1e-3, 42});
        const auto b = train_linear_svm(x, y, {10, 0.1, 1e-3, 42});
        CHECK(a.weights == b.weights);
        CHECK(a.bias == b.bias);
        const auto c = LinearSvmModel::from_json(a.to_json());
        CHECK(c.weights == a.weights);
        CHECK(c.bias == a.bias);
    }
}

TEST_CASE("decision tree") {
    SUBCASE("single informative feature") {
        std::vector<Row> x;
        std::vector<int> y;
        Rng rng(2);
        for (int i = 0; i < 60; ++i) {
            const int c = i % 2;
            x.push_back({rng.uniform(), rng.uniform(), rng.uniform(), c ? 5.0 + rng.uniform() : rng.uniform()});
            y.push_back(c);
        }
        const auto m = train_decision_tree(x, y);
        CHECK(m.depth() == 1);
        CHECK(m.nodes.size() == 3);
        CHECK(m.nodes[0].feature == 3);
        for (std::size_t i = 0; i < x.size(); ++i) CHECK(m.predict(x[i]) == y[i]);
    }
    SUBCASE("identical labels give a single leaf") {
        std::vector<Row> x = {{1}, {2}, {3}};
        std::vector<int> y = {1, 1, 1};
        const auto m = train_decision_tree(x, y);
        CHECK(m.nodes.size() == 1);
        CHECK(m.predict(std::vector<double>{9}) == 1);
    }
    SUBCASE("matches the exhaustive oracle") {
        Rng rng(77);
        for (int t = 0; t < 200; ++t) {
            std::vector<Row> x;
            std::vector<int> y;
            for (int i = 0; i < 8; ++i) {
                x.push_back({static_cast<double>(rng.index(4)), static_cast<double>(rng.index(4))});
                y.push_back(static_cast<int>(rng.index(2)));
            }
            const std::size_t depth = 1 + rng.index(4), leaf = 1 + rng.index(2);
            const auto m = train_decision_tree(x, y, {depth, leaf});
            const auto o = oracle::cart(x, y, {0, 1, 2, 3, 4, 5, 6, 7}, 0, depth, leaf, 2);
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) {
                    const std::vector<double> q = {a - 0.25, b + 0.25};
                    CHECK(m.predict(q) == oracle::cart_predict(*o, q));
                }
        }
    }
    SUBCASE("pure leaves predict their class on training points") {
        Rng rng(5);
        std::vector<Row> x;
        std::vector<int> y;
        for (int i = 0; i < 100; ++i) {
            x.push_back({rng.uniform(), rng.uniform()});
            y.push_back(static_cast<int>(rng.index(3)));
        }
        const auto m = train_decision_tree(x, y, {4, 1});
        for (std::size_t i = 0; i < x.size(); ++i) {
            const auto& leaf = m.nodes[m.leaf_index(x[i])];
            const auto nonzero = std::count_if(leaf.class_counts.begin(), leaf.class_counts.end(),
                                               [](std::size_t c) { return c > 0; });
            CHECK(nonzero >= 1);
            if (nonzero == 1) CHECK(m.predict(x[i]) == y[i]);
        }
        const auto back = DecisionTreeModel::from_json(m.to_json());
        for (std::size_t i = 0; i < x.size(); ++i) CHECK(back.predict(x[i]) == m.predict(x[i]));
    }
}

TEST_CASE("naive bayes") {
    SUBCASE("priors") {
        std::vector<Row> x = {{1, 0}, {1, 0}, {1, 0}, {0, 1}};
        std::vector<int> y = {0, 0, 0, 1};
        const auto m = train_naive_bayes(x, y);
        CHECK(std::exp(m.class_log_priors[0]) == doctest::Approx(0.75));
        CHECK(std::exp(m.class_log_priors[1]) == doctest::Approx(0.25));
        for (const auto& row : m.feature_log_likelihoods) {
            double s = 0;
            for (double v : row) s += std::exp(v);
            CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("symmetric fixture") {
        std::vector<Row> x = {{3, 1}, {2, 0}, {1, 3}, {0, 2}};
        std::vector<int> y = {0, 0, 1, 1};
        const auto m = train_naive_bayes(x, y);
        // Hand computation: class 0 has counts (5,1)+1 -> (6/8, 2/8); class 1 the mirror.
        const std::vector<double> q = {2, 0};
        const auto p = m.posterior(q);
        CHECK(p[0] == doctest::Approx(0.5 * 0.75 * 0.75 / (0.5 * 0.75 * 0.75 + 0.5 * 0.25 * 0.25)).epsilon(1e-12));
        CHECK(m.predict(q) == 0);
    }
    SUBCASE("posterior sums to one and matches the enumeration oracle") {
        Rng rng(12);
        for (int t = 0; t < 50; ++t) {
            std::vector<Row> x;
            std::vector<int> y;
            for (int i = 0; i < 6; ++i) {
                x.push_back({double(rng.index(4)), double(rng.index(4)), double(rng.index(4))});
                y.push_back(i % 2);
            }
            const auto m = train_naive_bayes(x, y, 1.0);
            const std::vector<double> q = {double(rng.index(4)), double(rng.index(4)), double(rng.index(4))};
            const auto p = m.posterior(q);
            CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-12));
            const auto o = oracle::nb_posterior(x, y, 1.0, q, 2);
            CHECK(p[0] == doctest::Approx(o[0]).epsilon(1e-9));
        }
    }
    SUBCASE("argmax invariant under shifting log scores") {
        std::vector<Row> x = {{1, 2}, {2, 1}, {0, 3}};
        std::vector<int> y = {0, 1, 1};
        auto m = train_naive_bayes(x, y);
        const std::vector<double> q = {1, 1};
        const int before = m.predict(q);
        for (double& v : m.class_log_priors) v += std::log(7.5);
        CHECK(m.predict(q) == before);
    }
    SUBCASE("negative feature is an error") {
        std::vector<Row> x = {{1, -1}, {0, 1}};
        std::vector<int> y = {0, 1};
        CHECK_THROWS_AS(train_naive_bayes(x, y), std::invalid_argument);
    }
    SUBCASE("json round trip") {
        std::vector<Row> x = {{1, 2}, {2, 1}};
        std::vector<int> y = {0, 1};
        const auto m = train_naive_bayes(x, y, 0.5);
        const auto b = NaiveBayesModel::from_json(m.to_json());
        CHECK(b.class_log_priors == m.class_log_priors);
        CHECK(b.feature_log_likelihoods == m.feature_log_likelihoods);
        CHECK(b.smoothing == 0.5);
    }
}

TEST_CASE("one-hot encoding") {
    const Alphabet a;
    CHECK(a.size() == 97);
    const auto s = one_hot_encode("A", a);
    REQUIRE(s.indices.size() == 2);
    CHECK(s.indices[0] == a.index('A'));
    CHECK(s.indices[1] == a.eos());
    for (const auto& row : s.dense()) {
        CHECK(row.size() == 97);
        CHECK(std::count(row.begin(), row.end(), 1.0) == 1);
        CHECK(std::count(row.begin(), row.end(), 0.0) == 96);
    }
    CHECK(one_hot_encode(std::string(150, 'x'), a).indices.size() == 100);
    CHECK(one_hot_encode("\x01", a).indices[0] == a.unk());
    CHECK(one_hot_encode("", a).indices == std::vector<std::size_t>{a.eos()});
    CHECK(one_hot_encode(std::string(99, 'x'), a).indices.back() == a.eos());
}

TEST_CASE("rnn forward") {
    SUBCASE("zero weights give uniform output") {
        const auto m = RnnModel::zeros(RnnInputMode::Text, 20, 2);
        const auto p = rnn_forward(m, m.encode("hello"));
        CHECK(p[0] == 0.5);
        CHECK(p[1] == 0.5);
    }
    SUBCASE("matches the step-by-step oracle") {
        Rng rng(31);
        for (int t = 0; t < 50; ++t) {
            auto m = RnnModel::zeros(RnnInputMode::Text, 2, 2, Alphabet("abc"));
            for (auto* p : m.parameters())
                for (double& v : p->data) v = rng.uniform(-1, 1);
            const auto seq = m.encode(fixtures_text(rng));
            const auto p = rnn_forward(m, seq);
            const auto o = oracle::rnn_forward(m, seq);
            CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(std::abs(p[0] - o[0]) < 1e-12);
            CHECK(std::abs(p[1] - o[1]) < 1e-12);
        }
    }
    SUBCASE("combined input prepends sixteen layout steps") {
        features::LayoutFeatures f;
        f.pos_nnp = 3;
        const auto m = RnnModel::zeros(RnnInputMode::Combined, 4, 2);
        const auto seq = m.encode("ab", &f);
        REQUIRE(seq.size() == 16 + 3);
        CHECK(seq[0].slot == 0);
        CHECK(seq[0].value == 3.0);
        CHECK(seq[16].slot == 16 + m.alphabet.index('a'));
        CHECK(m.input_size() == 16 + 97);
        CHECK_THROWS_AS(m.encode("ab"), std::invalid_argument);
        const auto l = RnnModel::zeros(RnnInputMode::Layout, 4, 2);
        CHECK(l.encode("ignored", &f).size() == 16);
    }
    SUBCASE("empty sequence and shape mismatch are errors") {
        auto m = RnnModel::zeros(RnnInputMode::Text, 3, 2);
        CHECK_THROWS_AS(rnn_forward(m, {}), std::invalid_argument);
        m.w_hh = Matrix(2, 2);
        CHECK_THROWS_AS(rnn_forward(m, m.encode("a")), std::invalid_argument);
    }
}

TEST_CASE("rnn training") {
    std::vector<RnnSample> samples;
    const auto proto = RnnModel::zeros(RnnInputMode::Text, 20, 2);
    Rng rng(6);
    for (int i = 0; i < 40; ++i) {
        const bool header = i % 2 == 0;
        const std::string s = header ? std::to_string(1 + rng.index(9)) + ". Title" : "plain words here";
        samples.push_back({proto.encode(s), header ? 1 : 0});
    }
    RnnConfig cfg;
    cfg.epochs = 3;
    cfg.seed = 4;
    const auto a = train_rnn(samples, cfg);
    const auto b = train_rnn(samples, cfg);
    CHECK(a.step_losses == b.step_losses);
    CHECK(a.step_losses.size() == 3 * 4);
    CHECK(a.epoch_losses.size() == 3);
    CHECK(std::abs(a.step_losses.front() - std::log(2.0)) < 0.1);
    const auto back = RnnModel::from_json(a.model.to_json());
    CHECK(back.w_xh.data == a.model.w_xh.data);
    CHECK(back.mode == a.model.mode);
    CHECK(back.probabilities(samples[0].input) == a.model.probabilities(samples[0].input));
    CHECK_THROWS_AS(train_rnn({}, cfg), std::invalid_argument);
    CHECK_THROWS_AS(rnn_loss(a.model, {}), std::invalid_argument);
}
