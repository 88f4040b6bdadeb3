#include <doctest.h>

#include <algorithm>
#include <set>

#include "docstruct/eval.hpp"
#include "docstruct/random.hpp"

using namespace docstruct;
using namespace docstruct::eval;

TEST_CASE("train/test split") {
    std::vector<std::string> docs;
    for (int i = 0; i < 10; ++i) docs.push_back("d" + std::to_string(i));
    const auto s = train_test_split(docs, 0.6, 3);
    CHECK(s.train.size() == 6);
    CHECK(s.test.size() == 4);
    std::set<std::string> all(s.train.begin(), s.train.end());
    for (const auto& d : s.test) CHECK(all.insert(d).second);
    CHECK(all == std::set<std::string>(docs.begin(), docs.end()));
    const auto again = train_test_split(docs, 0.6, 3);
    CHECK(again.train == s.train);
    CHECK(again.test == s.test);
    CHECK_THROWS_AS(train_test_split(std::vector<std::string>{"a"}, 0.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(train_test_split(docs, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(train_test_split(docs, 0.0, 1), std::invalid_argument);
}

TEST_CASE("metrics from a hand confusion matrix") {
    // Class 1: TP=8, FP=2, FN=4; the rest are true negatives.
    std::vector<int> pred, gold;
    for (int i = 0; i < 8; ++i) pred.push_back(1), gold.push_back(1);
    for (int i = 0; i < 2; ++i) pred.push_back(1), gold.push_back(0);
    for (int i = 0; i < 4; ++i) pred.push_back(0), gold.push_back(1);
    for (int i = 0; i < 6; ++i) pred.push_back(0), gold.push_back(0);
    const auto m = compute_metrics(pred, gold);
    const auto k = m.index_of(1);
    CHECK(std::abs(m.precision[k] - 0.8) < 1e-9);
    CHECK(std::abs(m.recall[k] - 2.0 / 3.0) < 1e-9);
    CHECK(std::abs(m.f1[k] - 2 * 0.8 * (2.0 / 3.0) / (0.8 + 2.0 / 3.0)) < 1e-9);
    CHECK(m.f1[k] == doctest::Approx(0.727).epsilon(1e-3));
    CHECK(m.support[k] == 12);
    CHECK(m.accuracy == doctest::Approx(14.0 / 20.0));
}

TEST_CASE("macro average") {
    const std::vector<double> f = {0.85, 0.81, 0.75};
    CHECK(std::abs(macro_average(f) - 0.8033) < 1e-4);
}

TEST_CASE("perfect predictions") {
    const std::vector<int> y = {0, 1, 2, 3, 1, 2};
    const auto m = compute_metrics(y, y);
    for (std::size_t i = 0; i < m.classes.size(); ++i) {
        CHECK(m.precision[i] == 1.0);
        CHECK(m.recall[i] == 1.0);
        CHECK(m.f1[i] == 1.0);
    }
    CHECK(m.macro_f1 == 1.0);
    CHECK_THROWS_AS(compute_metrics(std::vector<int>{1}, std::vector<int>{1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(compute_metrics(std::vector<int>{}, std::vector<int>{}), std::invalid_argument);
}

TEST_CASE("metric properties") {
    Rng rng(4);
    for (int t = 0; t < 300; ++t) {
        std::vector<int> p, g;
        for (std::size_t i = 0, n = 1 + rng.index(40); i < n; ++i) {
            p.push_back(static_cast<int>(rng.index(3)));
            g.push_back(static_cast<int>(rng.index(3)));
        }
        const auto m = compute_metrics(p, g);
        const auto s = compute_metrics(g, p);
        CHECK(m.classes == s.classes);
        for (std::size_t i = 0; i < m.classes.size(); ++i) {
            CHECK(m.precision[i] == s.recall[i]);
            CHECK(m.recall[i] == s.precision[i]);
            const double pr = m.precision[i] + m.recall[i];
            CHECK(m.f1[i] == doctest::Approx(pr > 0 ? 2 * m.precision[i] * m.recall[i] / pr : 0.0).epsilon(1e-12));
        }
        // Relabel 0->7, 1->5, 2->6.
        const std::vector<int> map = {7, 5, 6};
        std::vector<int> rp, rg;
        for (int v : p) rp.push_back(map[static_cast<std::size_t>(v)]);
        for (int v : g) rg.push_back(map[static_cast<std::size_t>(v)]);
        const auto r = compute_metrics(rp, rg);
        for (int c : m.classes) {
            const int rc = map[static_cast<std::size_t>(c)];
            CHECK(r.f1_of(rc) == m.f1_of(c));
            CHECK(r.precision[r.index_of(rc)] == m.precision[m.index_of(c)]);
        }
        CHECK(r.macro_f1 == doctest::Approx(m.macro_f1).epsilon(1e-12));
    }
}

TEST_CASE("table and json") {
    const std::vector<int> p = {0, 1, 1}, g = {0, 1, 0};
    const auto m = compute_metrics(p, g);
    const auto t = m.table({"text", "header"});
    CHECK(t.find("header") != std::string::npos);
    CHECK(t.find("macro avg") != std::string::npos);
    const auto j = m.to_json();
    CHECK(j.at("macro").at("f1") == m.macro_f1);
    CHECK(j.at("classes").size() == 2);
    CHECK_THROWS_AS(m.index_of(9), std::out_of_range);
}
