#include "docstruct/classifiers/decision_tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace docstruct::classifiers {

double gini_index(double p1, double p2) {
    if (p1 < 0.0 || p2 < 0.0) throw std::invalid_argument("gini_index: fractions must be non-negative");
    if (std::abs(p1 + p2 - 1.0) > 1e-12) throw std::invalid_argument("gini_index: fractions must sum to 1");
    return p1 * p1 + p2 * p2;
}

namespace {

using u128 = unsigned __int128;

// Exact rational split score: sum_c L_c^2 / nL + sum_c R_c^2 / nR.
struct Score {
    u128 num = 0;
    u128 den = 1;

    bool better_than(const Score& o) const { return num * o.den > o.num * den; }
};

Score split_score(const std::vector<std::size_t>& left, std::size_t n_left, const std::vector<std::size_t>& right,
                  std::size_t n_right) {
    u128 a = 0, b = 0;
    for (std::size_t c : left) a += static_cast<u128>(c) * c;
    for (std::size_t c : right) b += static_cast<u128>(c) * c;
    return {a * n_right + b * n_left, static_cast<u128>(n_left) * n_right};
}

int majority(const std::vector<std::size_t>& counts) {
    return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

class Builder {
public:
    Builder(std::span<const Row> x, std::span<const int> y, const TreeOptions& options, std::size_t n_classes)
        : x_(x), y_(y), options_(options), n_classes_(n_classes) {}

    int build(std::vector<std::size_t> idx, std::size_t depth, std::vector<TreeNode>& nodes) {
        TreeNode node;
        node.class_counts.assign(n_classes_, 0);
        for (std::size_t i : idx) ++node.class_counts[static_cast<std::size_t>(y_[i])];
        node.prediction = majority(node.class_counts);
        const bool pure = static_cast<std::size_t>(
                              std::count_if(node.class_counts.begin(), node.class_counts.end(),
                                            [](std::size_t c) { return c > 0; })) <= 1;

        const int id = static_cast<int>(nodes.size());
        nodes.push_back(node);
        if (pure || depth >= options_.max_depth || idx.size() < 2 * options_.min_leaf) return id;

        const std::size_t d = x_.front().size();
        bool found = false;
        Score best;
        std::size_t best_feature = 0;
        double best_threshold = 0.0;
        std::vector<std::size_t> order = idx;
        for (std::size_t f = 0; f < d; ++f) {
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return x_[a][f] < x_[b][f]; });
            std::vector<std::size_t> left(n_classes_, 0), right = node.class_counts;
            for (std::size_t k = 0; k + 1 < order.size(); ++k) {
                const auto c = static_cast<std::size_t>(y_[order[k]]);
                ++left[c];
                --right[c];
                const double lo = x_[order[k]][f];
                const double hi = x_[order[k + 1]][f];
                if (!(lo < hi)) continue;
                const std::size_t n_left = k + 1;
                const std::size_t n_right = order.size() - n_left;
                if (n_left < options_.min_leaf || n_right < options_.min_leaf) continue;
                const Score s = split_score(left, n_left, right, n_right);
                if (!found || s.better_than(best)) {
                    double mid = lo + (hi - lo) / 2.0;
                    if (!(mid < hi)) mid = lo;
                    found = true;
                    best = s;
                    best_feature = f;
                    best_threshold = mid;
                }
            }
        }
        if (!found) return id;

        std::vector<std::size_t> left_idx, right_idx;
        for (std::size_t i : idx) (x_[i][best_feature] <= best_threshold ? left_idx : right_idx).push_back(i);
        const int l = build(std::move(left_idx), depth + 1, nodes);
        const int r = build(std::move(right_idx), depth + 1, nodes);
        nodes[static_cast<std::size_t>(id)].feature = static_cast<int>(best_feature);
        nodes[static_cast<std::size_t>(id)].threshold = best_threshold;
        nodes[static_cast<std::size_t>(id)].left = l;
        nodes[static_cast<std::size_t>(id)].right = r;
        return id;
    }

private:
    std::span<const Row> x_;
    std::span<const int> y_;
    TreeOptions options_;
    std::size_t n_classes_;
};

}  // namespace

DecisionTreeModel train_decision_tree(std::span<const Row> x, std::span<const int> y, const TreeOptions& options) {
    check_training_set(x, y, "train_decision_tree");
    if (options.min_leaf < 1) throw std::invalid_argument("train_decision_tree: min_leaf must be >= 1");
    int max_label = 0;
    for (int label : y) {
        if (label < 0) throw std::invalid_argument("train_decision_tree: negative label");
        max_label = std::max(max_label, label);
    }
    DecisionTreeModel m;
    m.n_features = x.front().size();
    m.n_classes = static_cast<std::size_t>(max_label) + 1;
    std::vector<std::size_t> idx(x.size());
    std::iota(idx.begin(), idx.end(), 0);
    Builder(x, y, options, m.n_classes).build(std::move(idx), 0, m.nodes);
    return m;
}

std::size_t DecisionTreeModel::leaf_index(std::span<const double> x) const {
    if (x.size() != n_features) throw std::invalid_argument("decision tree: feature dimension mismatch");
    std::size_t i = 0;
    while (!nodes[i].is_leaf()) {
        const auto& n = nodes[i];
        i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
    }
    return i;
}

int DecisionTreeModel::predict(std::span<const double> x) const { return nodes[leaf_index(x)].prediction; }

std::size_t DecisionTreeModel::depth() const {
    std::vector<std::size_t> level(nodes.size(), 0);
    std::size_t deepest = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        deepest = std::max(deepest, level[i]);
        if (!nodes[i].is_leaf()) {
            level[static_cast<std::size_t>(nodes[i].left)] = level[i] + 1;
            level[static_cast<std::size_t>(nodes[i].right)] = level[i] + 1;
        }
    }
    return deepest;
}

nlohmann::json DecisionTreeModel::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& n : nodes) {
        arr.push_back({{"feature", n.feature},
                       {"threshold", n.threshold},
                       {"left", n.left},
                       {"right", n.right},
                       {"class_counts", n.class_counts},
                       {"prediction", n.prediction}});
    }
    return {{"format", "docstruct.model"}, {"version", 1},           {"type", "dt"},
            {"n_features", n_features},    {"n_classes", n_classes}, {"nodes", arr}};
}

DecisionTreeModel DecisionTreeModel::from_json(const nlohmann::json& j) {
    if (j.at("type") != "dt") throw std::runtime_error("model document is not a decision tree");
    DecisionTreeModel m;
    m.n_features = j.at("n_features").get<std::size_t>();
    m.n_classes = j.at("n_classes").get<std::size_t>();
    for (const auto& n : j.at("nodes")) {
        TreeNode t;
        t.feature = n.at("feature").get<int>();
        t.threshold = n.at("threshold").get<double>();
        t.left = n.at("left").get<int>();
        t.right = n.at("right").get<int>();
        t.class_counts = n.at("class_counts").get<std::vector<std::size_t>>();
        t.prediction = n.at("prediction").get<int>();
        m.nodes.push_back(std::move(t));
    }
    if (m.nodes.empty()) throw std::runtime_error("decision tree has no nodes");
    return m;
}

}  // namespace docstruct::classifiers
