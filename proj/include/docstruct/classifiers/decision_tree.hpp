#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <json.hpp>

#include "docstruct/classifiers/dataset.hpp"

namespace docstruct::classifiers {

/// Sum of squared class fractions of a two-class node. Higher is purer;
/// the value lies in [0.5, 1]. Throws std::invalid_argument unless the
/// fractions are non-negative and sum to 1 within 1e-12.
double gini_index(double p1, double p2);

struct TreeNode {
    int feature = -1;  // -1 for leaves
    double threshold = 0.0;
    int left = -1;  // x[feature] <= threshold
    int right = -1;
    std::vector<std::size_t> class_counts;
    int prediction = 0;

    bool is_leaf() const { return feature < 0; }
};

struct DecisionTreeModel {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    std::size_t n_features = 0;
    std::size_t n_classes = 0;

    int predict(std::span<const double> x) const;
    std::size_t leaf_index(std::span<const double> x) const;
    std::size_t depth() const;

    nlohmann::json to_json() const;
    static DecisionTreeModel from_json(const nlohmann::json& j);
};

struct TreeOptions {
    std::size_t max_depth = 32;
    std::size_t min_leaf = 1;
};

/// Greedy binary CART. Each split maximises the size-weighted sum of the
/// children's squared-fraction purity; candidate thresholds are midpoints
/// between consecutive distinct feature values. Ties go to the lowest
/// feature index, then the lowest threshold. Labels are 0..C-1.
DecisionTreeModel train_decision_tree(std::span<const Row> x, std::span<const int> y, const TreeOptions& options = {});

}  // namespace docstruct::classifiers
