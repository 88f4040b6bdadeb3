#pragma once

#include <span>
#include <vector>

#include <json.hpp>

#include "docstruct/classifiers/dataset.hpp"

namespace docstruct::classifiers {

struct NaiveBayesModel {
    std::vector<double> class_log_priors;
    std::vector<std::vector<double>> feature_log_likelihoods;  // [class][feature]
    double smoothing = 1.0;

    std::size_t n_classes() const { return class_log_priors.size(); }
    std::size_t n_features() const {
        return feature_log_likelihoods.empty() ? 0 : feature_log_likelihoods.front().size();
    }

    // log P(c) + sum_j x_j log P(f_j | c), per class.
    std::vector<double> joint_log_likelihood(std::span<const double> x) const;
    std::vector<double> posterior(std::span<const double> x) const;
    int predict(std::span<const double> x) const;

    nlohmann::json to_json() const;
    static NaiveBayesModel from_json(const nlohmann::json& j);
};

/// Multinomial Naive Bayes with additive smoothing. Labels are 0..C-1 and
/// every class must occur; feature values must be non-negative.
NaiveBayesModel train_naive_bayes(std::span<const Row> x, std::span<const int> y, double smoothing = 1.0);

}  // namespace docstruct::classifiers
