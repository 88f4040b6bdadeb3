#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "docstruct/classifiers/dataset.hpp"

namespace docstruct::classifiers {

struct SvmOptions {
    int epochs = 20;
    double learning_rate = 0.1;
    double l2 = 1e-4;
    std::uint64_t seed = 0;
};

/// Binary linear classifier: class 1 iff w.x + b > 0.
struct LinearSvmModel {
    std::vector<double> weights;
    double bias = 0.0;
    double regularization = 0.0;

    double decision(std::span<const double> x) const;
    int predict(std::span<const double> x) const { return decision(x) > 0.0 ? 1 : 0; }
    double weight_norm() const;

    nlohmann::json to_json() const;
    static LinearSvmModel from_json(const nlohmann::json& j);
};

/// L2-regularised hinge loss minimised by seeded stochastic subgradient
/// descent with step lr / (1 + lr * l2 * t). Labels must be 0/1 with both
/// present.
LinearSvmModel train_linear_svm(std::span<const Row> x, std::span<const int> y, const SvmOptions& options);

}  // namespace docstruct::classifiers
