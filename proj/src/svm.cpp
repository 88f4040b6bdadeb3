#include "docstruct/classifiers/svm.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "docstruct/random.hpp"

namespace docstruct::classifiers {

double LinearSvmModel::decision(std::span<const double> x) const {
    if (x.size() != weights.size()) throw std::invalid_argument("svm: feature dimension mismatch");
    double s = bias;
    for (std::size_t i = 0; i < x.size(); ++i) s += weights[i] * x[i];
    return s;
}

double LinearSvmModel::weight_norm() const {
    return std::sqrt(std::inner_product(weights.begin(), weights.end(), weights.begin(), 0.0));
}

LinearSvmModel train_linear_svm(std::span<const Row> x, std::span<const int> y, const SvmOptions& options) {
    check_training_set(x, y, "train_linear_svm");
    bool has0 = false, has1 = false;
    for (int label : y) {
        if (label == 0)
            has0 = true;
        else if (label == 1)
            has1 = true;
        else
            throw std::invalid_argument("train_linear_svm: labels must be 0 or 1");
    }
    if (!has0 || !has1) throw std::invalid_argument("train_linear_svm: both classes must be present");

    const std::size_t d = x.front().size();
    LinearSvmModel m;
    m.weights.assign(d, 0.0);
    m.regularization = options.l2;

    Rng rng(options.seed);
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    double t = 0.0;
    for (int epoch = 0; epoch < options.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t i : order) {
            t += 1.0;
            const double eta = options.learning_rate / (1.0 + options.learning_rate * options.l2 * t);
            const double target = y[i] == 1 ? 1.0 : -1.0;
            const double margin = target * m.decision(x[i]);
            const double shrink = 1.0 - eta * options.l2;
            for (double& w : m.weights) w *= shrink;
            if (margin < 1.0) {
                for (std::size_t k = 0; k < d; ++k) m.weights[k] += eta * target * x[i][k];
                m.bias += eta * target;
            }
        }
    }
    return m;
}

nlohmann::json LinearSvmModel::to_json() const {
    return {{"format", "docstruct.model"}, {"version", 1},          {"type", "svm"},
            {"weights", weights},          {"bias", bias},          {"regularization", regularization}};
}

LinearSvmModel LinearSvmModel::from_json(const nlohmann::json& j) {
    if (j.at("type") != "svm") throw std::runtime_error("model document is not an svm");
    LinearSvmModel m;
    m.weights = j.at("weights").get<std::vector<double>>();
    m.bias = j.at("bias").get<double>();
    m.regularization = j.at("regularization").get<double>();
    return m;
}

}  // namespace docstruct::classifiers
