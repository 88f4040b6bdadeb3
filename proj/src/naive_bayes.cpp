#include "docstruct/classifiers/naive_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace docstruct::classifiers {

NaiveBayesModel train_naive_bayes(std::span<const Row> x, std::span<const int> y, double smoothing) {
    check_training_set(x, y, "train_naive_bayes");
    if (!(smoothing > 0.0)) throw std::invalid_argument("train_naive_bayes: smoothing must be positive");
    int max_label = 0;
    for (int label : y) {
        if (label < 0) throw std::invalid_argument("train_naive_bayes: negative label");
        max_label = std::max(max_label, label);
    }
    const std::size_t n_classes = static_cast<std::size_t>(max_label) + 1;
    const std::size_t d = x.front().size();

    std::vector<double> class_count(n_classes, 0.0);
    std::vector<std::vector<double>> feature_sum(n_classes, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto c = static_cast<std::size_t>(y[i]);
        class_count[c] += 1.0;
        for (std::size_t j = 0; j < d; ++j) {
            if (x[i][j] < 0.0)
                throw std::invalid_argument("train_naive_bayes: negative feature value at row " + std::to_string(i) +
                                            ", column " + std::to_string(j));
            feature_sum[c][j] += x[i][j];
        }
    }

    NaiveBayesModel m;
    m.smoothing = smoothing;
    const double n = static_cast<double>(x.size());
    for (std::size_t c = 0; c < n_classes; ++c) {
        if (class_count[c] == 0.0)
            throw std::invalid_argument("train_naive_bayes: class " + std::to_string(c) + " has no samples");
        m.class_log_priors.push_back(std::log(class_count[c] / n));
        double total = 0.0;
        for (double v : feature_sum[c]) total += v;
        const double denom = total + smoothing * static_cast<double>(d);
        std::vector<double> ll(d);
        for (std::size_t j = 0; j < d; ++j) ll[j] = std::log((feature_sum[c][j] + smoothing) / denom);
        m.feature_log_likelihoods.push_back(std::move(ll));
    }
    return m;
}

std::vector<double> NaiveBayesModel::joint_log_likelihood(std::span<const double> x) const {
    if (x.size() != n_features()) throw std::invalid_argument("naive bayes: feature dimension mismatch");
    std::vector<double> out(class_log_priors);
    for (std::size_t c = 0; c < out.size(); ++c)
        for (std::size_t j = 0; j < x.size(); ++j)
            if (x[j] != 0.0) out[c] += x[j] * feature_log_likelihoods[c][j];
    return out;
}

std::vector<double> NaiveBayesModel::posterior(std::span<const double> x) const {
    auto jll = joint_log_likelihood(x);
    const double top = *std::max_element(jll.begin(), jll.end());
    double z = 0.0;
    for (double& v : jll) {
        v = std::exp(v - top);
        z += v;
    }
    for (double& v : jll) v /= z;
    return jll;
}

int NaiveBayesModel::predict(std::span<const double> x) const {
    const auto jll = joint_log_likelihood(x);
    return static_cast<int>(std::max_element(jll.begin(), jll.end()) - jll.begin());
}

nlohmann::json NaiveBayesModel::to_json() const {
    return {{"format", "docstruct.model"},
            {"version", 1},
            {"type", "nb"},
            {"smoothing", smoothing},
            {"class_log_priors", class_log_priors},
            {"feature_log_likelihoods", feature_log_likelihoods}};
}

NaiveBayesModel NaiveBayesModel::from_json(const nlohmann::json& j) {
    if (j.at("type") != "nb") throw std::runtime_error("model document is not a naive bayes model");
    NaiveBayesModel m;
    m.smoothing = j.at("smoothing").get<double>();
    m.class_log_priors = j.at("class_log_priors").get<std::vector<double>>();
    m.feature_log_likelihoods = j.at("feature_log_likelihoods").get<std::vector<std::vector<double>>>();
    if (m.feature_log_likelihoods.size() != m.class_log_priors.size())
        throw std::runtime_error("naive bayes: class count mismatch");
    return m;
}

}  // namespace docstruct::classifiers
