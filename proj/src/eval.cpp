#include "docstruct/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "docstruct/random.hpp"

namespace docstruct::eval {

DocumentSplit train_test_split(std::span<const std::string> docs, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0)) throw std::invalid_argument("train_test_split: fraction must lie in (0, 1)");
    if (docs.size() < 2) throw std::invalid_argument("train_test_split: need at least 2 documents");
    std::vector<std::string> shuffled(docs.begin(), docs.end());
    Rng rng(seed);
    rng.shuffle(shuffled);
    const auto cut = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(docs.size()) + 1e-9));
    DocumentSplit s;
    s.train.assign(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(cut));
    s.test.assign(shuffled.begin() + static_cast<std::ptrdiff_t>(cut), shuffled.end());
    return s;
}

double f1_score(double precision, double recall) {
    return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

double macro_average(std::span<const double> values) {
    if (values.empty()) return 0.0;
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

ClassMetrics compute_metrics(std::span<const int> predicted, std::span<const int> gold) {
    if (predicted.size() != gold.size()) throw std::invalid_argument("compute_metrics: length mismatch");
    if (gold.empty()) throw std::invalid_argument("compute_metrics: empty input");
    std::set<int> labels(gold.begin(), gold.end());
    labels.insert(predicted.begin(), predicted.end());

    ClassMetrics m;
    m.classes.assign(labels.begin(), labels.end());
    std::size_t correct = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) correct += predicted[i] == gold[i];
    m.accuracy = static_cast<double>(correct) / static_cast<double>(gold.size());
    for (int c : m.classes) {
        std::size_t tp = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < gold.size(); ++i) {
            const bool p = predicted[i] == c, g = gold[i] == c;
            tp += p && g;
            fp += p && !g;
            fn += !p && g;
        }
        const double precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
        const double recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
        m.precision.push_back(precision);
        m.recall.push_back(recall);
        m.f1.push_back(f1_score(precision, recall));
        m.support.push_back(tp + fn);
    }
    m.macro_precision = macro_average(m.precision);
    m.macro_recall = macro_average(m.recall);
    m.macro_f1 = macro_average(m.f1);
    return m;
}

std::size_t ClassMetrics::index_of(int label) const {
    auto it = std::find(classes.begin(), classes.end(), label);
    if (it == classes.end()) throw std::out_of_range("no metrics for class " + std::to_string(label));
    return static_cast<std::size_t>(it - classes.begin());
}

std::string ClassMetrics::table(const std::vector<std::string>& class_names) const {
    std::ostringstream out;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-24s %9s %9s %9s %9s\n", "class", "precision", "recall", "f1", "support");
    out << buf;
    for (std::size_t i = 0; i < classes.size(); ++i) {
        const auto c = static_cast<std::size_t>(classes[i]);
        const std::string name = c < class_names.size() ? class_names[c] : std::to_string(classes[i]);
        std::snprintf(buf, sizeof(buf), "%-24s %9.4f %9.4f %9.4f %9zu\n", name.c_str(), precision[i], recall[i],
                      f1[i], support[i]);
        out << buf;
    }
    std::size_t total = std::accumulate(support.begin(), support.end(), std::size_t{0});
    std::snprintf(buf, sizeof(buf), "%-24s %9.4f %9.4f %9.4f %9zu\n", "macro avg", macro_precision, macro_recall,
                  macro_f1, total);
    out << buf;
    std::snprintf(buf, sizeof(buf), "%-24s %9.4f\n", "accuracy", accuracy);
    out << buf;
    return out.str();
}

nlohmann::ordered_json ClassMetrics::to_json() const {
    nlohmann::ordered_json per_class = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < classes.size(); ++i)
        per_class.push_back({{"class", classes[i]},
                             {"precision", precision[i]},
                             {"recall", recall[i]},
                             {"f1", f1[i]},
                             {"support", support[i]}});
    return {{"classes", per_class},
            {"macro", {{"precision", macro_precision}, {"recall", macro_recall}, {"f1", macro_f1}}},
            {"accuracy", accuracy}};
}

}  // namespace docstruct::eval
