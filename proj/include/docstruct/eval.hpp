#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace docstruct::eval {

struct DocumentSplit {
    std::vector<std::string> train;
    std::vector<std::string> test;
};

/// Seeded shuffle of whole documents, cut at floor(fraction * N).
DocumentSplit train_test_split(std::span<const std::string> docs, double fraction, std::uint64_t seed);

double f1_score(double precision, double recall);
double macro_average(std::span<const double> values);

struct ClassMetrics {
    std::vector<int> classes;  // ascending, union of gold and predicted labels
    std::vector<double> precision;
    std::vector<double> recall;
    std::vector<double> f1;
    std::vector<std::size_t> support;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    double accuracy = 0.0;

    std::size_t index_of(int label) const;  // throws std::out_of_range
    double f1_of(int label) const { return f1[index_of(label)]; }

    std::string table(const std::vector<std::string>& class_names = {}) const;
    nlohmann::ordered_json to_json() const;
};

/// Per-class precision, recall and F1 with an unweighted macro average.
/// Undefined ratios (no predictions, no support) count as 0.
ClassMetrics compute_metrics(std::span<const int> predicted, std::span<const int> gold);

}  // namespace docstruct::eval
