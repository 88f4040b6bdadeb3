#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "docstruct/random.hpp"

namespace docstruct::classifiers {

using Row = std::vector<double>;

/// Downsamples every class in `classes` to the size of the smallest one.
/// Kept samples are chosen by a seeded shuffle per class and returned in
/// their original order. Throws std::invalid_argument naming any class with
/// no samples.
template <class Sample>
std::vector<std::pair<Sample, int>> balance_dataset(const std::vector<std::pair<Sample, int>>& samples,
                                                    std::span<const int> classes, std::uint64_t seed) {
    if (classes.empty()) throw std::invalid_argument("balance_dataset: no classes given");
    std::map<int, std::vector<std::size_t>> by_class;
    for (int c : classes) by_class[c];
    for (std::size_t i = 0; i < samples.size(); ++i) {
        auto it = by_class.find(samples[i].second);
        if (it != by_class.end()) it->second.push_back(i);
    }
    std::size_t target = samples.size();
    for (const auto& [c, idx] : by_class) {
        if (idx.empty()) throw std::invalid_argument("balance_dataset: class " + std::to_string(c) + " has no samples");
        target = std::min(target, idx.size());
    }
    Rng rng(seed);
    std::vector<std::size_t> keep;
    for (auto& [c, idx] : by_class) {
        rng.shuffle(idx);
        keep.insert(keep.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(target));
    }
    std::sort(keep.begin(), keep.end());
    std::vector<std::pair<Sample, int>> out;
    out.reserve(keep.size());
    for (std::size_t i : keep) out.push_back(samples[i]);
    return out;
}

/// Balances over the distinct labels present in `samples`.
template <class Sample>
std::vector<std::pair<Sample, int>> balance_dataset(const std::vector<std::pair<Sample, int>>& samples,
                                                    std::uint64_t seed) {
    std::vector<int> classes;
    for (const auto& s : samples) classes.push_back(s.second);
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    return balance_dataset(samples, std::span<const int>(classes), seed);
}

inline void check_training_set(std::span<const Row> x, std::span<const int> y, const char* who) {
    if (x.empty()) throw std::invalid_argument(std::string(who) + ": empty training set");
    if (x.size() != y.size()) throw std::invalid_argument(std::string(who) + ": feature and label counts differ");
    const std::size_t d = x.front().size();
    for (const auto& row : x)
        if (row.size() != d) throw std::invalid_argument(std::string(who) + ": ragged feature rows");
}

}  // namespace docstruct::classifiers
