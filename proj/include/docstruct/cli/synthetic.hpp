#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "docstruct/ingest.hpp"

namespace docstruct::cli {

struct GeneratorConfig {
    std::size_t documents = 20;
    std::size_t sections = 5;          // top-level sections per document
    std::size_t subsections = 2;       // per top-level section
    std::size_t subsubsections = 1;    // per subsection
    std::size_t topics = 2;            // disjoint body-word pools
    std::size_t min_body_lines = 3;
    std::size_t max_body_lines = 6;
    std::uint64_t seed = 0;
};

struct PlannedSection {
    std::string title;
    int level = 1;
    std::size_t topic = 0;  // pool the section's body words come from

    bool operator==(const PlannedSection&) const = default;
};

struct DocumentPlan {
    std::string file_id;
    std::vector<PlannedSection> sections;  // document order
};

struct SyntheticCorpus {
    std::vector<ingest::LabeledDocument> documents;
    std::vector<DocumentPlan> plans;
    std::vector<std::vector<std::string>> topic_pools;

    nlohmann::ordered_json plan_json(std::uint64_t seed) const;
};

/// Body words of topic `t`; pools of different topics are disjoint.
std::vector<std::string> topic_pool(std::size_t t);

/// Documents whose headers are numbered, bold, larger and set off by extra
/// space, with body lines drawn from per-section topic pools. Gold labels
/// are exact by construction. Throws std::invalid_argument for a request
/// with zero sections, documents or topics.
SyntheticCorpus generate_synthetic(const GeneratorConfig& config);

}  // namespace docstruct::cli
