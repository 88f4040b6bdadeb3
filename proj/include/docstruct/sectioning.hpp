#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "docstruct/classifiers/rnn.hpp"
#include "docstruct/ingest.hpp"

namespace docstruct::sectioning {

using ingest::LineLabel;

enum class SplitLevel : int { TopLevel = 1, Subsection = 2, SubSubsection = 3 };

SplitLevel split_level_from_string(std::string_view s);  // top_level | subsection | sub_subsection
const char* to_string(SplitLevel level);

struct SectionNode {
    std::string title;
    std::optional<std::size_t> title_line;  // position of the header line; empty for the preamble
    std::vector<std::string> text;          // body lines up to the first child header
    std::vector<SectionNode> subsections;
    int level = 1;

    bool untitled() const { return !title_line.has_value(); }
    bool operator==(const SectionNode&) const = default;
};

struct TocEntry {
    std::string title;
    int level = 1;
    std::size_t line_index = 0;

    bool operator==(const TocEntry&) const = default;
};

struct Toc {
    std::vector<TocEntry> entries;

    /// One title per line, indented two spaces per level below the top.
    std::string render() const;
};

/// Section level (1..3) of each header line: argmax of a three-class
/// text-mode network.
std::vector<int> classify_section_levels(std::span<const std::string> headers, const classifiers::RnnModel& model);

struct LevelAssignment {
    std::size_t line_index = 0;
    int level = 1;

    bool operator==(const LevelAssignment&) const = default;
};

/// Forces a valid header walk: the first header is top level, and a header
/// may open at most one level below the deepest open one. Deeper jumps are
/// demoted to that bound; returning to any open level is always allowed.
std::vector<LevelAssignment> repair_level_sequence(std::span<const LevelAssignment> levels);

/// True iff the sequence starts at 1, stays within 1..3 and never deepens by
/// more than one level per header.
bool is_valid_level_sequence(std::span<const int> levels);

struct LabeledText {
    std::string text;
    LineLabel label = LineLabel::RegularText;
};

/// Splits a labelled line stream into a section tree down to `split_level`.
/// Lines before the first top-level header become an untitled preamble
/// node; a stream without top-level headers yields one untitled node.
/// Header labels deeper than `split_level` stay as body text.
std::vector<SectionNode> split_document(std::span<const LabeledText> lines, SplitLevel split_level = SplitLevel::TopLevel);

/// Pre-order flattening of titled nodes.
Toc build_toc(std::span<const SectionNode> tree);

/// Titles and body lines in document order. Inverse of split_document.
std::vector<std::string> flatten_lines(std::span<const SectionNode> tree);

std::size_t tree_depth(std::span<const SectionNode> tree);

/// {"title", "text", "subsections"} per node.
nlohmann::ordered_json to_json(std::span<const SectionNode> tree);

}  // namespace docstruct::sectioning
