#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace docstruct::ingest {

enum class LineLabel : int {
    RegularText = 0,
    TopLevelHeader = 1,
    SubsectionHeader = 2,
    SubSubsectionHeader = 3,
};

/// Throws std::invalid_argument for values outside 0..3.
LineLabel label_from_int(int value);
inline int to_int(LineLabel l) { return static_cast<int>(l); }

/// One physical text line with its layout metadata. Coordinates, font size
/// and page dimensions are in points.
struct LineRecord {
    std::string text;
    double x_start = 0.0;
    double x_end = 0.0;
    double y_start = 0.0;
    double y_end = 0.0;
    double font_size = 0.0;
    double font_weight = 0.0;
    std::string font_family;
    bool is_bold = false;
    bool is_italic = false;
    int page_number = 1;
    double page_width = 0.0;
    double page_height = 0.0;
    std::string file_id;
    long line_index = 0;

    bool operator==(const LineRecord&) const = default;
};

struct Document {
    std::string file_id;
    std::vector<LineRecord> lines;  // sorted by (page_number, line_index)
};

struct RecordError {
    std::size_t row = 0;  // 1-based physical row in the input stream
    std::string field;    // empty when the whole row is unreadable
    std::string message;
};

struct ParseResult {
    std::vector<Document> documents;  // in order of first appearance
    std::vector<RecordError> errors;
};

enum class RecordFormat { Jsonl, Csv };

/// Field names of the JSONL interchange schema, in canonical order.
const std::vector<std::string>& line_record_fields();

/// Reads line records. Malformed rows are skipped and reported in
/// ParseResult::errors; well-formed rows are grouped per file_id. CSV input
/// needs a header row naming the fields; extra columns are ignored.
ParseResult parse_line_records(std::istream& in, RecordFormat format);

std::string to_jsonl(const LineRecord& r);
void write_line_records_jsonl(std::ostream& out, std::span<const Document> docs);

struct PageStats {
    int page_number = 0;
    double avg_font_size = 0.0;
    double avg_font_weight = 0.0;
    double avg_line_spacing = 0.0;
};

/// Per-page averages. Line spacing is the mean absolute gap between the
/// y_start values of successive lines on the same page, 0 for a lone line.
std::map<int, PageStats> page_statistics(std::span<const LineRecord> lines);

/// Gestalt pattern-matching ratio 2M/(|a|+|b|). M is the total size of the
/// matching blocks found by recursively taking the longest common substring
/// and recursing on both sides. Arguments are put in canonical order first
/// so the result is symmetric. Two empty strings give 1.0.
double similarity_ratio(std::string_view a, std::string_view b);

struct TocEntry {
    std::string title;
    int level = 1;  // 1..3

    bool operator==(const TocEntry&) const = default;
};

struct LabeledLine {
    LineRecord record;
    LineLabel label = LineLabel::RegularText;
};

struct LabeledDocument {
    std::string file_id;
    std::vector<LabeledLine> lines;
    std::vector<TocEntry> toc_entries;
    // alignment[i] is the line matched to toc_entries[i], if any.
    std::vector<std::optional<std::size_t>> alignment;

    std::vector<std::size_t> unmatched_entries() const;
};

inline constexpr double kDefaultAlignThreshold = 0.85;

/// Labels lines from a gold table of contents. Entries are taken in order;
/// each one claims the first line after the previous match whose similarity
/// to the title reaches `threshold`. Unclaimed lines are regular text.
LabeledDocument align_gold_toc(std::span<const LineRecord> doc, std::span<const TocEntry> toc,
                               double threshold = kDefaultAlignThreshold);

/// Gold CSV columns, exact order.
const std::vector<std::string>& gold_csv_columns();

/// Throws std::runtime_error naming the row on malformed input.
std::vector<LabeledDocument> read_gold_csv(std::istream& in);
void write_gold_csv(std::ostream& out, std::span<const LabeledDocument> docs);

// Shortest representation that parses back to the same double.
std::string format_number(double v);

}  // namespace docstruct::ingest
