#include "docstruct/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "docstruct/csv.hpp"

namespace docstruct::ingest {

namespace {

struct FieldError {
    std::string field;
    std::string message;
};

std::optional<double> parse_double(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

// Field access over one input row, independent of the row's encoding.
class JsonRow {
public:
    explicit JsonRow(const nlohmann::json& obj) : obj_(obj) {}

    const nlohmann::json& require(const std::string& name) const {
        auto it = obj_.find(name);
        if (it == obj_.end() || it->is_null()) throw FieldError{name, "missing required field"};
        return *it;
    }
    std::string str(const std::string& name) const {
        const auto& v = require(name);
        if (!v.is_string()) throw FieldError{name, "expected a string"};
        return v.get<std::string>();
    }
    double number(const std::string& name) const {
        const auto& v = require(name);
        if (!v.is_number()) throw FieldError{name, "non-numeric value"};
        return v.get<double>();
    }
    long integer(const std::string& name) const {
        const auto& v = require(name);
        if (v.is_number_integer()) return v.get<long>();
        if (v.is_number_float()) {
            const double d = v.get<double>();
            if (std::floor(d) == d) return static_cast<long>(d);
        }
        throw FieldError{name, "expected an integer"};
    }
    bool boolean(const std::string& name) const {
        const auto& v = require(name);
        if (v.is_boolean()) return v.get<bool>();
        if (v.is_number_integer() && (v.get<long>() == 0 || v.get<long>() == 1)) return v.get<long>() == 1;
        throw FieldError{name, "expected a boolean"};
    }

private:
    const nlohmann::json& obj_;
};

class CsvRow {
public:
    CsvRow(const std::unordered_map<std::string, std::size_t>& columns, const std::vector<std::string>& fields)
        : columns_(columns), fields_(fields) {}

    const std::string& require(const std::string& name) const {
        auto it = columns_.find(name);
        if (it == columns_.end() || it->second >= fields_.size()) throw FieldError{name, "missing required field"};
        return fields_[it->second];
    }
    std::string str(const std::string& name) const { return require(name); }
    double number(const std::string& name) const {
        const auto& s = require(name);
        if (s.empty()) throw FieldError{name, "missing required field"};
        auto v = parse_double(s);
        if (!v) throw FieldError{name, "non-numeric value '" + s + "'"};
        return *v;
    }
    long integer(const std::string& name) const {
        const auto& s = require(name);
        long v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
            throw FieldError{name, "expected an integer, got '" + s + "'"};
        return v;
    }
    bool boolean(const std::string& name) const {
        const auto& s = require(name);
        if (s == "true" || s == "True" || s == "1") return true;
        if (s == "false" || s == "False" || s == "0") return false;
        throw FieldError{name, "expected a boolean, got '" + s + "'"};
    }

private:
    const std::unordered_map<std::string, std::size_t>& columns_;
    const std::vector<std::string>& fields_;
};

template <class Row>
LineRecord read_record(const Row& row) {
    LineRecord r;
    r.text = row.str("text");
    r.x_start = row.number("x_start");
    r.x_end = row.number("x_end");
    r.y_start = row.number("y_start");
    r.y_end = row.number("y_end");
    r.font_size = row.number("font_size");
    r.font_weight = row.number("font_weight");
    r.font_family = row.str("font_family");
    r.is_bold = row.boolean("is_bold");
    r.is_italic = row.boolean("is_italic");
    r.page_number = static_cast<int>(row.integer("page_number"));
    r.page_width = row.number("page_width");
    r.page_height = row.number("page_height");
    r.file_id = row.str("file_id");
    r.line_index = row.integer("line_index");

    if (r.x_start > r.x_end) throw FieldError{"x_end", "x_start exceeds x_end"};
    if (r.y_start > r.y_end) throw FieldError{"y_end", "y_start exceeds y_end"};
    if (!(r.font_size > 0.0)) throw FieldError{"font_size", "font_size must be positive"};
    if (r.page_number < 1) throw FieldError{"page_number", "page_number must be >= 1"};
    if (r.line_index < 0) throw FieldError{"line_index", "line_index must be >= 0"};
    return r;
}

struct PendingRecord {
    LineRecord record;
    std::size_t row;
};

ParseResult group_records(std::vector<PendingRecord> pending, std::vector<RecordError> errors) {
    ParseResult result;
    std::unordered_map<std::string, std::size_t> slot;
    std::vector<std::vector<PendingRecord>> groups;
    std::vector<std::string> order;
    for (auto& p : pending) {
        auto [it, inserted] = slot.emplace(p.record.file_id, groups.size());
        if (inserted) {
            groups.emplace_back();
            order.push_back(p.record.file_id);
        }
        groups[it->second].push_back(std::move(p));
    }
    for (std::size_t g = 0; g < groups.size(); ++g) {
        auto& group = groups[g];
        std::stable_sort(group.begin(), group.end(), [](const PendingRecord& a, const PendingRecord& b) {
            if (a.record.page_number != b.record.page_number) return a.record.page_number < b.record.page_number;
            return a.record.line_index < b.record.line_index;
        });
        Document doc{order[g], {}};
        for (std::size_t i = 0; i < group.size(); ++i) {
            if (i > 0 && group[i].record.line_index <= group[i - 1].record.line_index) {
                errors.push_back({group[i].row, "line_index",
                                  "line_index " + std::to_string(group[i].record.line_index) +
                                      " is not strictly increasing within file '" + doc.file_id + "'"});
                continue;
            }
            doc.lines.push_back(std::move(group[i].record));
        }
        result.documents.push_back(std::move(doc));
    }
    std::stable_sort(errors.begin(), errors.end(),
                     [](const RecordError& a, const RecordError& b) { return a.row < b.row; });
    result.errors = std::move(errors);
    return result;
}

ParseResult parse_jsonl(std::istream& in) {
    std::vector<PendingRecord> pending;
    std::vector<RecordError> errors;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            errors.push_back({row, "", std::string("invalid JSON: ") + e.what()});
            continue;
        }
        if (!obj.is_object()) {
            errors.push_back({row, "", "expected a JSON object"});
            continue;
        }
        try {
            pending.push_back({read_record(JsonRow(obj)), row});
        } catch (const FieldError& e) {
            errors.push_back({row, e.field, e.message});
        }
    }
    return group_records(std::move(pending), std::move(errors));
}

ParseResult parse_csv(std::istream& in) {
    std::vector<PendingRecord> pending;
    std::vector<RecordError> errors;
    std::vector<std::string> fields;
    std::size_t row = 0;
    std::size_t span = 0;
    std::unordered_map<std::string, std::size_t> columns;
    bool have_header = false;
    while (csv::read_row(in, fields, &span)) {
        const std::size_t first_row = row + 1;
        row += span;
        if (fields.size() == 1 && fields[0].empty()) continue;
        if (!have_header) {
            for (std::size_t i = 0; i < fields.size(); ++i) columns.emplace(fields[i], i);
            have_header = true;
            continue;
        }
        try {
            pending.push_back({read_record(CsvRow(columns, fields)), first_row});
        } catch (const FieldError& e) {
            errors.push_back({first_row, e.field, e.message});
        }
    }
    return group_records(std::move(pending), std::move(errors));
}

}  // namespace

LineLabel label_from_int(int value) {
    if (value < 0 || value > 3) throw std::invalid_argument("line label out of range: " + std::to_string(value));
    return static_cast<LineLabel>(value);
}

const std::vector<std::string>& line_record_fields() {
    static const std::vector<std::string> fields = {
        "text",     "x_start",   "x_end",       "y_start",     "y_end",   "font_size",  "font_weight", "font_family",
        "is_bold",  "is_italic", "page_number", "page_width",  "page_height", "file_id", "line_index"};
    return fields;
}

ParseResult parse_line_records(std::istream& in, RecordFormat format) {
    return format == RecordFormat::Jsonl ? parse_jsonl(in) : parse_csv(in);
}

std::string to_jsonl(const LineRecord& r) {
    nlohmann::ordered_json j;
    j["text"] = r.text;
    j["x_start"] = r.x_start;
    j["x_end"] = r.x_end;
    j["y_start"] = r.y_start;
    j["y_end"] = r.y_end;
    j["font_size"] = r.font_size;
    j["font_weight"] = r.font_weight;
    j["font_family"] = r.font_family;
    j["is_bold"] = r.is_bold;
    j["is_italic"] = r.is_italic;
    j["page_number"] = r.page_number;
    j["page_width"] = r.page_width;
    j["page_height"] = r.page_height;
    j["file_id"] = r.file_id;
    j["line_index"] = r.line_index;
    return j.dump();
}

void write_line_records_jsonl(std::ostream& out, std::span<const Document> docs) {
    for (const auto& doc : docs)
        for (const auto& r : doc.lines) out << to_jsonl(r) << '\n';
}

std::map<int, PageStats> page_statistics(std::span<const LineRecord> lines) {
    // Sums are kept as offsets from the page's first value so a constant
    // column averages back to that constant exactly.
    struct Acc {
        double size0 = 0, weight0 = 0;
        double font_size = 0, font_weight = 0, spacing = 0;
        std::size_t n = 0, gaps = 0;
        double last_y = 0;
    };
    std::map<int, Acc> acc;
    for (const auto& line : lines) {
        auto& a = acc[line.page_number];
        if (a.n == 0) {
            a.size0 = line.font_size;
            a.weight0 = line.font_weight;
        } else {
            a.spacing += std::abs(line.y_start - a.last_y);
            ++a.gaps;
        }
        a.font_size += line.font_size - a.size0;
        a.font_weight += line.font_weight - a.weight0;
        a.last_y = line.y_start;
        ++a.n;
    }
    std::map<int, PageStats> out;
    for (const auto& [page, a] : acc) {
        PageStats s;
        s.page_number = page;
        s.avg_font_size = a.size0 + a.font_size / static_cast<double>(a.n);
        s.avg_font_weight = a.weight0 + a.font_weight / static_cast<double>(a.n);
        s.avg_line_spacing = a.gaps ? a.spacing / static_cast<double>(a.gaps) : 0.0;
        out.emplace(page, s);
    }
    return out;
}

namespace {

struct Match {
    std::size_t a, b, size;
};

// Longest common substring of a[alo,ahi) and b[blo,bhi). Among equally long
// candidates the one starting earliest in a, then earliest in b, wins.
Match longest_match(std::string_view a, std::string_view b, std::size_t alo, std::size_t ahi, std::size_t blo,
                    std::size_t bhi) {
    Match best{alo, blo, 0};
    std::vector<std::size_t> prev(bhi - blo + 1, 0), cur(bhi - blo + 1, 0);
    for (std::size_t i = alo; i < ahi; ++i) {
        for (std::size_t j = blo; j < bhi; ++j) {
            const std::size_t col = j - blo + 1;
            if (a[i] == b[j]) {
                cur[col] = prev[col - 1] + 1;
                if (cur[col] > best.size) best = {i + 1 - cur[col], j + 1 - cur[col], cur[col]};
            } else {
                cur[col] = 0;
            }
        }
        std::swap(prev, cur);
    }
    return best;
}

std::size_t matched_characters(std::string_view a, std::string_view b) {
    std::size_t total = 0;
    struct Range {
        std::size_t alo, ahi, blo, bhi;
    };
    std::vector<Range> stack{{0, a.size(), 0, b.size()}};
    while (!stack.empty()) {
        const Range r = stack.back();
        stack.pop_back();
        if (r.alo >= r.ahi || r.blo >= r.bhi) continue;
        const Match m = longest_match(a, b, r.alo, r.ahi, r.blo, r.bhi);
        if (m.size == 0) continue;
        total += m.size;
        stack.push_back({r.alo, m.a, r.blo, m.b});
        stack.push_back({m.a + m.size, r.ahi, m.b + m.size, r.bhi});
    }
    return total;
}

}  // namespace

double similarity_ratio(std::string_view a, std::string_view b) {
    if (a.empty() && b.empty()) return 1.0;
    if (b < a) std::swap(a, b);
    const std::size_t m = matched_characters(a, b);
    return 2.0 * static_cast<double>(m) / static_cast<double>(a.size() + b.size());
}

std::vector<std::size_t> LabeledDocument::unmatched_entries() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < alignment.size(); ++i)
        if (!alignment[i]) out.push_back(i);
    return out;
}

LabeledDocument align_gold_toc(std::span<const LineRecord> doc, std::span<const TocEntry> toc, double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0)) throw std::invalid_argument("align threshold must lie in (0, 1]");
    LabeledDocument out;
    out.file_id = doc.empty() ? std::string() : doc.front().file_id;
    out.toc_entries.assign(toc.begin(), toc.end());
    out.lines.reserve(doc.size());
    for (const auto& r : doc) out.lines.push_back({r, LineLabel::RegularText});

    std::size_t cursor = 0;
    for (const auto& entry : toc) {
        std::optional<std::size_t> hit;
        for (std::size_t i = cursor; i < doc.size(); ++i) {
            if (similarity_ratio(entry.title, doc[i].text) >= threshold) {
                hit = i;
                break;
            }
        }
        out.alignment.push_back(hit);
        if (hit) {
            out.lines[*hit].label = label_from_int(entry.level);
            cursor = *hit + 1;
        }
    }
    return out;
}

const std::vector<std::string>& gold_csv_columns() {
    static const std::vector<std::string> columns = {
        "file_id",   "line_index", "text",  "font_size", "font_weight", "font_family", "is_bold",    "is_italic",
        "x_start",   "x_end",      "y_start", "y_end",   "page_number", "page_width",  "page_height", "label"};
    return columns;
}

std::vector<LabeledDocument> read_gold_csv(std::istream& in) {
    const auto& columns = gold_csv_columns();
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < columns.size(); ++i) index.emplace(columns[i], i);

    std::vector<std::string> fields;
    std::size_t row = 0;
    std::size_t span = 0;
    bool have_header = false;
    std::vector<LabeledDocument> docs;
    std::unordered_map<std::string, std::size_t> slot;
    while (csv::read_row(in, fields, &span)) {
        const std::size_t first_row = row + 1;
        row += span;
        if (fields.size() == 1 && fields[0].empty()) continue;
        if (!have_header) {
            if (fields != columns) throw std::runtime_error("gold csv: row 1: header does not match the gold column list");
            have_header = true;
            continue;
        }
        if (fields.size() != columns.size())
            throw std::runtime_error("gold csv: row " + std::to_string(first_row) + ": expected " +
                                     std::to_string(columns.size()) + " columns, got " +
                                     std::to_string(fields.size()));
        try {
            CsvRow csv_row(index, fields);
            LabeledLine line{read_record(csv_row), label_from_int(static_cast<int>(csv_row.integer("label")))};
            auto [it, inserted] = slot.emplace(line.record.file_id, docs.size());
            if (inserted) docs.push_back(LabeledDocument{line.record.file_id, {}, {}, {}});
            docs[it->second].lines.push_back(std::move(line));
        } catch (const FieldError& e) {
            throw std::runtime_error("gold csv: row " + std::to_string(first_row) + ": field '" + e.field +
                                     "': " + e.message);
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error("gold csv: row " + std::to_string(first_row) + ": field 'label': " + e.what());
        }
    }
    for (auto& doc : docs) {
        std::stable_sort(doc.lines.begin(), doc.lines.end(), [](const LabeledLine& a, const LabeledLine& b) {
            if (a.record.page_number != b.record.page_number) return a.record.page_number < b.record.page_number;
            return a.record.line_index < b.record.line_index;
        });
    }
    return docs;
}

std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw std::runtime_error("format_number: conversion failed");
    return std::string(buf, ptr);
}

void write_gold_csv(std::ostream& out, std::span<const LabeledDocument> docs) {
    csv::write_row(out, gold_csv_columns());
    for (const auto& doc : docs) {
        for (const auto& [r, label] : doc.lines) {
            csv::write_row(out, {r.file_id, std::to_string(r.line_index), r.text, format_number(r.font_size),
                                 format_number(r.font_weight), r.font_family, r.is_bold ? "true" : "false",
                                 r.is_italic ? "true" : "false", format_number(r.x_start), format_number(r.x_end),
                                 format_number(r.y_start), format_number(r.y_end), std::to_string(r.page_number),
                                 format_number(r.page_width), format_number(r.page_height),
                                 std::to_string(to_int(label))});
        }
    }
}

}  // namespace docstruct::ingest
