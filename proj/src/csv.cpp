#include "docstruct/csv.hpp"

#include <stdexcept>

namespace docstruct::csv {

bool read_row(std::istream& in, std::vector<std::string>& fields, std::size_t* physical_lines) {
    fields.clear();
    std::size_t lines = 0;
    std::string line;
    if (!std::getline(in, line)) return false;
    ++lines;

    std::string field;
    bool in_quotes = false;
    for (;;) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            const char c = line[i];
            if (in_quotes) {
                if (c == '"') {
                    if (i + 1 < line.size() && line[i + 1] == '"') {
                        field += '"';
                        ++i;
                    } else {
                        in_quotes = false;
                    }
                } else {
                    field += c;
                }
            } else if (c == '"') {
                in_quotes = true;
            } else if (c == ',') {
                fields.push_back(std::move(field));
                field.clear();
            } else if (c == '\r' && i + 1 == line.size()) {
                // CRLF line ending
            } else {
                field += c;
            }
        }
        if (!in_quotes) break;
        if (!std::getline(in, line)) throw std::runtime_error("csv: unterminated quoted field");
        ++lines;
        field += '\n';
    }
    fields.push_back(std::move(field));
    if (physical_lines) *physical_lines = lines;
    return true;
}

std::string quote(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << quote(fields[i]);
    }
    out << '\n';
}

}  // namespace docstruct::csv
