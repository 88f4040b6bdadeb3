#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace docstruct::csv {

// Reads one RFC 4180 record. Quoted fields may contain separators, doubled
// quotes and newlines. Returns false at end of stream. `physical_lines`
// receives the number of input lines the record spanned.
bool read_row(std::istream& in, std::vector<std::string>& fields, std::size_t* physical_lines = nullptr);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

std::string quote(std::string_view field);

}  // namespace docstruct::csv
