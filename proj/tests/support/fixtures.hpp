#pragma once

#include <string>
#include <vector>

#include "docstruct/ingest.hpp"
#include "docstruct/random.hpp"

namespace fixtures {

inline docstruct::ingest::LineRecord line(std::string text, double y, double font = 10.0, bool bold = false,
                                          int page = 1, long index = 0, std::string file = "doc") {
    docstruct::ingest::LineRecord r;
    r.text = std::move(text);
    r.x_start = 72.0;
    r.x_end = 72.0 + 6.0 * static_cast<double>(r.text.size());
    r.y_start = y;
    r.y_end = y + font;
    r.font_size = font;
    r.font_weight = bold ? 700.0 : 400.0;
    r.font_family = bold ? "Times-Bold" : "Times-Roman";
    r.is_bold = bold;
    r.page_number = page;
    r.page_width = 612.0;
    r.page_height = 792.0;
    r.file_id = std::move(file);
    r.line_index = index;
    return r;
}

inline std::string random_string(docstruct::Rng& rng, const std::string& alphabet, std::size_t max_len) {
    const std::size_t n = rng.index(max_len + 1);
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s += alphabet[rng.index(alphabet.size())];
    return s;
}

inline std::vector<int> random_levels(docstruct::Rng& rng, std::size_t n, int lo, int hi) {
    std::vector<int> v(n);
    for (auto& x : v) x = lo + static_cast<int>(rng.index(static_cast<std::size_t>(hi - lo + 1)));
    return v;
}

}  // namespace fixtures
