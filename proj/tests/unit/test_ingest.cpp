#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "docstruct/ingest.hpp"
#include "fixtures.hpp"

using namespace docstruct;
using namespace docstruct::ingest;

namespace {

// Independent matching-block count: longest common substring, earliest in a
// then earliest in b, recursing on both sides.
std::size_t matched_chars(const std::string& a, const std::string& b) {
    if (a.empty() || b.empty()) return 0;
    std::size_t best = 0, bi = 0, bj = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) {
            std::size_t k = 0;
            while (i + k < a.size() && j + k < b.size() && a[i + k] == b[j + k]) ++k;
            if (k > best) best = k, bi = i, bj = j;
        }
    if (best == 0) return 0;
    return best + matched_chars(a.substr(0, bi), b.substr(0, bj)) +
           matched_chars(a.substr(bi + best), b.substr(bj + best));
}

double oracle_ratio(std::string a, std::string b) {
    if (a.empty() && b.empty()) return 1.0;
    if (b < a) std::swap(a, b);
    return 2.0 * static_cast<double>(matched_chars(a, b)) / static_cast<double>(a.size() + b.size());
}

std::string jsonl_row(const std::string& text, const std::string& file, long index, int page = 1) {
    std::ostringstream s;
    s << R"({"text":")" << text << R"(","x_start":72,"x_end":200,"y_start":)" << 100 + index * 12
      << R"(,"y_end":)" << 110 + index * 12
      << R"(,"font_size":10,"font_weight":400,"font_family":"Times","is_bold":false,"is_italic":false,"page_number":)"
      << page << R"(,"page_width":612,"page_height":792,"file_id":")" << file << R"(","line_index":)" << index << "}";
    return s.str();
}

}  // namespace

TEST_CASE("parse a single JSONL record") {
    std::istringstream in(jsonl_row("1 Introduction", "a", 0) + "\n");
    const auto r = parse_line_records(in, RecordFormat::Jsonl);
    REQUIRE(r.errors.empty());
    REQUIRE(r.documents.size() == 1);
    REQUIRE(r.documents[0].lines.size() == 1);
    CHECK(r.documents[0].lines[0].text == "1 Introduction");
    CHECK(r.documents[0].lines[0].font_size == 10.0);
}

TEST_CASE("missing field is reported with name and row") {
    std::string row = jsonl_row("x", "a", 0);
    const auto pos = row.find("\"font_size\":10,");
    row.erase(pos, std::string("\"font_size\":10,").size());
    std::istringstream in(jsonl_row("ok", "a", 0) + "\n" + row + "\n");
    const auto r = parse_line_records(in, RecordFormat::Jsonl);
    REQUIRE(r.errors.size() == 1);
    CHECK(r.errors[0].field == "font_size");
    CHECK(r.errors[0].row == 2);
}

TEST_CASE("non-numeric coordinate is a record error") {
    std::string row = jsonl_row("x", "a", 0);
    const auto pos = row.find("\"x_start\":72");
    row.replace(pos, 12, "\"x_start\":\"left\"");
    std::istringstream in(row + "\n");
    const auto r = parse_line_records(in, RecordFormat::Jsonl);
    REQUIRE(r.errors.size() == 1);
    CHECK(r.errors[0].field == "x_start");
}

TEST_CASE("empty stream gives an empty result") {
    std::istringstream in("");
    const auto r = parse_line_records(in, RecordFormat::Jsonl);
    CHECK(r.documents.empty());
    CHECK(r.errors.empty());
}

TEST_CASE("interleaved files are grouped and sorted") {
    // Rows deliberately shuffled: (file, index, page).
    const std::vector<std::tuple<std::string, long, int>> rows = {
        {"b", 4, 2}, {"a", 1, 1}, {"b", 0, 1}, {"a", 5, 2}, {"a", 2, 1}, {"b", 3, 1}};
    std::string input;
    for (const auto& [f, i, p] : rows) input += jsonl_row(f + std::to_string(i), f, i, p) + "\n";
    std::istringstream in(input);
    const auto r = parse_line_records(in, RecordFormat::Jsonl);
    REQUIRE(r.errors.empty());
    REQUIRE(r.documents.size() == 2);
    for (const auto& doc : r.documents) {
        std::vector<std::pair<int, long>> expected;
        for (const auto& [f, i, p] : rows)
            if (f == doc.file_id) expected.push_back({p, i});
        std::sort(expected.begin(), expected.end());
        REQUIRE(doc.lines.size() == expected.size());
        for (std::size_t k = 0; k < expected.size(); ++k) {
            CHECK(doc.lines[k].page_number == expected[k].first);
            CHECK(doc.lines[k].line_index == expected[k].second);
        }
    }
    CHECK(r.documents[0].file_id == "b");
}

TEST_CASE("duplicate line_index within a document is rejected") {
    std::istringstream in(jsonl_row("x", "a", 3) + "\n" + jsonl_row("y", "a", 3) + "\n");
    const auto r = parse_line_records(in, RecordFormat::Jsonl);
    CHECK(r.errors.size() == 1);
}

TEST_CASE("CSV records parse with quoting") {
    std::ostringstream csv;
    const auto& cols = line_record_fields();
    for (std::size_t i = 0; i < cols.size(); ++i) csv << (i ? "," : "") << cols[i];
    csv << "\n\"Intro, part \"\"one\"\"\",72,200,100,110,10,400,Times,false,false,1,612,792,a,0\n";
    std::istringstream in(csv.str());
    const auto r = parse_line_records(in, RecordFormat::Csv);
    REQUIRE(r.errors.empty());
    CHECK(r.documents.at(0).lines.at(0).text == "Intro, part \"one\"");
}

TEST_CASE("JSONL round trip is bit exact") {
    Rng rng(11);
    std::vector<Document> docs(1);
    docs[0].file_id = "rt";
    for (long i = 0; i < 50; ++i) {
        auto l = fixtures::line(fixtures::random_string(rng, "abc XYZ,\"\\", 20) + (i % 3 ? "" : "é"), rng.uniform(0, 700),
                                rng.uniform(6, 20), rng.index(2) == 1, 1, i, "rt");
        l.x_start = rng.uniform(0, 100);
        l.x_end = l.x_start + rng.uniform(0, 400);
        l.font_weight = rng.uniform(100, 900);
        docs[0].lines.push_back(l);
    }
    std::ostringstream out;
    write_line_records_jsonl(out, docs);
    std::istringstream in(out.str());
    const auto r = parse_line_records(in, RecordFormat::Jsonl);
    REQUIRE(r.errors.empty());
    REQUIRE(r.documents.size() == 1);
    CHECK(r.documents[0].lines == docs[0].lines);
}

TEST_CASE("page statistics") {
    SUBCASE("single line") {
        const std::vector<LineRecord> lines = {fixtures::line("a", 100, 10)};
        const auto s = page_statistics(lines);
        CHECK(s.at(1).avg_font_size == 10.0);
        CHECK(s.at(1).avg_line_spacing == 0.0);
    }
    SUBCASE("mean font size") {
        const std::vector<LineRecord> lines = {fixtures::line("a", 100, 10, false, 1, 0),
                                               fixtures::line("b", 120, 14, false, 1, 1)};
        CHECK(page_statistics(lines).at(1).avg_font_size == 12.0);
    }
    SUBCASE("spacing from y_start gaps") {
        const std::vector<LineRecord> lines = {fixtures::line("a", 700, 10, false, 1, 0),
                                               fixtures::line("b", 680, 10, false, 1, 1),
                                               fixtures::line("c", 660, 10, false, 1, 2)};
        CHECK(page_statistics(lines).at(1).avg_line_spacing == doctest::Approx(20.0));
    }
    SUBCASE("empty input") { CHECK(page_statistics({}).empty()); }
    SUBCASE("constant font size is exact") {
        Rng rng(3);
        std::vector<LineRecord> lines;
        for (long i = 0; i < 37; ++i) lines.push_back(fixtures::line("x", rng.uniform(0, 700), 10.7, false, 1 + i % 3, i));
        for (const auto& [page, st] : page_statistics(lines)) CHECK(st.avg_font_size == 10.7);
    }
}

TEST_CASE("similarity ratio examples") {
    CHECK(similarity_ratio("Introduction", "Introduction") == 1.0);
    CHECK(similarity_ratio("abc", "xyz") == 0.0);
    CHECK(similarity_ratio("1 Introduction", "Introduction") == doctest::Approx(24.0 / 26.0).epsilon(1e-12));
    CHECK(similarity_ratio("", "") == 1.0);
    CHECK(similarity_ratio("", "abc") == 0.0);
}

TEST_CASE("similarity ratio matches the matching-block oracle and is symmetric") {
    Rng rng(2024);
    for (int t = 0; t < 2000; ++t) {
        const auto a = fixtures::random_string(rng, "abcab ", 12);
        const auto b = fixtures::random_string(rng, "abcba ", 12);
        const double r = similarity_ratio(a, b);
        CHECK(r == doctest::Approx(oracle_ratio(a, b)).epsilon(1e-12));
        CHECK(r == similarity_ratio(b, a));
        CHECK(r >= 0.0);
        CHECK(r <= 1.0);
        CHECK(similarity_ratio(a, a) == 1.0);
    }
}

TEST_CASE("gold alignment") {
    SUBCASE("exact match") {
        const std::vector<LineRecord> doc = {fixtures::line("Introduction", 100, 10, false, 1, 0),
                                             fixtures::line("body text here", 112, 10, false, 1, 1)};
        const std::vector<ingest::TocEntry> toc = {{"Introduction", 1}};
        const auto ld = align_gold_toc(doc, toc, 0.9);
        CHECK(ld.lines[0].label == LineLabel::TopLevelHeader);
        CHECK(ld.lines[1].label == LineLabel::RegularText);
        CHECK(ld.unmatched_entries().empty());
    }
    SUBCASE("unmatched entry") {
        const std::vector<LineRecord> doc = {fixtures::line("Introduction", 100, 10, false, 1, 0)};
        const std::vector<ingest::TocEntry> toc = {{"Conclusions", 1}};
        const auto ld = align_gold_toc(doc, toc);
        CHECK(ld.lines[0].label == LineLabel::RegularText);
        CHECK(ld.unmatched_entries() == std::vector<std::size_t>{0});
    }
    SUBCASE("five-line fixture against brute force in-order rule") {
        const std::vector<std::string> texts = {"1 Intro", "we study data", "1.1 Data", "more data here", "1 Introx"};
        std::vector<LineRecord> doc;
        for (std::size_t i = 0; i < texts.size(); ++i)
            doc.push_back(fixtures::line(texts[i], 100 + 12.0 * i, 10, false, 1, static_cast<long>(i)));
        const std::vector<ingest::TocEntry> toc = {{"1 Intro", 1}, {"1.1 Data", 2}};
        // Brute force: all ratios, then walk entries in order with a cursor.
        std::vector<int> expected(texts.size(), 0);
        std::size_t cursor = 0;
        for (const auto& e : toc) {
            for (std::size_t i = cursor; i < texts.size(); ++i) {
                if (oracle_ratio(e.title, texts[i]) >= 0.85) {
                    expected[i] = e.level;
                    cursor = i + 1;
                    break;
                }
            }
        }
        CHECK(expected == std::vector<int>{1, 0, 2, 0, 0});
        const auto ld = align_gold_toc(doc, toc);
        std::vector<int> got;
        for (const auto& l : ld.lines) got.push_back(to_int(l.label));
        CHECK(got == expected);
    }
    SUBCASE("labels follow toc order and never exceed toc size") {
        Rng rng(5);
        const std::vector<std::string> words = {"Intro", "Methods", "Results", "Data", "Proof", "Notes"};
        for (int t = 0; t < 200; ++t) {
            std::vector<LineRecord> doc;
            for (long i = 0; i < 12; ++i)
                doc.push_back(fixtures::line(words[rng.index(words.size())], 100 + 12.0 * i, 10, false, 1, i));
            std::vector<ingest::TocEntry> toc;
            for (std::size_t k = 0, n = rng.index(5); k < n; ++k)
                toc.push_back({words[rng.index(words.size())], 1 + static_cast<int>(rng.index(3))});
            const auto ld = align_gold_toc(doc, toc);
            std::size_t nonzero = 0;
            std::optional<std::size_t> last;
            for (std::size_t k = 0; k < ld.alignment.size(); ++k) {
                if (!ld.alignment[k]) continue;
                if (last) CHECK(*ld.alignment[k] > *last);
                last = ld.alignment[k];
                CHECK(to_int(ld.lines[*ld.alignment[k]].label) == toc[k].level);
            }
            for (const auto& l : ld.lines) nonzero += l.label != LineLabel::RegularText;
            CHECK(nonzero <= toc.size());
        }
    }
    CHECK_THROWS_AS(align_gold_toc({}, {}, 0.0), std::invalid_argument);
}

TEST_CASE("gold CSV round trip") {
    std::vector<LabeledDocument> docs(2);
    docs[0].file_id = "a";
    docs[1].file_id = "b";
    docs[0].lines.push_back({fixtures::line("1 Intro, \"quoted\"", 100, 14, true, 1, 0, "a"), LineLabel::TopLevelHeader});
    docs[0].lines.push_back({fixtures::line("body 0.1", 112.25, 10, false, 1, 1, "a"), LineLabel::RegularText});
    docs[1].lines.push_back({fixtures::line("x", 100, 10, false, 2, 7, "b"), LineLabel::SubSubsectionHeader});
    std::ostringstream out;
    write_gold_csv(out, docs);
    CHECK(out.str().rfind("file_id,line_index,text,font_size,font_weight,font_family,is_bold,is_italic,x_start,x_end,"
                          "y_start,y_end,page_number,page_width,page_height,label\n",
                          0) == 0);
    std::istringstream in(out.str());
    const auto back = read_gold_csv(in);
    REQUIRE(back.size() == 2);
    for (std::size_t d = 0; d < 2; ++d) {
        REQUIRE(back[d].lines.size() == docs[d].lines.size());
        for (std::size_t i = 0; i < docs[d].lines.size(); ++i) {
            CHECK(back[d].lines[i].record == docs[d].lines[i].record);
            CHECK(back[d].lines[i].label == docs[d].lines[i].label);
        }
    }
}

TEST_CASE("gold CSV errors name the row") {
    std::istringstream in(
        "file_id,line_index,text,font_size,font_weight,font_family,is_bold,is_italic,x_start,x_end,y_start,y_end,"
        "page_number,page_width,page_height,label\n"
        "a,0,x,10,400,T,false,false,1,2,3,4,1,612,792,7\n");
    try {
        read_gold_csv(in);
        FAIL("expected an error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    }
}

TEST_CASE("label conversion") {
    CHECK(label_from_int(2) == LineLabel::SubsectionHeader);
    CHECK_THROWS_AS(label_from_int(4), std::invalid_argument);
    CHECK_THROWS_AS(label_from_int(-1), std::invalid_argument);
}
