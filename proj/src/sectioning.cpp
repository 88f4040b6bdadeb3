#include "docstruct/sectioning.hpp"

#include <algorithm>
#include <stdexcept>

namespace docstruct::sectioning {

SplitLevel split_level_from_string(std::string_view s) {
    if (s == "top_level") return SplitLevel::TopLevel;
    if (s == "subsection") return SplitLevel::Subsection;
    if (s == "sub_subsection") return SplitLevel::SubSubsection;
    throw std::invalid_argument("unknown split level '" + std::string(s) +
                                "' (expected top_level, subsection or sub_subsection)");
}

const char* to_string(SplitLevel level) {
    switch (level) {
        case SplitLevel::TopLevel: return "top_level";
        case SplitLevel::Subsection: return "subsection";
        case SplitLevel::SubSubsection: return "sub_subsection";
    }
    return "top_level";
}

std::string Toc::render() const {
    std::string out;
    for (const auto& e : entries) {
        out.append(static_cast<std::size_t>(2 * std::max(0, e.level - 1)), ' ');
        out += e.title;
        out += '\n';
    }
    return out;
}

std::vector<int> classify_section_levels(std::span<const std::string> headers, const classifiers::RnnModel& model) {
    if (model.n_classes != 3) throw std::invalid_argument("section level model must have 3 classes");
    if (model.mode != classifiers::RnnInputMode::Text)
        throw std::invalid_argument("section level model must read text input");
    std::vector<int> out;
    out.reserve(headers.size());
    for (const auto& h : headers) out.push_back(model.predict(model.encode(h)) + 1);
    return out;
}

std::vector<LevelAssignment> repair_level_sequence(std::span<const LevelAssignment> levels) {
    std::vector<LevelAssignment> out;
    out.reserve(levels.size());
    int deepest_open = 0;
    for (const auto& a : levels) {
        int level = std::clamp(a.level, 1, 3);
        if (level > deepest_open + 1) level = deepest_open + 1;
        deepest_open = level;
        out.push_back({a.line_index, level});
    }
    return out;
}

bool is_valid_level_sequence(std::span<const int> levels) {
    int prev = 0;
    for (int l : levels) {
        if (l < 1 || l > 3 || l > prev + 1) return false;
        prev = l;
    }
    return true;
}

namespace {

class Splitter {
public:
    Splitter(std::span<const LabeledText> lines, int split_level) : lines_(lines), split_level_(split_level) {}

    // Section whose header sits at `begin`, spanning [begin, end).
    SectionNode section(std::size_t begin, std::size_t end, int level) const {
        SectionNode node;
        node.title = lines_[begin].text;
        node.title_line = begin;
        node.level = level;
        fill(node, begin + 1, end, level);
        return node;
    }

    // Body of a node covering [begin, end): text up to the first child
    // header, then one child per header of the next level.
    void fill(SectionNode& node, std::size_t begin, std::size_t end, int level) const {
        std::vector<std::size_t> heads;
        if (level < split_level_) heads = headers(begin, end, level + 1);
        const std::size_t text_end = heads.empty() ? end : heads.front();
        for (std::size_t i = begin; i < text_end; ++i) node.text.push_back(lines_[i].text);
        for (std::size_t k = 0; k < heads.size(); ++k) {
            const std::size_t next = k + 1 < heads.size() ? heads[k + 1] : end;
            node.subsections.push_back(section(heads[k], next, level + 1));
        }
    }

    std::vector<std::size_t> headers(std::size_t begin, std::size_t end, int level) const {
        std::vector<std::size_t> out;
        for (std::size_t i = begin; i < end; ++i)
            if (ingest::to_int(lines_[i].label) == level) out.push_back(i);
        return out;
    }

private:
    std::span<const LabeledText> lines_;
    int split_level_;
};

void flatten_into(const SectionNode& node, std::vector<std::string>& out) {
    if (!node.untitled()) out.push_back(node.title);
    out.insert(out.end(), node.text.begin(), node.text.end());
    for (const auto& child : node.subsections) flatten_into(child, out);
}

void toc_into(const SectionNode& node, Toc& toc) {
    if (!node.untitled()) toc.entries.push_back({node.title, node.level, *node.title_line});
    for (const auto& child : node.subsections) toc_into(child, toc);
}

std::size_t depth_of(const SectionNode& node) {
    std::size_t d = 0;
    for (const auto& child : node.subsections) d = std::max(d, depth_of(child));
    return d + 1;
}

nlohmann::ordered_json node_json(const SectionNode& node) {
    nlohmann::ordered_json children = nlohmann::ordered_json::array();
    for (const auto& c : node.subsections) children.push_back(node_json(c));
    return nlohmann::ordered_json{{"title", node.title}, {"text", node.text}, {"subsections", children}};
}

}  // namespace

std::vector<SectionNode> split_document(std::span<const LabeledText> lines, SplitLevel split_level) {
    const Splitter splitter(lines, static_cast<int>(split_level));
    const auto tops = splitter.headers(0, lines.size(), 1);
    std::vector<SectionNode> out;
    const std::size_t preamble_end = tops.empty() ? lines.size() : tops.front();
    if (tops.empty() || preamble_end > 0) {
        SectionNode preamble;
        for (std::size_t i = 0; i < preamble_end; ++i) preamble.text.push_back(lines[i].text);
        out.push_back(std::move(preamble));
    }
    for (std::size_t k = 0; k < tops.size(); ++k) {
        const std::size_t next = k + 1 < tops.size() ? tops[k + 1] : lines.size();
        out.push_back(splitter.section(tops[k], next, 1));
    }
    return out;
}

Toc build_toc(std::span<const SectionNode> tree) {
    Toc toc;
    for (const auto& node : tree) toc_into(node, toc);
    return toc;
}

std::vector<std::string> flatten_lines(std::span<const SectionNode> tree) {
    std::vector<std::string> out;
    for (const auto& node : tree) flatten_into(node, out);
    return out;
}

std::size_t tree_depth(std::span<const SectionNode> tree) {
    std::size_t d = 0;
    for (const auto& node : tree) d = std::max(d, depth_of(node));
    return d;
}

nlohmann::ordered_json to_json(std::span<const SectionNode> tree) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& node : tree) arr.push_back(node_json(node));
    return arr;
}

}  // namespace docstruct::sectioning
