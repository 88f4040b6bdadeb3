#include "docstruct/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "docstruct/text.hpp"

namespace docstruct::features {

namespace {

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
bool is_lower(char c) { return std::islower(static_cast<unsigned char>(c)) != 0; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::size_t skip_digits(std::string_view s, std::size_t i) {
    while (i < s.size() && is_digit(s[i])) ++i;
    return i;
}

bool at_break(std::string_view s, std::size_t i) { return i == s.size() || is_space(s[i]); }

// Number of dot-separated integer groups at the start of s ("1.2.3" -> 3).
std::size_t leading_number_groups(std::string_view s) {
    std::size_t i = skip_digits(s, 0);
    if (i == 0) return 0;
    std::size_t groups = 1;
    while (i + 1 < s.size() && s[i] == '.' && is_digit(s[i + 1])) {
        i = skip_digits(s, i + 1);
        ++groups;
    }
    return groups;
}

// ^\d+(\.\d+)*\.?(\s|$)
bool starts_with_sequence_number(std::string_view s) {
    std::size_t i = skip_digits(s, 0);
    if (i == 0) return false;
    while (i + 1 < s.size() && s[i] == '.' && is_digit(s[i + 1])) i = skip_digits(s, i + 1);
    if (i < s.size() && s[i] == '.') ++i;
    return at_break(s, i);
}

bool is_roman_char(char c) { return c == 'I' || c == 'V' || c == 'X' || c == 'L' || c == 'C'; }

// ^\d+[.)]?\s, or a Roman numeral / single capital letter followed by '.' or ')'
bool matches_header_0(std::string_view s) {
    std::size_t i = skip_digits(s, 0);
    if (i > 0) {
        if (i < s.size() && (s[i] == '.' || s[i] == ')')) ++i;
        return i < s.size() && is_space(s[i]);
    }
    std::size_t j = 0;
    while (j < s.size() && is_roman_char(s[j])) ++j;
    if (j == 0 && !s.empty() && is_upper(s[0])) j = 1;
    if (j == 0 || j >= s.size() || (s[j] != '.' && s[j] != ')')) return false;
    // A single letter must stand alone ("A." not "Ab.").
    return at_break(s, j + 1);
}

const std::unordered_set<std::string>& verb_lexicon() {
    static const std::unordered_set<std::string> words = {
        "is",        "are",      "was",       "were",     "be",       "been",      "being",    "am",
        "has",       "have",     "had",       "do",       "does",     "did",       "can",      "could",
        "will",      "would",    "shall",     "should",   "may",      "might",     "must",     "show",
        "shows",     "showed",   "shown",     "use",      "uses",     "used",      "make",     "makes",
        "made",      "give",     "gives",     "gave",     "given",    "take",      "takes",    "took",
        "taken",     "present",  "presents",  "presented", "propose", "proposes",  "proposed", "describe",
        "describes", "described", "find",     "finds",    "found",    "obtain",    "obtains",  "obtained",
        "consider",  "considers", "considered", "denote", "denotes",  "denoted",   "let",      "see",
        "seen",      "ran",      "run",       "runs",     "go",       "goes",      "went",     "get",
        "gets",      "got",      "become",    "becomes",  "became",   "provide",   "provides", "provided",
        "follow",    "follows",  "followed",  "hold",     "holds",    "held",      "yield",    "yields",
        "yielded",   "leads",    "led",       "observe",  "observed", "observes",  "compute",  "computed",
        "computes",  "study",    "studies",   "studied",  "sat",      "slept",     "says",     "said"};
    return words;
}

bool has_noun_suffix(const std::string& w) {
    static const std::array<std::string_view, 16> suffixes = {"tion", "sion", "ment", "ness", "ity", "ism",
                                                              "ance", "ence", "ship", "ology", "ics", "ure",
                                                              "ist",  "dom",  "hood", "graphy"};
    if (w.size() < 5) return false;
    return std::any_of(suffixes.begin(), suffixes.end(), [&](std::string_view suf) {
        return w.size() > suf.size() && std::string_view(w).substr(w.size() - suf.size()) == suf;
    });
}

// Strips leading/trailing punctuation from a whitespace token.
std::string strip_punct(const std::string& tok) {
    std::size_t b = 0, e = tok.size();
    while (b < e && !std::isalnum(static_cast<unsigned char>(tok[b]))) ++b;
    while (e > b && !std::isalnum(static_cast<unsigned char>(tok[e - 1]))) --e;
    return tok.substr(b, e - b);
}

bool starts_upper(const std::string& s) {
    for (char c : s) {
        if (is_alpha(c)) return is_upper(c);
        if (!is_space(c)) return false;
    }
    return false;
}

bool is_title_case(const std::vector<std::string>& tokens) {
    static const std::unordered_set<std::string> minor = {"a",  "an", "the", "of", "and", "or",   "in",
                                                          "on", "for", "to", "with", "by", "at", "from"};
    bool seen_word = false;
    for (const auto& raw : tokens) {
        const std::string tok = strip_punct(raw);
        if (tok.empty() || !is_alpha(tok[0])) continue;
        if (!is_upper(tok[0])) {
            if (seen_word && minor.count(tok)) continue;
            return false;
        }
        seen_word = true;
    }
    return seen_word;
}

bool is_all_upper(std::string_view s) {
    bool any = false;
    for (char c : s) {
        if (is_lower(c)) return false;
        if (is_upper(c)) any = true;
    }
    return any;
}

std::optional<double> spacing_between(const ingest::LineRecord& a, const ingest::LineRecord* b) {
    if (!b || b->page_number != a.page_number) return std::nullopt;
    return std::abs(a.y_start - b->y_start);
}

}  // namespace

HeaderVocabulary build_header_vocabulary(std::span<const std::string> header_lines,
                                         const std::unordered_set<std::string>& stopwords, int min_frequency) {
    if (min_frequency < 1) throw std::invalid_argument("min_frequency must be >= 1");
    std::unordered_map<std::string, long> counts;
    for (const auto& line : header_lines)
        for (auto& tok : text::word_tokens(line))
            if (text::is_alpha_word(tok)) ++counts[tok];
    HeaderVocabulary vocab;
    vocab.min_frequency = min_frequency;
    for (const auto& [tok, n] : counts)
        if (n > min_frequency && !stopwords.count(tok)) vocab.words.insert(tok);
    return vocab;
}

std::array<double, kLayoutFeatureCount> LayoutFeatures::encode() const {
    auto b = [](bool v) { return v ? 1.0 : 0.0; };
    return {static_cast<double>(pos_nnp),
            b(without_verb_higher_line_space),
            b(font_weight),
            b(bold_italic),
            b(at_least_3_lines_upper),
            b(higher_line_space),
            b(number_dot),
            static_cast<double>(static_cast<int>(text_len_group)),
            b(seq_number),
            b(colon),
            b(header_0),
            b(header_1),
            b(header_2),
            b(title_case),
            b(all_upper),
            b(voc)};
}

const std::array<std::string_view, kLayoutFeatureCount>& LayoutFeatures::names() {
    static const std::array<std::string_view, kLayoutFeatureCount> n = {
        "pos_nnp",  "without_verb_higher_line_space", "font_weight", "bold_italic", "at_least_3_lines_upper",
        "higher_line_space", "number_dot", "text_len_group", "seq_number", "colon", "header_0", "header_1",
        "header_2", "title_case", "all_upper", "voc"};
    return n;
}

PosCounts heuristic_pos_counts(std::string_view line) {
    const auto& stop = text::english_stopwords();
    const auto& verbs = verb_lexicon();
    PosCounts counts;
    bool first_word = true;
    for (const auto& raw : text::split_whitespace(line)) {
        const std::string tok = strip_punct(raw);
        if (tok.empty() || !is_alpha(tok[0])) continue;
        const std::string lower = text::to_lower(tok);
        const bool initial = first_word;
        first_word = false;
        if (verbs.count(lower)) {
            ++counts.verbs;
            continue;
        }
        if (stop.count(lower)) continue;
        if ((is_upper(tok[0]) && !initial) || has_noun_suffix(lower)) ++counts.nouns;
    }
    return counts;
}

LayoutFeatures extract_layout_features(const ingest::LineRecord& line, const ingest::LineRecord* prev,
                                       const ingest::LineRecord* next, const ingest::PageStats& stats,
                                       const HeaderVocabulary& vocab) {
    LayoutFeatures f;
    const std::string trimmed = text::trim(line.text);
    const auto tokens = text::split_whitespace(trimmed);
    const PosCounts pos = heuristic_pos_counts(trimmed);

    f.pos_nnp = pos.nouns;
    f.font_weight = line.font_weight > stats.avg_font_weight;
    f.bold_italic = line.is_bold || line.is_italic;
    f.at_least_3_lines_upper = prev && next && starts_upper(prev->text) && starts_upper(line.text) &&
                               starts_upper(next->text);

    std::optional<double> gap = spacing_between(line, prev);
    if (!gap) gap = spacing_between(line, next);
    f.higher_line_space =
        gap && stats.avg_line_spacing > 0.0 && *gap > kHigherLineSpaceFactor * stats.avg_line_spacing;
    f.without_verb_higher_line_space = f.higher_line_space && pos.verbs == 0;

    f.number_dot = leading_number_groups(trimmed) >= 1 && skip_digits(trimmed, 0) < trimmed.size() &&
                   trimmed[skip_digits(trimmed, 0)] == '.';
    if (tokens.size() <= kShortLineMaxTokens)
        f.text_len_group = TextLength::Short;
    else if (tokens.size() <= kMediumLineMaxTokens)
        f.text_len_group = TextLength::Medium;
    else
        f.text_len_group = TextLength::Long;
    f.seq_number = starts_with_sequence_number(trimmed);
    f.colon = !trimmed.empty() && trimmed.back() == ':';
    f.header_0 = matches_header_0(trimmed);
    f.header_1 = leading_number_groups(trimmed) >= 2;
    f.header_2 = leading_number_groups(trimmed) >= 3;
    f.title_case = is_title_case(tokens);
    f.all_upper = is_all_upper(trimmed);
    for (const auto& tok : text::word_tokens(trimmed)) {
        if (vocab.contains(tok)) {
            f.voc = true;
            break;
        }
    }
    return f;
}

std::vector<LayoutFeatures> extract_document_features(std::span<const ingest::LineRecord> lines,
                                                      const HeaderVocabulary& vocab) {
    const auto stats = ingest::page_statistics(lines);
    std::vector<LayoutFeatures> out;
    out.reserve(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const ingest::LineRecord* prev = i > 0 ? &lines[i - 1] : nullptr;
        const ingest::LineRecord* next = i + 1 < lines.size() ? &lines[i + 1] : nullptr;
        out.push_back(extract_layout_features(lines[i], prev, next, stats.at(lines[i].page_number), vocab));
    }
    return out;
}

double SparseVector::norm() const {
    double s = 0.0;
    for (const auto& [i, v] : entries) s += v * v;
    return std::sqrt(s);
}

std::vector<double> SparseVector::dense() const {
    std::vector<double> out(dim, 0.0);
    for (const auto& [i, v] : entries) out[i] = v;
    return out;
}

std::optional<std::size_t> NgramVectorizer::column(const std::string& term) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), term);
    if (it == terms_.end() || *it != term) return std::nullopt;
    return static_cast<std::size_t>(it - terms_.begin());
}

std::size_t NgramVectorizer::min_df() const {
    return static_cast<std::size_t>(std::ceil(options_.min_df_fraction * static_cast<double>(n_documents_) - 1e-9));
}

std::size_t NgramVectorizer::max_df() const {
    return static_cast<std::size_t>(std::floor(options_.max_df_fraction * static_cast<double>(n_documents_) + 1e-9));
}

std::vector<std::string> ngrams(std::string_view text_in, int min_n, int max_n) {
    std::vector<std::string> words;
    for (auto& w : text::word_tokens(text_in))
        if (w.size() >= 2) words.push_back(std::move(w));
    std::vector<std::string> out;
    for (int n = min_n; n <= max_n; ++n) {
        const auto len = static_cast<std::size_t>(n);
        for (std::size_t i = 0; i + len <= words.size(); ++i) {
            std::string g = words[i];
            for (std::size_t k = 1; k < len; ++k) {
                g += ' ';
                g += words[i + k];
            }
            out.push_back(std::move(g));
        }
    }
    return out;
}

NgramVectorizer fit_ngram_vectorizer(std::span<const std::string> texts, const NgramOptions& options) {
    if (texts.size() < options.min_documents)
        throw std::invalid_argument("fit_ngram_vectorizer needs at least " + std::to_string(options.min_documents) +
                                    " documents, got " + std::to_string(texts.size()));
    if (options.min_n < 1 || options.max_n < options.min_n) throw std::invalid_argument("invalid ngram range");

    NgramVectorizer v;
    v.options_ = options;
    v.n_documents_ = texts.size();

    std::map<std::string, std::size_t> df;
    for (const auto& t : texts) {
        auto grams = ngrams(t, options.min_n, options.max_n);
        std::sort(grams.begin(), grams.end());
        grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
        for (auto& g : grams) ++df[g];
    }
    const std::size_t lo = v.min_df();
    const std::size_t hi = v.max_df();
    const double n = static_cast<double>(texts.size());
    for (const auto& [term, count] : df) {
        if (count < lo || count > hi) continue;
        v.terms_.push_back(term);
        v.df_.push_back(count);
        v.idf_.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
    }
    return v;
}

SparseVector vectorize(const NgramVectorizer& vectorizer, std::string_view text_in) {
    const auto& opt = vectorizer.options();
    std::map<std::size_t, double> tf;
    for (const auto& g : ngrams(text_in, opt.min_n, opt.max_n))
        if (auto col = vectorizer.column(g)) tf[*col] += 1.0;

    SparseVector out;
    out.dim = vectorizer.size();
    double sq = 0.0;
    for (const auto& [col, count] : tf) {
        const double w = count * vectorizer.idf()[col];
        out.entries.emplace_back(col, w);
        sq += w * w;
    }
    if (sq > 0.0) {
        const double inv = 1.0 / std::sqrt(sq);
        for (auto& e : out.entries) e.second *= inv;
    }
    return out;
}

std::vector<double> FeatureVector::dense() const {
    std::vector<double> out(layout.begin(), layout.end());
    if (text) {
        out.resize(kLayoutFeatureCount + text->dim, 0.0);
        for (const auto& [i, v] : text->entries) out[kLayoutFeatureCount + i] = v;
    }
    return out;
}

FeatureVector combine(const LayoutFeatures& layout, const SparseVector* text_vec) {
    FeatureVector fv;
    fv.layout = layout.encode();
    if (text_vec) {
        fv.text = *text_vec;
        fv.mode = FeatureMode::Combined;
    }
    return fv;
}

nlohmann::json NgramVectorizer::to_json() const {
    nlohmann::json terms = nlohmann::json::array();
    for (std::size_t i = 0; i < terms_.size(); ++i)
        terms.push_back({{"term", terms_[i]}, {"df", df_[i]}, {"idf", idf_[i]}});
    return {{"format", "docstruct.ngram_vectorizer"},
            {"version", 1},
            {"ngram_range", {options_.min_n, options_.max_n}},
            {"min_df_fraction", options_.min_df_fraction},
            {"max_df_fraction", options_.max_df_fraction},
            {"min_documents", options_.min_documents},
            {"n_documents", n_documents_},
            {"terms", terms}};
}

NgramVectorizer NgramVectorizer::from_json(const nlohmann::json& j) {
    if (j.at("format") != "docstruct.ngram_vectorizer") throw std::runtime_error("not an ngram vectorizer document");
    NgramVectorizer v;
    v.options_.min_n = j.at("ngram_range").at(0).get<int>();
    v.options_.max_n = j.at("ngram_range").at(1).get<int>();
    v.options_.min_df_fraction = j.at("min_df_fraction").get<double>();
    v.options_.max_df_fraction = j.at("max_df_fraction").get<double>();
    v.options_.min_documents = j.at("min_documents").get<std::size_t>();
    v.n_documents_ = j.at("n_documents").get<std::size_t>();
    for (const auto& t : j.at("terms")) {
        v.terms_.push_back(t.at("term").get<std::string>());
        v.df_.push_back(t.at("df").get<std::size_t>());
        v.idf_.push_back(t.at("idf").get<double>());
    }
    if (!std::is_sorted(v.terms_.begin(), v.terms_.end())) throw std::runtime_error("vectorizer terms are not sorted");
    return v;
}

nlohmann::json to_json(const HeaderVocabulary& vocab) {
    return {{"format", "docstruct.header_vocabulary"},
            {"version", 1},
            {"min_frequency", vocab.min_frequency},
            {"words", std::vector<std::string>(vocab.words.begin(), vocab.words.end())}};
}

HeaderVocabulary header_vocabulary_from_json(const nlohmann::json& j) {
    if (j.at("format") != "docstruct.header_vocabulary") throw std::runtime_error("not a header vocabulary document");
    HeaderVocabulary v;
    v.min_frequency = j.at("min_frequency").get<int>();
    for (const auto& w : j.at("words")) v.words.insert(w.get<std::string>());
    return v;
}

}  // namespace docstruct::features
