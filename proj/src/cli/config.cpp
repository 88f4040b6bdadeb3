#include <charconv>
#include <fstream>
#include <functional>
#include <map>

#include "docstruct/cli/pipeline.hpp"
#include "docstruct/text.hpp"

namespace docstruct::cli {

namespace {

template <class T>
T parse_number(const std::string& key, const std::string& value) {
    T v{};
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (value.empty() || ec != std::errc() || ptr != value.data() + value.size())
        throw std::invalid_argument("config key '" + key + "': cannot parse '" + value + "'");
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw std::invalid_argument("config key '" + key + "': expected a boolean, got '" + value + "'");
}

using Setter = std::function<void(PipelineConfig&, const std::string&, const std::string&)>;

template <class T>
Setter number(T PipelineConfig::*field) {
    return [field](PipelineConfig& c, const std::string& k, const std::string& v) { c.*field = parse_number<T>(k, v); };
}

template <class T>
Setter gen_number(T GeneratorConfig::*field) {
    return [field](PipelineConfig& c, const std::string& k, const std::string& v) {
        c.generator.*field = parse_number<T>(k, v);
    };
}

Setter string_field(std::string PipelineConfig::*field) {
    return [field](PipelineConfig& c, const std::string&, const std::string& v) { c.*field = v; };
}

const std::vector<std::pair<std::string, Setter>>& registry() {
    static const std::vector<std::pair<std::string, Setter>> r = {
        {"input", string_field(&PipelineConfig::input)},
        {"gold", string_field(&PipelineConfig::gold)},
        {"model_dir", string_field(&PipelineConfig::model_dir)},
        {"out", string_field(&PipelineConfig::out)},
        {"classifier", string_field(&PipelineConfig::classifier)},
        {"feature_mode", string_field(&PipelineConfig::feature_mode)},
        {"split_level", string_field(&PipelineConfig::split_level)},
        {"seed",
         [](PipelineConfig& c, const std::string& k, const std::string& v) {
             c.seed = parse_number<std::uint64_t>(k, v);
             c.generator.seed = c.seed;
         }},
        {"train_fraction", number(&PipelineConfig::train_fraction)},
        {"balance", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.balance = parse_bool(k, v); }},
        {"section_balance",
         [](PipelineConfig& c, const std::string& k, const std::string& v) { c.section_balance = parse_bool(k, v); }},
        {"vocab_min_frequency", number(&PipelineConfig::vocab_min_frequency)},
        {"svm_epochs", number(&PipelineConfig::svm_epochs)},
        {"svm_learning_rate", number(&PipelineConfig::svm_learning_rate)},
        {"svm_l2", number(&PipelineConfig::svm_l2)},
        {"dt_max_depth", number(&PipelineConfig::dt_max_depth)},
        {"dt_min_leaf", number(&PipelineConfig::dt_min_leaf)},
        {"nb_smoothing", number(&PipelineConfig::nb_smoothing)},
        {"rnn_epochs", number(&PipelineConfig::rnn_epochs)},
        {"rnn_learning_rate", number(&PipelineConfig::rnn_learning_rate)},
        {"rnn_hidden", number(&PipelineConfig::rnn_hidden)},
        {"rnn_batch", number(&PipelineConfig::rnn_batch)},
        {"rnn_clip", number(&PipelineConfig::rnn_clip)},
        {"section_epochs", number(&PipelineConfig::section_epochs)},
        {"section_learning_rate", number(&PipelineConfig::section_learning_rate)},
        {"lda_topics", number(&PipelineConfig::lda_topics)},
        {"lda_passes", number(&PipelineConfig::lda_passes)},
        {"lda_alpha", number(&PipelineConfig::lda_alpha)},
        {"lda_beta", number(&PipelineConfig::lda_beta)},
        {"lda_min_docs", number(&PipelineConfig::lda_min_docs)},
        {"lda_max_fraction", number(&PipelineConfig::lda_max_fraction)},
        {"lda_keep_n", number(&PipelineConfig::lda_keep_n)},
        {"label_terms", number(&PipelineConfig::label_terms)},
        {"summary_ratio", number(&PipelineConfig::summary_ratio)},
        {"gen_documents", gen_number(&GeneratorConfig::documents)},
        {"gen_sections", gen_number(&GeneratorConfig::sections)},
        {"gen_subsections", gen_number(&GeneratorConfig::subsections)},
        {"gen_subsubsections", gen_number(&GeneratorConfig::subsubsections)},
        {"gen_topics", gen_number(&GeneratorConfig::topics)},
        {"gen_min_body_lines", gen_number(&GeneratorConfig::min_body_lines)},
        {"gen_max_body_lines", gen_number(&GeneratorConfig::max_body_lines)},
    };
    return r;
}

}  // namespace

std::filesystem::path PipelineConfig::models() const {
    return model_dir.empty() ? std::filesystem::path(out) / "models" : std::filesystem::path(model_dir);
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [name, setter] : registry()) k.push_back(name);
        return k;
    }();
    return keys;
}

void set_config_value(PipelineConfig& cfg, const std::string& key, const std::string& value) {
    for (const auto& [name, setter] : registry()) {
        if (name == key) {
            setter(cfg, key, value);
            return;
        }
    }
    throw std::invalid_argument("unknown config key '" + key + "'");
}

void apply_config_file(PipelineConfig& cfg, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw StageError("missing config file: " + path.string());
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string trimmed = text::trim(line);
        if (trimmed.empty()) continue;
        const auto eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw StageError(path.string() + ":" + std::to_string(row) + ": expected 'key = value'");
        try {
            set_config_value(cfg, text::trim(trimmed.substr(0, eq)), text::trim(trimmed.substr(eq + 1)));
        } catch (const std::invalid_argument& e) {
            throw StageError(path.string() + ":" + std::to_string(row) + ": " + e.what());
        }
    }
}

}  // namespace docstruct::cli
