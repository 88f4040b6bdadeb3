#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "docstruct/cli/synthetic.hpp"

namespace docstruct::cli {

/// Settings shared by every stage. Each field can be set from a config file
/// line `key = value` or from the flag `--key` (underscores become dashes);
/// flags win over the file.
struct PipelineConfig {
    std::string input;      // stage input; defaults to the previous stage's output in `out`
    std::string gold;       // gold CSV
    std::string model_dir;  // defaults to <out>/models
    std::string out = ".";
    std::string classifier = "dt";        // svm | dt | nb | rnn
    std::string feature_mode = "layout";  // layout | text | combined
    std::string split_level = "top_level";
    std::uint64_t seed = 0;

    double train_fraction = 1.0;
    bool balance = true;           // line classifier
    bool section_balance = false;  // section level model
    int vocab_min_frequency = 100;

    int svm_epochs = 20;
    double svm_learning_rate = 0.1;
    double svm_l2 = 1e-4;
    std::size_t dt_max_depth = 32;
    std::size_t dt_min_leaf = 1;
    double nb_smoothing = 1.0;
    std::size_t rnn_epochs = 10;
    double rnn_learning_rate = 0.001;
    std::size_t rnn_hidden = 20;
    std::size_t rnn_batch = 10;
    double rnn_clip = 0.0;
    std::size_t section_epochs = 10;
    double section_learning_rate = 0.001;

    std::size_t lda_topics = 10;
    std::size_t lda_passes = 50;
    double lda_alpha = 0.0;
    double lda_beta = 0.01;
    std::size_t lda_min_docs = 20;
    double lda_max_fraction = 0.10;
    std::size_t lda_keep_n = 100000;
    std::size_t label_terms = 2;

    double summary_ratio = 0.2;

    GeneratorConfig generator;  // keys gen_documents, gen_sections, ...

    std::filesystem::path out_dir() const { return out; }
    std::filesystem::path models() const;
};

/// Names of every recognised config key, in declaration order.
const std::vector<std::string>& config_keys();

/// Throws std::invalid_argument for an unknown key or unparsable value.
void set_config_value(PipelineConfig& cfg, const std::string& key, const std::string& value);

/// Reads `key = value` lines; '#' starts a comment.
void apply_config_file(PipelineConfig& cfg, const std::filesystem::path& path);

/// A stage failure: bad input, missing artifact or invalid configuration.
class StageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Stages. Each reads and writes files only.
void cmd_generate(const PipelineConfig& cfg);
void cmd_train(const PipelineConfig& cfg);
void cmd_classify(const PipelineConfig& cfg);
void cmd_toc(const PipelineConfig& cfg);
void cmd_label(const PipelineConfig& cfg);
void cmd_summarize(const PipelineConfig& cfg);
void cmd_eval(const PipelineConfig& cfg, std::ostream& report);

/// Command-line entry point. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace docstruct::cli
