#include "docstruct/cli/synthetic.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <stdexcept>

#include "docstruct/random.hpp"

namespace docstruct::cli {

namespace {

const std::vector<std::vector<std::string>>& builtin_pools() {
    static const std::vector<std::vector<std::string>> pools = {
        {"graph", "vertex", "edge", "path", "tree", "cycle", "matching", "coloring", "planar", "bipartite",
         "clique", "degree", "spanning", "cut", "flow", "digraph", "subgraph", "walk", "component", "connectivity",
         "hamiltonian", "eulerian", "chromatic", "minor", "treewidth"},
        {"neuron", "network", "layer", "gradient", "activation", "dropout", "convolution", "optimizer", "epoch",
         "embedding", "attention", "transformer", "backpropagation", "loss", "tensor", "kernel", "pooling",
         "recurrent", "encoder", "decoder", "softmax", "batch", "regularizer", "perceptron", "autoencoder"},
        {"protein", "gene", "cell", "enzyme", "membrane", "receptor", "genome", "mutation", "ribosome", "peptide",
         "chromosome", "transcription", "antibody", "pathogen", "metabolism", "mitochondria", "nucleotide",
         "plasmid", "phenotype", "allele", "cytoplasm", "ligand", "kinase", "organism", "tissue"},
        {"galaxy", "star", "planet", "orbit", "telescope", "nebula", "quasar", "redshift", "supernova", "comet",
         "asteroid", "cosmology", "luminosity", "photometry", "spectrum", "pulsar", "exoplanet", "halo", "cluster",
         "parallax", "magnitude", "accretion", "eclipse", "meteor", "stellar"},
        {"market", "price", "demand", "supply", "equilibrium", "auction", "bidder", "tariff", "inflation", "wage",
         "consumer", "monopoly", "oligopoly", "utility", "welfare", "subsidy", "revenue", "portfolio", "asset",
         "dividend", "liquidity", "investor", "arbitrage", "credit", "bond"},
        {"qubit", "entanglement", "superposition", "commutator", "photon", "boson", "fermion", "spin", "lattice",
         "decoherence", "measurement", "operator", "eigenstate", "tunneling", "oscillator", "wavefunction",
         "hilbert", "unitary", "interferometer", "laser", "cavity", "polariton", "phonon", "magnon", "exciton"},
    };
    return pools;
}

const std::vector<std::string>& filler_words() {
    static const std::vector<std::string> words = {"the", "of", "and", "we", "is", "in", "a", "to", "for",
                                                   "this", "that", "with", "by", "on", "are", "as", "which", "its"};
    return words;
}

const std::vector<std::string>& title_phrases() {
    static const std::vector<std::string> titles = {
        "Introduction", "Background",        "Related Work",     "Methods",        "Results",
        "Discussion",   "Conclusions",       "Experiments",      "Evaluation",     "Analysis",
        "Data",         "Model",             "Training",         "Setup",          "Implementation",
        "Proof",        "Appendix",          "Overview",         "Limitations",    "Future Work",
        "Main Results", "Preliminaries",     "Problem Statement", "Algorithm",     "Complexity",
        "Case Study",   "Error Analysis",    "Ablation",          "Datasets",      "Baselines"};
    return titles;
}

std::string capitalize(std::string w) {
    if (!w.empty()) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
    return w;
}

class DocumentWriter {
public:
    DocumentWriter(std::string file_id, Rng& rng) : file_id_(std::move(file_id)), rng_(rng) {
        doc_.file_id = file_id_;
    }

    void header(const std::string& title, int level) {
        gap_ += 14.0;
        const double size = level == 1 ? 14.0 : level == 2 ? 12.0 : 11.0;
        emit(title, size, 700.0, "Times-Bold", true, false, ingest::label_from_int(level));
        gap_ += 4.0;
    }

    void body(const std::vector<std::string>& pool, std::size_t n_lines) {
        bool sentence_start = true;
        for (std::size_t l = 0; l < n_lines; ++l) {
            const bool last = l + 1 == n_lines;
            const std::size_t words = last ? 3 + rng_.index(5) : 8 + rng_.index(7);
            std::string line;
            for (std::size_t w = 0; w < words; ++w) {
                std::string word =
                    rng_.uniform() < 0.6 ? pool[rng_.index(pool.size())] : filler_words()[rng_.index(filler_words().size())];
                if (sentence_start) word = capitalize(word);
                sentence_start = false;
                if (!line.empty()) line += ' ';
                line += word;
                const bool end_sentence = (w + 1 == words && last) || (w + 1 < words && w >= 3 && rng_.uniform() < 0.1);
                if (end_sentence) {
                    line += '.';
                    sentence_start = true;
                }
            }
            const bool italic = rng_.uniform() < 0.03;
            emit(line, 10.0, 400.0, italic ? "Times-Italic" : "Times-Roman", false, italic,
                 ingest::LineLabel::RegularText);
        }
        gap_ += 6.0;
    }

    ingest::LabeledDocument finish() { return std::move(doc_); }

private:
    void emit(const std::string& text, double size, double weight, const char* family, bool bold, bool italic,
              ingest::LineLabel label) {
        constexpr double page_width = 612.0, page_height = 792.0, top = 72.0, bottom = 720.0;
        double y = doc_.lines.empty() ? top : y_ + 12.0 + gap_;
        if (y + size > bottom) {
            ++page_;
            y = top;
        }
        ingest::LineRecord r;
        r.text = text;
        r.x_start = 72.0;
        r.x_end = std::min(540.0, 72.0 + 0.5 * size * static_cast<double>(text.size()));
        r.y_start = y;
        r.y_end = y + size;
        r.font_size = size;
        r.font_weight = weight;
        r.font_family = family;
        r.is_bold = bold;
        r.is_italic = italic;
        r.page_number = page_;
        r.page_width = page_width;
        r.page_height = page_height;
        r.file_id = file_id_;
        r.line_index = static_cast<long>(doc_.lines.size());
        doc_.lines.push_back({r, label});
        y_ = y;
        gap_ = 0.0;
    }

    std::string file_id_;
    Rng& rng_;
    ingest::LabeledDocument doc_;
    int page_ = 1;
    double y_ = 72.0;
    double gap_ = 0.0;
};

}  // namespace

std::vector<std::string> topic_pool(std::size_t t) {
    const auto& pools = builtin_pools();
    if (t < pools.size()) return pools[t];
    std::vector<std::string> out;
    for (std::size_t i = 0; i < 25; ++i) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "topic%zuterm%c%c", t, static_cast<char>('a' + i % 26),
                      static_cast<char>('a' + (i / 26) % 26));
        out.emplace_back(buf);
    }
    return out;
}

SyntheticCorpus generate_synthetic(const GeneratorConfig& config) {
    if (config.sections == 0) throw std::invalid_argument("generate: at least one top-level section is required");
    if (config.documents == 0) throw std::invalid_argument("generate: at least one document is required");
    if (config.topics == 0) throw std::invalid_argument("generate: at least one topic is required");
    if (config.min_body_lines == 0 || config.max_body_lines < config.min_body_lines)
        throw std::invalid_argument("generate: invalid body line range");

    SyntheticCorpus corpus;
    for (std::size_t t = 0; t < config.topics; ++t) corpus.topic_pools.push_back(topic_pool(t));

    Rng rng(config.seed);
    const auto& titles = title_phrases();
    auto body_lines = [&] { return config.min_body_lines + rng.index(config.max_body_lines - config.min_body_lines + 1); };

    for (std::size_t d = 0; d < config.documents; ++d) {
        char id[32];
        std::snprintf(id, sizeof(id), "doc-%04zu", d);
        DocumentWriter writer(id, rng);
        DocumentPlan plan{id, {}};
        for (std::size_t s = 1; s <= config.sections; ++s) {
            const std::size_t topic = rng.index(config.topics);
            const auto& pool = corpus.topic_pools[topic];
            const std::string t1 = std::to_string(s) + " " + titles[rng.index(titles.size())];
            writer.header(t1, 1);
            plan.sections.push_back({t1, 1, topic});
            writer.body(pool, body_lines());
            for (std::size_t ss = 1; ss <= config.subsections; ++ss) {
                const std::string t2 =
                    std::to_string(s) + "." + std::to_string(ss) + " " + titles[rng.index(titles.size())];
                writer.header(t2, 2);
                plan.sections.push_back({t2, 2, topic});
                writer.body(pool, body_lines());
                for (std::size_t sss = 1; sss <= config.subsubsections; ++sss) {
                    const std::string t3 = std::to_string(s) + "." + std::to_string(ss) + "." + std::to_string(sss) +
                                           " " + titles[rng.index(titles.size())];
                    writer.header(t3, 3);
                    plan.sections.push_back({t3, 3, topic});
                    writer.body(pool, body_lines());
                }
            }
        }
        auto doc = writer.finish();
        for (const auto& p : plan.sections) doc.toc_entries.push_back({p.title, p.level});
        corpus.documents.push_back(std::move(doc));
        corpus.plans.push_back(std::move(plan));
    }
    return corpus;
}

nlohmann::ordered_json SyntheticCorpus::plan_json(std::uint64_t seed) const {
    nlohmann::ordered_json docs = nlohmann::ordered_json::array();
    for (const auto& p : plans) {
        nlohmann::ordered_json sections = nlohmann::ordered_json::array();
        for (const auto& s : p.sections)
            sections.push_back({{"title", s.title}, {"level", s.level}, {"topic", s.topic}});
        docs.push_back({{"file_id", p.file_id}, {"sections", sections}});
    }
    return {{"format", "docstruct.plan"}, {"version", 1}, {"seed", seed}, {"topic_pools", topic_pools},
            {"documents", docs}};
}

}  // namespace docstruct::cli
