#include "docstruct/cli/pipeline.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "docstruct/classifiers/dataset.hpp"
#include "docstruct/classifiers/decision_tree.hpp"
#include "docstruct/classifiers/naive_bayes.hpp"
#include "docstruct/classifiers/rnn.hpp"
#include "docstruct/classifiers/svm.hpp"
#include "docstruct/eval.hpp"
#include "docstruct/features.hpp"
#include "docstruct/ingest.hpp"
#include "docstruct/sectioning.hpp"
#include "docstruct/semantics.hpp"
#include "docstruct/summarize.hpp"
#include "docstruct/text.hpp"

namespace docstruct::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr const char* kLineModelFormat = "docstruct.line_classifier";

void write_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw StageError("cannot write " + tmp.string());
        out << content;
        if (!out) throw StageError("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }
std::string dump(const json& j) { return j.dump(2) + "\n"; }

fs::path require_file(const fs::path& path, const std::string& what) {
    if (path.empty()) throw StageError("no " + what + " path given");
    if (!fs::is_regular_file(path)) throw StageError("missing " + what + ": " + path.string());
    return path;
}

json read_json(const fs::path& path, const std::string& what) {
    std::ifstream in(require_file(path, what));
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw StageError("invalid " + what + " " + path.string() + ": " + e.what());
    }
}

fs::path input_or(const PipelineConfig& cfg, const std::string& fallback) {
    return cfg.input.empty() ? cfg.out_dir() / fallback : fs::path(cfg.input);
}

void write_manifest(const PipelineConfig& cfg, const std::string& stage, const std::vector<fs::path>& outputs) {
    ordered_json files = ordered_json::array();
    for (const auto& p : outputs) files.push_back(p.filename().string());
    ordered_json m = {{"stage", stage}, {"seed", cfg.seed}, {"outputs", files}};
    write_atomic(cfg.out_dir() / (stage + ".manifest.json"), dump(m));
}

std::vector<ingest::Document> read_records(const fs::path& path) {
    std::ifstream in(require_file(path, "line records"));
    const auto format = path.extension() == ".csv" ? ingest::RecordFormat::Csv : ingest::RecordFormat::Jsonl;
    auto parsed = ingest::parse_line_records(in, format);
    if (!parsed.errors.empty()) {
        std::ostringstream msg;
        msg << path.string() << ": " << parsed.errors.size() << " invalid record(s)";
        for (std::size_t i = 0; i < std::min<std::size_t>(parsed.errors.size(), 5); ++i) {
            const auto& e = parsed.errors[i];
            msg << "\n  row " << e.row;
            if (!e.field.empty()) msg << " field " << e.field;
            msg << ": " << e.message;
        }
        throw StageError(msg.str());
    }
    return std::move(parsed.documents);
}

std::vector<ingest::LabeledDocument> read_labeled(const fs::path& path, const std::string& what) {
    std::ifstream in(require_file(path, what));
    try {
        return ingest::read_gold_csv(in);
    } catch (const std::exception& e) {
        throw StageError(path.string() + ": " + e.what());
    }
}

std::vector<ingest::LineRecord> records_of(const ingest::LabeledDocument& doc) {
    std::vector<ingest::LineRecord> out;
    out.reserve(doc.lines.size());
    for (const auto& l : doc.lines) out.push_back(l.record);
    return out;
}

std::vector<sectioning::LabeledText> labeled_text(const ingest::LabeledDocument& doc) {
    std::vector<sectioning::LabeledText> out;
    out.reserve(doc.lines.size());
    for (const auto& l : doc.lines) out.push_back({l.record.text, l.label});
    return out;
}

// Line classifier: one of four model kinds over one of three feature modes.

struct LineClassifier {
    std::string kind;
    std::string feature_mode;
    std::uint64_t seed = 0;
    features::HeaderVocabulary vocab;
    std::optional<features::NgramVectorizer> vectorizer;
    classifiers::LinearSvmModel svm;
    classifiers::DecisionTreeModel dt;
    classifiers::NaiveBayesModel nb;
    std::optional<classifiers::RnnModel> rnn;

    classifiers::Row row(const ingest::LineRecord& r, const features::LayoutFeatures& f) const {
        if (feature_mode == "layout") {
            const auto a = f.encode();
            return {a.begin(), a.end()};
        }
        const auto tv = features::vectorize(*vectorizer, r.text);
        if (feature_mode == "text") return tv.dense();
        return features::combine(f, &tv).dense();
    }

    int predict(const ingest::LineRecord& r, const features::LayoutFeatures& f) const {
        if (kind == "rnn") return rnn->predict(rnn->encode(r.text, &f));
        const auto x = row(r, f);
        if (kind == "svm") return svm.predict(x);
        if (kind == "dt") return dt.predict(x);
        return nb.predict(x);
    }

    json to_json() const {
        json model;
        if (kind == "svm") model = svm.to_json();
        else if (kind == "dt") model = dt.to_json();
        else if (kind == "nb") model = nb.to_json();
        else model = rnn->to_json();
        return {{"format", kLineModelFormat}, {"version", 1},          {"seed", seed},
                {"classifier", kind},         {"feature_mode", feature_mode}, {"model", model}};
    }
};

void check_choices(const PipelineConfig& cfg) {
    static const std::vector<std::string> kinds = {"svm", "dt", "nb", "rnn"};
    static const std::vector<std::string> modes = {"layout", "text", "combined"};
    if (std::find(kinds.begin(), kinds.end(), cfg.classifier) == kinds.end())
        throw StageError("unknown classifier '" + cfg.classifier + "' (expected svm, dt, nb or rnn)");
    if (std::find(modes.begin(), modes.end(), cfg.feature_mode) == modes.end())
        throw StageError("unknown feature mode '" + cfg.feature_mode + "' (expected layout, text or combined)");
}

classifiers::RnnInputMode rnn_mode(const std::string& feature_mode) {
    if (feature_mode == "layout") return classifiers::RnnInputMode::Layout;
    if (feature_mode == "combined") return classifiers::RnnInputMode::Combined;
    return classifiers::RnnInputMode::Text;
}

LineClassifier load_line_classifier(const PipelineConfig& cfg) {
    const fs::path dir = cfg.models();
    const json j = read_json(dir / "line_model.json", "line model");
    if (j.value("format", "") != kLineModelFormat) throw StageError("not a line model: " + (dir / "line_model.json").string());
    LineClassifier lc;
    lc.kind = j.at("classifier").get<std::string>();
    lc.feature_mode = j.at("feature_mode").get<std::string>();
    lc.seed = j.at("seed").get<std::uint64_t>();
    lc.vocab = features::header_vocabulary_from_json(read_json(dir / "vocabulary.json", "header vocabulary"));
    if (lc.kind != "rnn" && lc.feature_mode != "layout")
        lc.vectorizer = features::NgramVectorizer::from_json(read_json(dir / "vectorizer.json", "n-gram vectorizer"));
    const json& m = j.at("model");
    if (lc.kind == "svm") lc.svm = classifiers::LinearSvmModel::from_json(m);
    else if (lc.kind == "dt") lc.dt = classifiers::DecisionTreeModel::from_json(m);
    else if (lc.kind == "nb") lc.nb = classifiers::NaiveBayesModel::from_json(m);
    else if (lc.kind == "rnn") lc.rnn = classifiers::RnnModel::from_json(m);
    else throw StageError("unknown classifier in line model: " + lc.kind);
    return lc;
}

// Section text helpers. Trees are always split to full depth; `level` picks
// which nodes are reported, deeper descendants fold into their ancestor.

void collect_body(const sectioning::SectionNode& node, std::vector<std::string>& out) {
    out.insert(out.end(), node.text.begin(), node.text.end());
    for (const auto& child : node.subsections) collect_body(child, out);
}

struct ReportedSection {
    std::string path;
    std::string title;
    std::string body;
};

void walk_sections(const std::vector<sectioning::SectionNode>& nodes, const std::string& prefix, int max_level,
                   std::vector<ReportedSection>& out) {
    std::size_t ordinal = 0;
    for (const auto& node : nodes) {
        std::string path;
        if (node.untitled()) {
            path = prefix.empty() ? "0" : prefix + ".0";
        } else {
            ++ordinal;
            path = prefix.empty() ? std::to_string(ordinal) : prefix + "." + std::to_string(ordinal);
        }
        std::vector<std::string> body = node.text;
        if (node.level >= max_level) {
            for (const auto& child : node.subsections) collect_body(child, body);
        }
        if (!node.untitled() || !body.empty()) out.push_back({path, node.title, text::join(body, " ")});
        if (node.level < max_level) walk_sections(node.subsections, path, max_level, out);
    }
}

std::vector<ReportedSection> report_sections(const ingest::LabeledDocument& doc, int max_level) {
    const auto lines = labeled_text(doc);
    const auto tree = sectioning::split_document(lines, sectioning::SplitLevel::SubSubsection);
    std::vector<ReportedSection> out;
    walk_sections(tree, "", max_level, out);
    return out;
}

std::vector<semantics::Tokens> top_level_bodies(const ingest::LabeledDocument& doc) {
    std::vector<semantics::Tokens> out;
    for (const auto& s : report_sections(doc, 1)) {
        if (s.path == "0") continue;  // preamble
        out.push_back(semantics::tokenize_section(s.body));
    }
    return out;
}

sectioning::SplitLevel parse_split_level(const std::string& s) {
    try {
        return sectioning::split_level_from_string(s);
    } catch (const std::exception& e) {
        throw StageError(e.what());
    }
}

std::vector<classifiers::RnnSample> to_rnn_samples(const std::vector<std::pair<classifiers::RnnSample, int>>& pairs) {
    std::vector<classifiers::RnnSample> out;
    out.reserve(pairs.size());
    for (const auto& p : pairs) out.push_back(p.first);
    return out;
}

}  // namespace

void cmd_generate(const PipelineConfig& cfg) {
    GeneratorConfig g = cfg.generator;
    g.seed = cfg.seed;
    SyntheticCorpus corpus;
    try {
        corpus = generate_synthetic(g);
    } catch (const std::invalid_argument& e) {
        throw StageError(e.what());
    }
    std::vector<ingest::Document> docs;
    for (const auto& d : corpus.documents) docs.push_back({d.file_id, records_of(d)});
    std::ostringstream lines, gold;
    ingest::write_line_records_jsonl(lines, docs);
    ingest::write_gold_csv(gold, corpus.documents);

    const fs::path dir = cfg.out_dir();
    const std::vector<fs::path> outputs = {dir / "lines.jsonl", dir / "gold.csv", dir / "plan.json"};
    write_atomic(outputs[0], lines.str());
    write_atomic(outputs[1], gold.str());
    write_atomic(outputs[2], dump(corpus.plan_json(cfg.seed)));
    write_manifest(cfg, "generate", outputs);
}

void cmd_train(const PipelineConfig& cfg) {
    check_choices(cfg);
    const fs::path gold_path = cfg.gold.empty() ? cfg.out_dir() / "gold.csv" : fs::path(cfg.gold);
    auto docs = read_labeled(gold_path, "gold CSV");
    if (docs.empty()) throw StageError("gold CSV has no documents: " + gold_path.string());

    const fs::path dir = cfg.models();
    std::vector<fs::path> outputs;

    if (cfg.train_fraction < 1.0) {
        std::vector<std::string> ids;
        for (const auto& d : docs) ids.push_back(d.file_id);
        eval::DocumentSplit split;
        try {
            split = eval::train_test_split(ids, cfg.train_fraction, cfg.seed);
        } catch (const std::invalid_argument& e) {
            throw StageError(e.what());
        }
        ordered_json sj = {{"seed", cfg.seed}, {"fraction", cfg.train_fraction}, {"train", split.train}, {"test", split.test}};
        outputs.push_back(dir / "split.json");
        write_atomic(outputs.back(), dump(sj));
        std::vector<ingest::LabeledDocument> kept;
        for (auto& d : docs)
            if (std::find(split.train.begin(), split.train.end(), d.file_id) != split.train.end()) kept.push_back(std::move(d));
        docs = std::move(kept);
    }

    // Header vocabulary from gold header lines.
    std::vector<std::string> header_texts;
    for (const auto& d : docs)
        for (const auto& l : d.lines)
            if (l.label != ingest::LineLabel::RegularText) header_texts.push_back(l.record.text);
    const auto vocab = features::build_header_vocabulary(header_texts, text::english_stopwords(), cfg.vocab_min_frequency);
    outputs.push_back(dir / "vocabulary.json");
    write_atomic(outputs.back(), dump(features::to_json(vocab)));

    // Line classifier.
    LineClassifier lc;
    lc.kind = cfg.classifier;
    lc.feature_mode = cfg.feature_mode;
    lc.seed = cfg.seed;
    lc.vocab = vocab;

    struct LineSample {
        const ingest::LineRecord* record;
        features::LayoutFeatures layout;
    };
    std::vector<std::pair<LineSample, int>> samples;
    std::vector<std::vector<ingest::LineRecord>> doc_records;
    doc_records.reserve(docs.size());
    for (const auto& d : docs) doc_records.push_back(records_of(d));
    for (std::size_t i = 0; i < docs.size(); ++i) {
        const auto feats = features::extract_document_features(doc_records[i], vocab);
        for (std::size_t k = 0; k < feats.size(); ++k)
            samples.push_back({{&doc_records[i][k], feats[k]}, docs[i].lines[k].label != ingest::LineLabel::RegularText});
    }
    try {
        if (cfg.balance) samples = classifiers::balance_dataset(samples, std::vector<int>{0, 1}, cfg.seed);

        if (lc.kind != "rnn" && lc.feature_mode != "layout") {
            std::vector<std::string> texts;
            for (const auto& s : samples) texts.push_back(s.first.record->text);
            lc.vectorizer = features::fit_ngram_vectorizer(texts);
            outputs.push_back(dir / "vectorizer.json");
            write_atomic(outputs.back(), dump(lc.vectorizer->to_json()));
        }

        if (lc.kind == "rnn") {
            classifiers::RnnConfig rc;
            rc.mode = rnn_mode(lc.feature_mode);
            rc.hidden_size = cfg.rnn_hidden;
            rc.epochs = cfg.rnn_epochs;
            rc.batch_size = cfg.rnn_batch;
            rc.learning_rate = cfg.rnn_learning_rate;
            rc.clip_norm = cfg.rnn_clip;
            rc.seed = cfg.seed;
            const auto proto = classifiers::RnnModel::zeros(rc.mode, rc.hidden_size, 2);
            std::vector<classifiers::RnnSample> rs;
            for (const auto& [s, y] : samples) rs.push_back({proto.encode(s.record->text, &s.layout), y});
            lc.rnn = classifiers::train_rnn(rs, rc).model;
        } else {
            std::vector<classifiers::Row> x;
            std::vector<int> y;
            for (const auto& [s, label] : samples) {
                x.push_back(lc.row(*s.record, s.layout));
                y.push_back(label);
            }
            if (lc.kind == "svm") {
                lc.svm = classifiers::train_linear_svm(x, y, {cfg.svm_epochs, cfg.svm_learning_rate, cfg.svm_l2, cfg.seed});
            } else if (lc.kind == "dt") {
                lc.dt = classifiers::train_decision_tree(x, y, {cfg.dt_max_depth, cfg.dt_min_leaf});
            } else {
                lc.nb = classifiers::train_naive_bayes(x, y, cfg.nb_smoothing);
            }
        }

        // Section level model over gold header text.
        std::vector<std::pair<classifiers::RnnSample, int>> hs;
        const auto proto = classifiers::RnnModel::zeros(classifiers::RnnInputMode::Text, cfg.rnn_hidden, 3);
        for (const auto& d : docs)
            for (const auto& l : d.lines)
                if (l.label != ingest::LineLabel::RegularText) {
                    const int y = ingest::to_int(l.label) - 1;
                    hs.push_back({{proto.encode(l.record.text), y}, y});
                }
        if (hs.empty()) throw StageError("gold CSV has no header lines");
        if (cfg.section_balance) hs = classifiers::balance_dataset(hs, cfg.seed);
        classifiers::RnnConfig sc;
        sc.n_classes = 3;
        sc.hidden_size = cfg.rnn_hidden;
        sc.epochs = cfg.section_epochs;
        sc.batch_size = cfg.rnn_batch;
        sc.learning_rate = cfg.section_learning_rate;
        sc.clip_norm = cfg.rnn_clip;
        sc.seed = cfg.seed;
        const auto section_model = classifiers::train_rnn(to_rnn_samples(hs), sc).model;
        json sj = section_model.to_json();
        sj["seed"] = cfg.seed;

        outputs.push_back(dir / "line_model.json");
        write_atomic(outputs.back(), dump(lc.to_json()));
        outputs.push_back(dir / "section_model.json");
        write_atomic(outputs.back(), dump(sj));

        // Topic model over top-level section bodies.
        std::vector<semantics::Tokens> sections;
        for (const auto& d : docs)
            for (auto& t : top_level_bodies(d)) sections.push_back(std::move(t));
        const auto dict = semantics::build_dictionary(sections, {cfg.lda_min_docs, cfg.lda_max_fraction, cfg.lda_keep_n});
        semantics::LdaOptions lo;
        lo.topics = cfg.lda_topics;
        lo.passes = cfg.lda_passes;
        lo.alpha = cfg.lda_alpha;
        lo.beta = cfg.lda_beta;
        lo.seed = cfg.seed;
        const auto lda = semantics::train_lda(sections, dict, lo);
        outputs.push_back(dir / "lda.json");
        write_atomic(outputs.back(), dump(lda.to_json()));
    } catch (const std::invalid_argument& e) {
        throw StageError(std::string("train: ") + e.what());
    }
    write_manifest(cfg, "train", outputs);
}

void cmd_classify(const PipelineConfig& cfg) {
    const auto docs = read_records(input_or(cfg, "lines.jsonl"));
    const auto lc = load_line_classifier(cfg);
    const json sj = read_json(cfg.models() / "section_model.json", "section model");
    const auto section_model = classifiers::RnnModel::from_json(sj);

    std::vector<ingest::LabeledDocument> out;
    for (const auto& doc : docs) {
        ingest::LabeledDocument ld;
        ld.file_id = doc.file_id;
        const auto feats = features::extract_document_features(doc.lines, lc.vocab);
        std::vector<std::size_t> header_pos;
        std::vector<std::string> header_text;
        for (std::size_t i = 0; i < doc.lines.size(); ++i) {
            ld.lines.push_back({doc.lines[i], ingest::LineLabel::RegularText});
            if (lc.predict(doc.lines[i], feats[i]) == 1) {
                header_pos.push_back(i);
                header_text.push_back(doc.lines[i].text);
            }
        }
        const auto levels = sectioning::classify_section_levels(header_text, section_model);
        std::vector<sectioning::LevelAssignment> assigned;
        for (std::size_t k = 0; k < levels.size(); ++k) assigned.push_back({header_pos[k], levels[k]});
        for (const auto& a : sectioning::repair_level_sequence(assigned))
            ld.lines[a.line_index].label = ingest::label_from_int(a.level);
        out.push_back(std::move(ld));
    }
    std::ostringstream csv;
    ingest::write_gold_csv(csv, out);
    const fs::path path = cfg.out_dir() / "classified.csv";
    write_atomic(path, csv.str());
    write_manifest(cfg, "classify", {path});
}

void cmd_toc(const PipelineConfig& cfg) {
    const auto level = parse_split_level(cfg.split_level);
    const auto docs = read_labeled(input_or(cfg, "classified.csv"), "classified lines");
    ordered_json jdocs = ordered_json::array();
    std::string txt;
    for (const auto& d : docs) {
        const auto lines = labeled_text(d);
        const auto tree = sectioning::split_document(lines, level);
        jdocs.push_back({{"file_id", d.file_id}, {"sections", sectioning::to_json(tree)}});
        if (!txt.empty()) txt += "\n";
        txt += "== " + d.file_id + " ==\n" + sectioning::build_toc(tree).render();
    }
    ordered_json j = {{"seed", cfg.seed}, {"split_level", sectioning::to_string(level)}, {"documents", jdocs}};
    const fs::path jp = cfg.out_dir() / "toc.json", tp = cfg.out_dir() / "toc.txt";
    write_atomic(jp, dump(j));
    write_atomic(tp, txt);
    write_manifest(cfg, "toc", {jp, tp});
}

void cmd_label(const PipelineConfig& cfg) {
    const auto docs = read_labeled(input_or(cfg, "classified.csv"), "classified lines");
    const auto lda = semantics::LdaModel::from_json(read_json(cfg.models() / "lda.json", "topic model"));
    std::string out;
    std::size_t id = 0;
    for (const auto& d : docs) {
        for (const auto& s : report_sections(d, 1)) {
            if (s.path == "0") continue;
            const auto tokens = semantics::tokenize_section(s.body);
            const auto theta = semantics::infer_topics(lda, tokens);
            const auto label = semantics::label_section(lda, theta, cfg.label_terms, id++);
            ordered_json terms = ordered_json::array();
            for (const auto& [term, p] : label.terms) terms.push_back({{"term", term}, {"probability", p}});
            ordered_json j = {{"section_path", d.file_id + "#" + s.path},
                              {"topic", label.topic},
                              {"label", label.label},
                              {"terms", terms}};
            out += j.dump() + "\n";
        }
    }
    const fs::path path = cfg.out_dir() / "labels.jsonl";
    write_atomic(path, out);
    write_manifest(cfg, "label", {path});
}

void cmd_summarize(const PipelineConfig& cfg) {
    if (!(cfg.summary_ratio > 0.0 && cfg.summary_ratio <= 1.0)) throw StageError("summary_ratio must be in (0, 1]");
    const int level = static_cast<int>(parse_split_level(cfg.split_level));
    const auto docs = read_labeled(input_or(cfg, "classified.csv"), "classified lines");
    std::string out;
    for (const auto& d : docs) {
        for (const auto& s : report_sections(d, level)) {
            const std::string summary =
                summarize::split_sentences(s.body).empty() ? "" : summarize::summarize(s.body, cfg.summary_ratio).text;
            ordered_json j = {{"section_path", d.file_id + "#" + s.path}, {"summary", summary}};
            out += j.dump() + "\n";
        }
    }
    const fs::path path = cfg.out_dir() / "summaries.jsonl";
    write_atomic(path, out);
    write_manifest(cfg, "summarize", {path});
}

void cmd_eval(const PipelineConfig& cfg, std::ostream& report) {
    const auto predicted = read_labeled(input_or(cfg, "classified.csv"), "classified lines");
    const fs::path gold_path = cfg.gold.empty() ? cfg.out_dir() / "gold.csv" : fs::path(cfg.gold);
    const auto gold = read_labeled(gold_path, "gold CSV");

    std::optional<std::vector<std::string>> test_ids;
    if (const fs::path sp = cfg.models() / "split.json"; fs::is_regular_file(sp))
        test_ids = read_json(sp, "split").at("test").get<std::vector<std::string>>();

    std::map<std::pair<std::string, long>, int> pred_by_line;
    for (const auto& d : predicted)
        for (const auto& l : d.lines) pred_by_line[{d.file_id, l.record.line_index}] = ingest::to_int(l.label);

    std::vector<std::pair<int, int>> lines, headers;  // (predicted, gold)
    for (const auto& d : gold) {
        if (test_ids && std::find(test_ids->begin(), test_ids->end(), d.file_id) == test_ids->end()) continue;
        for (const auto& l : d.lines) {
            const auto it = pred_by_line.find({d.file_id, l.record.line_index});
            if (it == pred_by_line.end())
                throw StageError("predictions lack line " + std::to_string(l.record.line_index) + " of " + d.file_id);
            const int g = ingest::to_int(l.label);
            lines.push_back({it->second, g});
            if (g > 0) headers.push_back({it->second, g});
        }
    }
    if (lines.empty()) throw StageError("no gold lines to evaluate");

    auto metrics = [](const std::vector<std::pair<int, int>>& pairs, bool binary) {
        std::vector<int> p, g;
        for (const auto& [a, b] : pairs) {
            p.push_back(binary ? a > 0 : a);
            g.push_back(binary ? b > 0 : b);
        }
        return eval::compute_metrics(p, g);
    };
    auto balanced = [&](const std::vector<std::pair<int, int>>& pairs, bool binary) {
        std::vector<std::pair<int, int>> keyed;
        for (const auto& [a, b] : pairs) keyed.push_back({a, binary ? b > 0 : b});
        return classifiers::balance_dataset(keyed, cfg.seed);
    };

    const std::vector<std::string> line_names = {"text", "header"};
    const std::vector<std::string> level_names = {"none", "top_level", "subsection", "sub_subsection"};
    ordered_json j = {{"seed", cfg.seed}};
    std::string txt;
    auto add = [&](const std::string& name, const std::vector<std::pair<int, int>>& pairs, bool binary,
                   const std::vector<std::string>& names) {
        if (pairs.empty()) return;
        const auto unbal = metrics(pairs, binary);
        const auto bal = metrics(balanced(pairs, binary), binary);
        j[name] = {{"unbalanced", unbal.to_json()}, {"balanced", bal.to_json()}};
        txt += name + " (unbalanced, n=" + std::to_string(pairs.size()) + ")\n" + unbal.table(names) + "\n";
        txt += name + " (balanced)\n" + bal.table(names) + "\n";
    };
    add("line_classification", lines, true, line_names);
    add("section_classification", headers, false, level_names);

    const fs::path jp = cfg.out_dir() / "metrics.json", tp = cfg.out_dir() / "metrics.txt";
    write_atomic(jp, dump(j));
    write_atomic(tp, txt);
    write_manifest(cfg, "eval", {jp, tp});
    report << txt;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Document structure pipeline: line classification, TOC, topic labels and summaries"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    app.add_option("--config", config_path, "key = value config file");
    std::map<std::string, std::string> flags;
    for (const auto& key : config_keys()) {
        std::string flag = key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        app.add_option("--" + flag, flags[key], "config key " + key);
    }
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"generate", "write a synthetic corpus: lines.jsonl, gold.csv, plan.json"},
        {"train", "train line, section level and topic models from a gold CSV"},
        {"classify", "label line records; writes classified.csv"},
        {"toc", "build section trees; writes toc.json and toc.txt"},
        {"label", "assign topic labels to top-level sections; writes labels.jsonl"},
        {"summarize", "extractive section summaries; writes summaries.jsonl"},
        {"eval", "compare predictions with gold; writes metrics.json and metrics.txt"},
    };
    for (const auto& [name, help] : commands) app.add_subcommand(name, help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    PipelineConfig cfg;
    try {
        if (!config_path.empty()) apply_config_file(cfg, config_path);
        for (const auto& key : config_keys()) {
            std::string flag = key;
            std::replace(flag.begin(), flag.end(), '_', '-');
            if (app.count("--" + flag) > 0) set_config_value(cfg, key, flags[key]);
        }
        const std::string cmd = app.get_subcommands().front()->get_name();
        if (cmd == "generate") cmd_generate(cfg);
        else if (cmd == "train") cmd_train(cfg);
        else if (cmd == "classify") cmd_classify(cfg);
        else if (cmd == "toc") cmd_toc(cfg);
        else if (cmd == "label") cmd_label(cfg);
        else if (cmd == "summarize") cmd_summarize(cfg);
        else cmd_eval(cfg, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace docstruct::cli
