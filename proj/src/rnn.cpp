#include "docstruct/classifiers/rnn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "docstruct/random.hpp"

namespace docstruct::classifiers {

namespace {

std::string printable_ascii() {
    std::string s;
    for (int c = 0x20; c <= 0x7e; ++c) s.push_back(static_cast<char>(c));
    return s;
}

}  // namespace

Alphabet::Alphabet() : Alphabet(printable_ascii()) {}

Alphabet::Alphabet(std::string chars) : chars_(std::move(chars)) {
    lookup_.fill(-1);
    for (std::size_t i = 0; i < chars_.size(); ++i) {
        auto& slot = lookup_[static_cast<unsigned char>(chars_[i])];
        if (slot >= 0) throw std::invalid_argument("alphabet contains a duplicate character");
        slot = static_cast<int>(i);
    }
}

std::size_t Alphabet::index(char c) const {
    const int i = lookup_[static_cast<unsigned char>(c)];
    return i < 0 ? unk() : static_cast<std::size_t>(i);
}

std::vector<std::vector<double>> OneHotSequence::dense() const {
    std::vector<std::vector<double>> out;
    for (std::size_t i : indices) {
        std::vector<double> v(width, 0.0);
        v[i] = 1.0;
        out.push_back(std::move(v));
    }
    return out;
}

OneHotSequence one_hot_encode(std::string_view text, const Alphabet& alphabet, std::size_t max_len) {
    OneHotSequence seq;
    seq.width = alphabet.size();
    for (char c : text) {
        if (seq.indices.size() == max_len) return seq;
        seq.indices.push_back(alphabet.index(c));
    }
    if (seq.indices.size() < max_len) seq.indices.push_back(alphabet.eos());
    return seq;
}

const char* to_string(RnnInputMode mode) {
    switch (mode) {
        case RnnInputMode::Text: return "text";
        case RnnInputMode::Layout: return "layout";
        case RnnInputMode::Combined: return "combined";
    }
    return "text";
}

RnnInputMode rnn_input_mode_from_string(std::string_view s) {
    if (s == "text") return RnnInputMode::Text;
    if (s == "layout") return RnnInputMode::Layout;
    if (s == "combined") return RnnInputMode::Combined;
    throw std::invalid_argument("unknown rnn input mode '" + std::string(s) + "'");
}

InputSequence make_rnn_input(RnnInputMode mode, const Alphabet& alphabet, std::string_view text,
                             const features::LayoutFeatures* layout, std::size_t max_len) {
    InputSequence seq;
    std::size_t offset = 0;
    if (mode != RnnInputMode::Text) {
        if (!layout) throw std::invalid_argument("rnn input mode '" + std::string(to_string(mode)) +
                                                 "' needs layout features");
        const auto enc = layout->encode();
        for (std::size_t k = 0; k < enc.size(); ++k) seq.push_back({k, enc[k]});
        offset = features::kLayoutFeatureCount;
    }
    if (mode != RnnInputMode::Layout) {
        for (std::size_t i : one_hot_encode(text, alphabet, max_len).indices) seq.push_back({offset + i, 1.0});
    }
    return seq;
}

std::size_t RnnModel::input_size() const {
    switch (mode) {
        case RnnInputMode::Text: return alphabet.size();
        case RnnInputMode::Layout: return features::kLayoutFeatureCount;
        case RnnInputMode::Combined: return features::kLayoutFeatureCount + alphabet.size();
    }
    return alphabet.size();
}

RnnModel RnnModel::zeros(RnnInputMode mode, std::size_t hidden_size, std::size_t n_classes, Alphabet alphabet,
                         std::size_t max_len) {
    RnnModel m;
    m.mode = mode;
    m.alphabet = std::move(alphabet);
    m.max_len = max_len;
    m.hidden_size = hidden_size;
    m.n_classes = n_classes;
    m.w_xh = Matrix(hidden_size, m.input_size());
    m.w_hh = Matrix(hidden_size, hidden_size);
    m.b_h = Matrix(hidden_size, 1);
    m.w_hy = Matrix(n_classes, hidden_size);
    m.b_y = Matrix(n_classes, 1);
    return m;
}

InputSequence RnnModel::encode(std::string_view text, const features::LayoutFeatures* layout) const {
    return make_rnn_input(mode, alphabet, text, layout, max_len);
}

std::vector<double> RnnModel::probabilities(const InputSequence& seq) const { return rnn_forward(*this, seq); }

int RnnModel::predict(const InputSequence& seq) const {
    const auto p = rnn_forward(*this, seq);
    return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

std::vector<Matrix*> RnnModel::parameters() { return {&w_xh, &w_hh, &b_h, &w_hy, &b_y}; }
std::vector<const Matrix*> RnnModel::parameters() const { return {&w_xh, &w_hh, &b_h, &w_hy, &b_y}; }

namespace {

void check_shapes(const RnnModel& m) {
    const std::size_t h = m.hidden_size;
    if (m.w_xh.rows != h || m.w_xh.cols != m.input_size() || m.w_hh.rows != h || m.w_hh.cols != h ||
        m.b_h.rows != h || m.b_h.cols != 1 || m.w_hy.rows != m.n_classes || m.w_hy.cols != h ||
        m.b_y.rows != m.n_classes || m.b_y.cols != 1)
        throw std::invalid_argument("rnn: parameter shapes are inconsistent");
}

// Hidden states h_0..h_T (h_0 = 0) and output probabilities for one sequence.
struct Trace {
    std::vector<std::vector<double>> h;
    std::vector<double> p;
};

Trace run(const RnnModel& m, const InputSequence& seq) {
    if (seq.empty()) throw std::invalid_argument("rnn: empty input sequence");
    const std::size_t hs = m.hidden_size;
    const std::size_t in = m.input_size();
    Trace tr;
    tr.h.reserve(seq.size() + 1);
    tr.h.emplace_back(hs, 0.0);
    std::vector<double> a(hs);
    for (const auto& step : seq) {
        if (step.slot >= in) throw std::invalid_argument("rnn: input slot out of range");
        const auto& prev = tr.h.back();
        for (std::size_t i = 0; i < hs; ++i) {
            double s = m.b_h.data[i] + step.value * m.w_xh(i, step.slot);
            const double* row = &m.w_hh.data[i * hs];
            for (std::size_t j = 0; j < hs; ++j) s += row[j] * prev[j];
            a[i] = std::tanh(s);
        }
        tr.h.push_back(a);
    }
    const auto& last = tr.h.back();
    tr.p.assign(m.n_classes, 0.0);
    for (std::size_t c = 0; c < m.n_classes; ++c) {
        double s = m.b_y.data[c];
        for (std::size_t j = 0; j < hs; ++j) s += m.w_hy(c, j) * last[j];
        tr.p[c] = s;
    }
    const double top = *std::max_element(tr.p.begin(), tr.p.end());
    double z = 0.0;
    for (double& v : tr.p) {
        v = std::exp(v - top);
        z += v;
    }
    for (double& v : tr.p) v /= z;
    return tr;
}

double cross_entropy(const std::vector<double>& p, int label) {
    return -std::log(std::max(p[static_cast<std::size_t>(label)], 1e-300));
}

}  // namespace

std::vector<double> rnn_forward(const RnnModel& model, const InputSequence& seq) {
    check_shapes(model);
    return run(model, seq).p;
}

RnnGradients::RnnGradients(const RnnModel& m)
    : w_xh(m.w_xh.rows, m.w_xh.cols),
      w_hh(m.w_hh.rows, m.w_hh.cols),
      b_h(m.b_h.rows, 1),
      w_hy(m.w_hy.rows, m.w_hy.cols),
      b_y(m.b_y.rows, 1) {}

double rnn_loss(const RnnModel& model, std::span<const RnnSample> batch) {
    check_shapes(model);
    if (batch.empty()) throw std::invalid_argument("rnn: empty batch");
    double loss = 0.0;
    for (const auto& s : batch) loss += cross_entropy(run(model, s.input).p, s.label);
    return loss / static_cast<double>(batch.size());
}

double rnn_loss_and_gradients(const RnnModel& model, std::span<const RnnSample> batch, RnnGradients& g) {
    check_shapes(model);
    if (batch.empty()) throw std::invalid_argument("rnn: empty batch");
    for (Matrix* p : g.parameters()) std::fill(p->data.begin(), p->data.end(), 0.0);

    const std::size_t hs = model.hidden_size;
    const double scale = 1.0 / static_cast<double>(batch.size());
    double loss = 0.0;
    std::vector<double> dh(hs), da(hs), dprev(hs);
    for (const auto& sample : batch) {
        if (sample.label < 0 || static_cast<std::size_t>(sample.label) >= model.n_classes)
            throw std::invalid_argument("rnn: label out of range");
        const Trace tr = run(model, sample.input);
        loss += cross_entropy(tr.p, sample.label);

        // Output layer.
        const auto& last = tr.h.back();
        std::fill(dh.begin(), dh.end(), 0.0);
        for (std::size_t c = 0; c < model.n_classes; ++c) {
            const double dz = (tr.p[c] - (static_cast<int>(c) == sample.label ? 1.0 : 0.0)) * scale;
            g.b_y.data[c] += dz;
            for (std::size_t j = 0; j < hs; ++j) {
                g.w_hy(c, j) += dz * last[j];
                dh[j] += model.w_hy(c, j) * dz;
            }
        }
        // Back through time.
        for (std::size_t t = sample.input.size(); t >= 1; --t) {
            const auto& h = tr.h[t];
            const auto& hp = tr.h[t - 1];
            const auto& step = sample.input[t - 1];
            for (std::size_t i = 0; i < hs; ++i) da[i] = dh[i] * (1.0 - h[i] * h[i]);
            std::fill(dprev.begin(), dprev.end(), 0.0);
            for (std::size_t i = 0; i < hs; ++i) {
                const double d = da[i];
                if (d == 0.0) continue;
                g.b_h.data[i] += d;
                g.w_xh(i, step.slot) += d * step.value;
                double* grow = &g.w_hh.data[i * hs];
                const double* wrow = &model.w_hh.data[i * hs];
                for (std::size_t j = 0; j < hs; ++j) {
                    grow[j] += d * hp[j];
                    dprev[j] += wrow[j] * d;
                }
            }
            std::swap(dh, dprev);
        }
    }
    return loss * scale;
}

RnnModel init_rnn(const RnnConfig& config, const Alphabet& alphabet) {
    if (config.n_classes < 2) throw std::invalid_argument("rnn needs at least 2 classes");
    if (config.hidden_size == 0) throw std::invalid_argument("rnn hidden size must be positive");
    RnnModel m = RnnModel::zeros(config.mode, config.hidden_size, config.n_classes, alphabet, config.max_len);
    Rng rng(config.seed);
    auto fill = [&](Matrix& w, double limit) {
        for (double& v : w.data) v = rng.uniform(-limit, limit);
    };
    const double h = static_cast<double>(config.hidden_size);
    fill(m.w_xh, std::sqrt(6.0 / (static_cast<double>(m.input_size()) + h)));
    fill(m.w_hh, 1.0 / std::sqrt(h));
    fill(m.w_hy, std::sqrt(6.0 / (h + static_cast<double>(config.n_classes))));
    return m;
}

RnnTrainingResult train_rnn(std::span<const RnnSample> samples, const RnnConfig& config, const Alphabet& alphabet) {
    if (samples.empty()) throw std::invalid_argument("train_rnn: empty training set");
    if (config.batch_size == 0) throw std::invalid_argument("train_rnn: batch size must be positive");
    RnnTrainingResult result{init_rnn(config, alphabet), {}, {}};
    RnnModel& model = result.model;

    std::vector<Matrix> m1, m2;
    for (const Matrix* p : std::as_const(model).parameters()) {
        m1.emplace_back(p->rows, p->cols);
        m2.emplace_back(p->rows, p->cols);
    }
    RnnGradients grads(model);
    Rng rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<RnnSample> batch;
    double step = 0.0;

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            batch.clear();
            for (std::size_t k = start; k < std::min(order.size(), start + config.batch_size); ++k)
                batch.push_back(samples[order[k]]);
            const double loss = rnn_loss_and_gradients(model, batch, grads);
            result.step_losses.push_back(loss);
            epoch_loss += loss;
            ++batches;

            auto gp = grads.parameters();
            if (config.clip_norm > 0.0) {
                double sq = 0.0;
                for (const Matrix* g : gp)
                    for (double v : g->data) sq += v * v;
                const double norm = std::sqrt(sq);
                if (norm > config.clip_norm)
                    for (Matrix* g : gp)
                        for (double& v : g->data) v *= config.clip_norm / norm;
            }

            step += 1.0;
            const double c1 = 1.0 - std::pow(config.beta1, step);
            const double c2 = 1.0 - std::pow(config.beta2, step);
            auto params = model.parameters();
            for (std::size_t p = 0; p < params.size(); ++p) {
                auto& w = params[p]->data;
                const auto& g = gp[p]->data;
                auto& mm = m1[p].data;
                auto& vv = m2[p].data;
                for (std::size_t i = 0; i < w.size(); ++i) {
                    mm[i] = config.beta1 * mm[i] + (1.0 - config.beta1) * g[i];
                    vv[i] = config.beta2 * vv[i] + (1.0 - config.beta2) * g[i] * g[i];
                    w[i] -= config.learning_rate * (mm[i] / c1) / (std::sqrt(vv[i] / c2) + config.epsilon);
                }
            }
        }
        result.epoch_losses.push_back(epoch_loss / static_cast<double>(batches));
    }
    return result;
}

nlohmann::json RnnModel::to_json() const {
    return {{"format", "docstruct.model"},
            {"version", 1},
            {"type", "rnn"},
            {"mode", to_string(mode)},
            {"alphabet", alphabet.chars()},
            {"max_len", max_len},
            {"hidden_size", hidden_size},
            {"n_classes", n_classes},
            {"w_xh", docstruct::to_json(w_xh)},
            {"w_hh", docstruct::to_json(w_hh)},
            {"b_h", docstruct::to_json(b_h)},
            {"w_hy", docstruct::to_json(w_hy)},
            {"b_y", docstruct::to_json(b_y)}};
}

RnnModel RnnModel::from_json(const nlohmann::json& j) {
    if (j.at("type") != "rnn") throw std::runtime_error("model document is not an rnn");
    RnnModel m;
    m.mode = rnn_input_mode_from_string(j.at("mode").get<std::string>());
    m.alphabet = Alphabet(j.at("alphabet").get<std::string>());
    m.max_len = j.at("max_len").get<std::size_t>();
    m.hidden_size = j.at("hidden_size").get<std::size_t>();
    m.n_classes = j.at("n_classes").get<std::size_t>();
    m.w_xh = matrix_from_json(j.at("w_xh"));
    m.w_hh = matrix_from_json(j.at("w_hh"));
    m.b_h = matrix_from_json(j.at("b_h"));
    m.w_hy = matrix_from_json(j.at("w_hy"));
    m.b_y = matrix_from_json(j.at("b_y"));
    check_shapes(m);
    return m;
}

}  // namespace docstruct::classifiers
