#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "docstruct/features.hpp"
#include "docstruct/matrix.hpp"

namespace docstruct::classifiers {

/// Ordered character set plus two reserved symbols: UNK for characters
/// outside the set and EOS marking the end of a line.
class Alphabet {
public:
    /// Printable ASCII (0x20..0x7e).
    Alphabet();
    explicit Alphabet(std::string chars);

    std::size_t size() const { return chars_.size() + 2; }
    std::size_t unk() const { return chars_.size(); }
    std::size_t eos() const { return chars_.size() + 1; }
    std::size_t index(char c) const;
    const std::string& chars() const { return chars_; }

    bool operator==(const Alphabet& o) const { return chars_ == o.chars_; }

private:
    std::string chars_;
    std::array<int, 256> lookup_{};
};

inline constexpr std::size_t kMaxSequenceLength = 100;

struct OneHotSequence {
    std::size_t width = 0;
    std::vector<std::size_t> indices;  // hot position per timestep

    std::vector<std::vector<double>> dense() const;
};

/// Characters followed by EOS; sequences are cut at max_len positions, in
/// which case no EOS is emitted.
OneHotSequence one_hot_encode(std::string_view text, const Alphabet& alphabet,
                              std::size_t max_len = kMaxSequenceLength);

/// One timestep of network input: `value` at input slot `slot`, zero elsewhere.
struct InputStep {
    std::size_t slot = 0;
    double value = 1.0;
};
using InputSequence = std::vector<InputStep>;

/// text: character one-hots. layout: 16 pseudo-timesteps, feature k placed
/// in its own slot. combined: the 16 layout steps followed by the characters,
/// character slots offset by 16.
enum class RnnInputMode { Text, Layout, Combined };

const char* to_string(RnnInputMode mode);
RnnInputMode rnn_input_mode_from_string(std::string_view s);

/// Many-to-one Elman network:
///   h_0 = 0, h_t = tanh(W_xh s_t + W_hh h_{t-1} + b_h),
///   p = softmax(W_hy h_T + b_y).
struct RnnModel {
    RnnInputMode mode = RnnInputMode::Text;
    Alphabet alphabet;
    std::size_t max_len = kMaxSequenceLength;
    std::size_t hidden_size = 20;
    std::size_t n_classes = 2;

    Matrix w_xh;  // hidden x input
    Matrix w_hh;  // hidden x hidden
    Matrix b_h;   // hidden x 1
    Matrix w_hy;  // classes x hidden
    Matrix b_y;   // classes x 1

    std::size_t input_size() const;

    /// Zero-initialised parameters with consistent shapes.
    static RnnModel zeros(RnnInputMode mode, std::size_t hidden_size, std::size_t n_classes,
                          Alphabet alphabet = Alphabet(), std::size_t max_len = kMaxSequenceLength);

    InputSequence encode(std::string_view text, const features::LayoutFeatures* layout = nullptr) const;

    std::vector<double> probabilities(const InputSequence& seq) const;
    int predict(const InputSequence& seq) const;

    std::vector<Matrix*> parameters();
    std::vector<const Matrix*> parameters() const;

    nlohmann::json to_json() const;
    static RnnModel from_json(const nlohmann::json& j);
};

/// Builds network input for a line. Layout features are required for the
/// layout and combined modes.
InputSequence make_rnn_input(RnnInputMode mode, const Alphabet& alphabet, std::string_view text,
                             const features::LayoutFeatures* layout, std::size_t max_len = kMaxSequenceLength);

/// Class probabilities. Throws std::invalid_argument on an empty sequence,
/// an out-of-range slot or inconsistent parameter shapes.
std::vector<double> rnn_forward(const RnnModel& model, const InputSequence& seq);

struct RnnSample {
    InputSequence input;
    int label = 0;
};

/// Gradients share the model's parameter shapes (w_xh, w_hh, b_h, w_hy, b_y).
struct RnnGradients {
    Matrix w_xh, w_hh, b_h, w_hy, b_y;

    explicit RnnGradients(const RnnModel& m);
    std::vector<Matrix*> parameters() { return {&w_xh, &w_hh, &b_h, &w_hy, &b_y}; }
};

/// Mean cross-entropy over the batch; gradients (of the mean) are written
/// into `grads`, which is overwritten.
double rnn_loss_and_gradients(const RnnModel& model, std::span<const RnnSample> batch, RnnGradients& grads);

/// Mean cross-entropy without gradients.
double rnn_loss(const RnnModel& model, std::span<const RnnSample> batch);

struct RnnConfig {
    RnnInputMode mode = RnnInputMode::Text;
    std::size_t hidden_size = 20;
    std::size_t max_len = kMaxSequenceLength;
    std::size_t n_classes = 2;
    std::size_t epochs = 10;
    std::size_t batch_size = 10;
    double learning_rate = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double clip_norm = 0.0;  // global gradient-norm cap; 0 disables
    std::uint64_t seed = 0;
};

struct RnnTrainingResult {
    RnnModel model;
    std::vector<double> step_losses;   // batch loss before each update
    std::vector<double> epoch_losses;  // mean of the epoch's batch losses
};

/// Seeded Glorot-style initialisation for the given configuration.
RnnModel init_rnn(const RnnConfig& config, const Alphabet& alphabet = Alphabet());

/// Backpropagation through time with Adam on shuffled mini-batches.
RnnTrainingResult train_rnn(std::span<const RnnSample> samples, const RnnConfig& config,
                            const Alphabet& alphabet = Alphabet());

}  // namespace docstruct::classifiers
