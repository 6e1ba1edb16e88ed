#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdla/dataset.hpp"

namespace pdla {

struct LstmError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dense row-major matrix, just enough for a small LSTM.
struct Tensor {
    std::size_t rows = 0, cols = 0;
    std::vector<double> data;

    Tensor() = default;
    Tensor(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    bool operator==(const Tensor&) const = default;
};

/// Gate weights are hidden x (hidden + vocab); inputs are one-hot tokens.
struct LstmParams {
    std::size_t hidden_size = 0;
    std::size_t vocab_size = 0;
    Tensor w_input, w_forget, w_output, w_cell;    // gate weights
    std::vector<double> b_input, b_forget, b_output, b_cell;
    Tensor w_proj;                                  // vocab x hidden
    std::vector<double> b_proj;

    bool operator==(const LstmParams&) const = default;
};

struct LstmTrainConfig {
    double learning_rate = 0.01;
    double l2_strength = 1e-6;
    double clip_value = 0.05;
    double softmax_temperature = 0.1;
    int epochs = 100;
    std::uint64_t seed = 0;
};

/// Per-step activations kept for backpropagation through time.
struct ForwardCache {
    std::vector<int> tokens;
    std::vector<std::vector<double>> hidden, cell;
    std::vector<std::vector<double>> gate_i, gate_f, gate_o, gate_g;
    std::vector<std::vector<double>> probs;  // softmax outputs per step
};

LstmParams init_params(std::size_t hidden_size, std::size_t vocab_size, std::uint64_t seed);

/// Standard LSTM recurrence with one-hot inputs; softmax distribution per
/// step. Throws on out-of-range tokens.
ForwardCache forward(const LstmParams& params, const std::vector<int>& tokens);

/// Mean next-token cross-entropy over the sequence plus raw (unclipped,
/// no-L2) gradients. The gradient tensors mirror LstmParams.
struct LossAndGrads {
    double loss = 0.0;
    LstmParams grads;
};
LossAndGrads loss_and_grads(const LstmParams& params, const std::vector<int>& sequence);

/// SGD with elementwise gradient clipping and L2 weight decay. Returns the
/// per-epoch mean loss. Throws on a non-finite loss.
std::vector<double> train(LstmParams& params, const std::vector<std::vector<int>>& corpus,
                          const LstmTrainConfig& cfg);

/// Autoregressive sampling from the temperature-scaled softmax.
std::vector<int> sample(const LstmParams& params, const std::vector<int>& prime,
                        std::size_t length, double temperature, std::uint64_t seed);

/// Per-column min-max binning of feature rows into token ids (5 bins by
/// default, matching the baseline's character size).
class FeatureTokenizer {
public:
    FeatureTokenizer(const ExemplarSet& training_set, std::size_t n_bins = 5);

    std::vector<int> tokenize(const std::vector<double>& features) const;
    /// Maps tokens back to bin-center feature values (one token per column).
    std::vector<double> detokenize(const std::vector<int>& tokens) const;
    std::size_t n_bins() const { return n_bins_; }

private:
    std::size_t n_bins_;
    std::vector<double> col_min_, col_max_;
};

}  // namespace pdla
