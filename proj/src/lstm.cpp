#include "pdla/lstm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace pdla {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Uniform double in [0, 1) from the top 53 bits of the generator output.
double next_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<double> softmax(const std::vector<double>& logits, double temperature) {
    std::vector<double> out(logits.size());
    double max_logit = *std::max_element(logits.begin(), logits.end());
    double total = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp((logits[i] - max_logit) / temperature);
        total += out[i];
    }
    for (double& v : out) v /= total;
    return out;
}

// y += W * z where z = [h_prev ; one_hot(token)]
void gate_preact(const Tensor& w, const std::vector<double>& bias,
                 const std::vector<double>& h_prev, int token, std::vector<double>& out) {
    const std::size_t hidden = h_prev.size();
    out = bias;
    for (std::size_t r = 0; r < w.rows; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < hidden; ++c) acc += w.at(r, c) * h_prev[c];
        acc += w.at(r, hidden + static_cast<std::size_t>(token));
        out[r] += acc;
    }
}

void for_each_tensor(LstmParams& p, auto&& fn) {
    fn(p.w_input);
    fn(p.w_forget);
    fn(p.w_output);
    fn(p.w_cell);
    fn(p.w_proj);
}

void for_each_bias(LstmParams& p, auto&& fn) {
    fn(p.b_input);
    fn(p.b_forget);
    fn(p.b_output);
    fn(p.b_cell);
    fn(p.b_proj);
}

}  // namespace

LstmParams init_params(std::size_t hidden_size, std::size_t vocab_size, std::uint64_t seed) {
    if (hidden_size < 1 || vocab_size < 1) throw LstmError("sizes must be >= 1");
    LstmParams p;
    p.hidden_size = hidden_size;
    p.vocab_size = vocab_size;
    const std::size_t z = hidden_size + vocab_size;
    p.w_input = Tensor(hidden_size, z);
    p.w_forget = Tensor(hidden_size, z);
    p.w_output = Tensor(hidden_size, z);
    p.w_cell = Tensor(hidden_size, z);
    p.w_proj = Tensor(vocab_size, hidden_size);
    p.b_input.assign(hidden_size, 0.0);
    p.b_forget.assign(hidden_size, 0.0);
    p.b_output.assign(hidden_size, 0.0);
    p.b_cell.assign(hidden_size, 0.0);
    p.b_proj.assign(vocab_size, 0.0);

    std::mt19937_64 rng(seed);
    for_each_tensor(p, [&rng](Tensor& t) {
        for (double& v : t.data) v = 0.01 * (2.0 * next_unit(rng) - 1.0);
    });
    return p;
}

ForwardCache forward(const LstmParams& params, const std::vector<int>& tokens) {
    const std::size_t hidden = params.hidden_size;
    for (int t : tokens) {
        if (t < 0 || static_cast<std::size_t>(t) >= params.vocab_size) {
            throw LstmError("token id out of range: " + std::to_string(t));
        }
    }
    ForwardCache cache;
    cache.tokens = tokens;
    std::vector<double> h(hidden, 0.0), c(hidden, 0.0);
    std::vector<double> i_pre, f_pre, o_pre, g_pre;
    for (int token : tokens) {
        gate_preact(params.w_input, params.b_input, h, token, i_pre);
        gate_preact(params.w_forget, params.b_forget, h, token, f_pre);
        gate_preact(params.w_output, params.b_output, h, token, o_pre);
        gate_preact(params.w_cell, params.b_cell, h, token, g_pre);
        std::vector<double> gi(hidden), gf(hidden), go(hidden), gg(hidden);
        std::vector<double> c_new(hidden), h_new(hidden);
        for (std::size_t k = 0; k < hidden; ++k) {
            gi[k] = sigmoid(i_pre[k]);
            gf[k] = sigmoid(f_pre[k]);
            go[k] = sigmoid(o_pre[k]);
            gg[k] = std::tanh(g_pre[k]);
            c_new[k] = gf[k] * c[k] + gi[k] * gg[k];
            h_new[k] = go[k] * std::tanh(c_new[k]);
        }
        std::vector<double> logits(params.b_proj);
        for (std::size_t r = 0; r < params.vocab_size; ++r) {
            for (std::size_t k = 0; k < hidden; ++k) {
                logits[r] += params.w_proj.at(r, k) * h_new[k];
            }
        }
        cache.gate_i.push_back(std::move(gi));
        cache.gate_f.push_back(std::move(gf));
        cache.gate_o.push_back(std::move(go));
        cache.gate_g.push_back(std::move(gg));
        cache.cell.push_back(c_new);
        cache.hidden.push_back(h_new);
        cache.probs.push_back(softmax(logits, 1.0));
        h = std::move(h_new);
        c = std::move(c_new);
    }
    return cache;
}

LossAndGrads loss_and_grads(const LstmParams& params, const std::vector<int>& sequence) {
    if (sequence.size() < 2) throw LstmError("sequence needs at least 2 tokens");
    const std::size_t hidden = params.hidden_size;
    const std::size_t steps = sequence.size() - 1;  // predict tokens 1..end
    std::vector<int> inputs(sequence.begin(), sequence.end() - 1);
    ForwardCache cache = forward(params, inputs);

    LossAndGrads result;
    result.grads = params;
    for_each_tensor(result.grads, [](Tensor& t) { std::fill(t.data.begin(), t.data.end(), 0.0); });
    for_each_bias(result.grads, [](std::vector<double>& b) { std::fill(b.begin(), b.end(), 0.0); });

    for (std::size_t t = 0; t < steps; ++t) {
        result.loss -= std::log(cache.probs[t][static_cast<std::size_t>(sequence[t + 1])]);
    }
    result.loss /= static_cast<double>(steps);

    std::vector<double> dh_next(hidden, 0.0), dc_next(hidden, 0.0);
    const std::vector<double> zeros(hidden, 0.0);
    const double inv_steps = 1.0 / static_cast<double>(steps);
    for (std::size_t t = steps; t-- > 0;) {
        // output layer
        std::vector<double> dlogits = cache.probs[t];
        dlogits[static_cast<std::size_t>(sequence[t + 1])] -= 1.0;
        for (double& v : dlogits) v *= inv_steps;

        std::vector<double> dh = dh_next;
        for (std::size_t r = 0; r < params.vocab_size; ++r) {
            result.grads.b_proj[r] += dlogits[r];
            for (std::size_t k = 0; k < hidden; ++k) {
                result.grads.w_proj.at(r, k) += dlogits[r] * cache.hidden[t][k];
                dh[k] += params.w_proj.at(r, k) * dlogits[r];
            }
        }

        const std::vector<double>& c_prev = t > 0 ? cache.cell[t - 1] : zeros;
        const std::vector<double>& h_prev = t > 0 ? cache.hidden[t - 1] : zeros;

        std::vector<double> dc(hidden), di(hidden), df(hidden), dO(hidden), dg(hidden);
        for (std::size_t k = 0; k < hidden; ++k) {
            double tanh_c = std::tanh(cache.cell[t][k]);
            dc[k] = dh[k] * cache.gate_o[t][k] * (1.0 - tanh_c * tanh_c) + dc_next[k];
            dO[k] = dh[k] * tanh_c * cache.gate_o[t][k] * (1.0 - cache.gate_o[t][k]);
            di[k] = dc[k] * cache.gate_g[t][k] * cache.gate_i[t][k] * (1.0 - cache.gate_i[t][k]);
            df[k] = dc[k] * c_prev[k] * cache.gate_f[t][k] * (1.0 - cache.gate_f[t][k]);
            dg[k] = dc[k] * cache.gate_i[t][k] * (1.0 - cache.gate_g[t][k] * cache.gate_g[t][k]);
            dc_next[k] = dc[k] * cache.gate_f[t][k];
        }

        std::fill(dh_next.begin(), dh_next.end(), 0.0);
        auto accumulate_gate = [&](const Tensor& w, Tensor& gw, std::vector<double>& gb,
                                   const std::vector<double>& dgate) {
            const std::size_t token_col = hidden + static_cast<std::size_t>(inputs[t]);
            for (std::size_t r = 0; r < hidden; ++r) {
                gb[r] += dgate[r];
                for (std::size_t c = 0; c < hidden; ++c) {
                    gw.at(r, c) += dgate[r] * h_prev[c];
                    dh_next[c] += w.at(r, c) * dgate[r];
                }
                gw.at(r, token_col) += dgate[r];
            }
        };
        accumulate_gate(params.w_input, result.grads.w_input, result.grads.b_input, di);
        accumulate_gate(params.w_forget, result.grads.w_forget, result.grads.b_forget, df);
        accumulate_gate(params.w_output, result.grads.w_output, result.grads.b_output, dO);
        accumulate_gate(params.w_cell, result.grads.w_cell, result.grads.b_cell, dg);
    }
    return result;
}

std::vector<double> train(LstmParams& params, const std::vector<std::vector<int>>& corpus,
                          const LstmTrainConfig& cfg) {
    if (corpus.empty()) throw LstmError("empty training corpus");
    std::vector<double> epoch_losses;
    epoch_losses.reserve(static_cast<std::size_t>(cfg.epochs));
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        double total = 0.0;
        for (const std::vector<int>& sequence : corpus) {
            LossAndGrads lg = loss_and_grads(params, sequence);
            if (!std::isfinite(lg.loss)) {
                throw LstmError("non-finite loss at epoch " + std::to_string(epoch));
            }
            total += lg.loss;

            // L2 on weights, then elementwise clipping, then SGD
            Tensor* weights[] = {&params.w_input, &params.w_forget, &params.w_output,
                                 &params.w_cell, &params.w_proj};
            Tensor* grads[] = {&lg.grads.w_input, &lg.grads.w_forget, &lg.grads.w_output,
                               &lg.grads.w_cell, &lg.grads.w_proj};
            for (std::size_t i = 0; i < 5; ++i) {
                for (std::size_t j = 0; j < grads[i]->data.size(); ++j) {
                    double g = grads[i]->data[j] + cfg.l2_strength * weights[i]->data[j];
                    g = std::clamp(g, -cfg.clip_value, cfg.clip_value);
                    weights[i]->data[j] -= cfg.learning_rate * g;
                }
            }
            std::vector<double>* biases[] = {&params.b_input, &params.b_forget, &params.b_output,
                                             &params.b_cell, &params.b_proj};
            std::vector<double>* bias_grads[] = {&lg.grads.b_input, &lg.grads.b_forget,
                                                 &lg.grads.b_output, &lg.grads.b_cell,
                                                 &lg.grads.b_proj};
            for (std::size_t i = 0; i < 5; ++i) {
                for (std::size_t j = 0; j < bias_grads[i]->size(); ++j) {
                    double g = std::clamp((*bias_grads[i])[j], -cfg.clip_value, cfg.clip_value);
                    (*biases[i])[j] -= cfg.learning_rate * g;
                }
            }
        }
        epoch_losses.push_back(total / static_cast<double>(corpus.size()));
    }
    return epoch_losses;
}

std::vector<int> sample(const LstmParams& params, const std::vector<int>& prime,
                        std::size_t length, double temperature, std::uint64_t seed) {
    if (!(temperature > 0.0)) throw LstmError("temperature must be > 0");
    if (prime.empty()) throw LstmError("prime must be nonempty");
    std::mt19937_64 rng(seed);
    std::vector<int> tokens = prime;
    for (std::size_t i = 0; i < length; ++i) {
        ForwardCache cache = forward(params, tokens);
        // re-apply temperature to the final step's distribution
        std::vector<double> logits(params.vocab_size);
        for (std::size_t k = 0; k < params.vocab_size; ++k) {
            logits[k] = std::log(cache.probs.back()[k]);
        }
        std::vector<double> probs = softmax(logits, temperature);
        double u = next_unit(rng);
        double cumulative = 0.0;
        int chosen = static_cast<int>(params.vocab_size) - 1;
        for (std::size_t k = 0; k < probs.size(); ++k) {
            cumulative += probs[k];
            if (u < cumulative) {
                chosen = static_cast<int>(k);
                break;
            }
        }
        tokens.push_back(chosen);
    }
    return std::vector<int>(tokens.begin() + static_cast<std::ptrdiff_t>(prime.size()),
                            tokens.end());
}

FeatureTokenizer::FeatureTokenizer(const ExemplarSet& training_set, std::size_t n_bins)
    : n_bins_(n_bins) {
    if (training_set.empty()) throw LstmError("tokenizer needs a nonempty training set");
    if (n_bins_ < 1) throw LstmError("n_bins must be >= 1");
    col_min_.assign(training_set.arity, std::numeric_limits<double>::infinity());
    col_max_.assign(training_set.arity, -std::numeric_limits<double>::infinity());
    for (const Exemplar& ex : training_set.exemplars) {
        for (std::size_t k = 0; k < training_set.arity; ++k) {
            col_min_[k] = std::min(col_min_[k], ex.features[k]);
            col_max_[k] = std::max(col_max_[k], ex.features[k]);
        }
    }
}

std::vector<int> FeatureTokenizer::tokenize(const std::vector<double>& features) const {
    if (features.size() != col_min_.size()) throw LstmError("tokenize: arity mismatch");
    std::vector<int> tokens(features.size());
    for (std::size_t k = 0; k < features.size(); ++k) {
        double span = col_max_[k] - col_min_[k];
        if (span <= 0.0) {
            tokens[k] = 0;
            continue;
        }
        double relative = (features[k] - col_min_[k]) / span;
        int bin = static_cast<int>(relative * static_cast<double>(n_bins_));
        tokens[k] = std::clamp(bin, 0, static_cast<int>(n_bins_) - 1);
    }
    return tokens;
}

std::vector<double> FeatureTokenizer::detokenize(const std::vector<int>& tokens) const {
    if (tokens.size() != col_min_.size()) throw LstmError("detokenize: arity mismatch");
    std::vector<double> features(tokens.size());
    for (std::size_t k = 0; k < tokens.size(); ++k) {
        double span = col_max_[k] - col_min_[k];
        double width = span / static_cast<double>(n_bins_);
        features[k] = col_min_[k] + (static_cast<double>(tokens[k]) + 0.5) * width;
    }
    return features;
}

}  // namespace pdla
