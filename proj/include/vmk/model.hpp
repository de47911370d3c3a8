#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vmk/tensor.hpp"

namespace vmk {

struct ModelConfig {
    int d = 128;
    int n_layers = 4;
    int n_heads = 4;
    int max_seq_len = 512;
    int vocab_size = 0;
    int ffn_mult = 4;

    int head_dim() const { return d / n_heads; }
    int ffn_dim() const { return d * ffn_mult; }
    void validate() const;  // throws ConfigError
};

enum class LossWeighting { mean, inv_ratio };

template <typename T>
struct ModelParams {
    ModelConfig cfg;
    TensorStore<T> store;

    // scaled-normal init (std 0.02, residual output projections scaled by
    // 1/sqrt(2*n_layers)); deterministic per seed
    static ModelParams init(const ModelConfig& cfg, uint64_t seed);

    template <typename U>
    ModelParams<U> cast() const {
        return {cfg, store.template cast<U>()};
    }
};

template <typename T>
struct LayerActs {
    std::vector<T> x_in, ln1_out, q, k, v, att_probs, att_out, x_mid, ln2_out;
    std::vector<T> ffn_pre, ffn_tanh, ffn_post;
    std::vector<T> ln1_mean, ln1_rstd, ln2_mean, ln2_rstd;
};

// Activation storage reused across calls. att_probs is [n_heads, L, L]
// (kept around for the backward pass and for attention-level tests).
template <typename T>
struct Workspace {
    int seq_len = 0;
    std::vector<LayerActs<T>> layers;
    std::vector<T> x_final, lnf_out, lnf_mean, lnf_rstd;
    std::vector<T> logits;     // (#rows x vocab) after head_logits
    std::vector<T> rows_buf;   // gathered lnf rows
    // backward scratch
    std::vector<T> dx, dres, dq, dk, dv, datt_out, dp_head, dffn, dln, dlnf;

    void resize(const ModelConfig& cfg, int l);
};

// transformer body: full bidirectional self-attention, activations stay in ws
template <typename T>
void forward(const ModelParams<T>& params, std::span<const int> ids, Workspace<T>& ws);

// vocabulary head for selected positions; fills ws.logits (rows.size() x vocab)
template <typename T>
void head_logits(const ModelParams<T>& params, Workspace<T>& ws,
                 std::span<const std::size_t> rows);

// body + head over every position; returns seq_len x vocab
template <typename T>
std::vector<T> forward_full_logits(const ModelParams<T>& params, std::span<const int> ids,
                                   Workspace<T>& ws);

struct LossOpts {
    LossWeighting weighting = LossWeighting::mean;
    std::size_t n_targets = 0;  // required for inv_ratio
};

// mean (over masked positions) cross-entropy of the original ids, plus exact
// reverse-mode grads when grads != nullptr. Masked positions are processed in
// ascending order internally, so the result is independent of enumeration
// order.
template <typename T>
T loss_and_grad(const ModelParams<T>& params, std::span<const int> ids,
                std::span<const std::size_t> masked, std::span<const int> original,
                Workspace<T>& ws, TensorStore<T>* grads, const LossOpts& opts = {});

}  // namespace vmk
