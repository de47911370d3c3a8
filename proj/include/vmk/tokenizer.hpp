#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "vmk/image.hpp"
#include "vmk/tensor.hpp"

namespace vmk {

// sign bits of the latent: bit j set iff latent[j] > 0 (exact zeros fall to 0)
int lfq_quantize(std::span<const double> latent);
std::vector<double> lfq_dequantize(int code, int bits);  // bipolar +-1

struct TokenizerConfig {
    int patch_size = 4;
    int lfq_bits = 10;
    int hidden = 96;

    int input_dim() const { return patch_size * patch_size * 3; }
};

// one hidden layer each side: patch -> hidden -> K latents, K bipolar -> hidden -> patch
template <typename T>
struct TokenizerParams {
    TokenizerConfig cfg;
    TensorStore<T> store;

    static TokenizerParams init(const TokenizerConfig& cfg, uint64_t seed);

    template <typename U>
    TokenizerParams<U> cast() const {
        return {cfg, store.template cast<U>()};
    }
};

// common surface for the trained LFQ tokenizer and the exact palette oracle
struct VisualCodec {
    virtual ~VisualCodec() = default;
    virtual int patch_size() const = 0;
    virtual int code_count() const = 0;
    virtual std::vector<int> encode(const Image& img) const = 0;
    virtual Image decode(std::span<const int> codes, int h, int w) const = 0;
};

// token grid length for an image, with the divisibility check
int token_grid_length(int h, int w, int patch);

struct LfqTokenizer final : VisualCodec {
    TokenizerParams<float> params;

    explicit LfqTokenizer(TokenizerParams<float> p) : params(std::move(p)) {}

    int patch_size() const override { return params.cfg.patch_size; }
    int code_count() const override { return 1 << params.cfg.lfq_bits; }
    std::vector<int> encode(const Image& img) const override;
    Image decode(std::span<const int> codes, int h, int w) const override;
};

// token = index of the palette color nearest to the patch mean; decoding a
// token paints the palette color back, so palette-constant patches round-trip
// exactly
struct PaletteOracle final : VisualCodec {
    std::vector<std::array<float, 3>> colors;
    int patch = 4;

    PaletteOracle(std::vector<std::array<float, 3>> palette_colors, int patch_size);

    int patch_size() const override { return patch; }
    int code_count() const override { return static_cast<int>(colors.size()); }
    std::vector<int> encode(const Image& img) const override;
    Image decode(std::span<const int> codes, int h, int w) const override;
};

struct TokTrainOpts {
    int steps = 3000;
    int batch = 256;
    double lr = 2e-3;
    double entropy_weight = 0.1;
    uint64_t seed = 0;
};

struct TokTrainResult {
    std::vector<double> loss;  // one entry per step
};

// reconstruction MSE with straight-through gradients across the sign
// quantizer plus a per-bit usage entropy bonus. quantize=false swaps the
// quantizer for identity on both passes (the finite-difference reference
// configuration).
template <typename T>
T tokenizer_loss_and_grad(const TokenizerParams<T>& params, const T* patches, std::size_t batch,
                          double entropy_weight, bool quantize, TensorStore<T>* grads);

template <typename T>
TokTrainResult train_tokenizer(TokenizerParams<T>& params, const std::vector<Image>& images,
                               const TokTrainOpts& opts);

template <typename T>
std::vector<T> extract_patches(const Image& img, int patch);  // [L, patch*patch*3] row-major

// 10*log10(1 / mean squared error) over decode(encode(img)) across the set,
// capped at 99 dB
double reconstruction_psnr(const VisualCodec& codec, const std::vector<Image>& images);

}  // namespace vmk
