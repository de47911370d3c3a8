#include "vmk/tokenizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "vmk/errors.hpp"
#include "vmk/kernels.hpp"
#include "vmk/rng.hpp"

namespace vmk {

int lfq_quantize(std::span<const double> latent) {
    int code = 0;
    for (std::size_t j = 0; j < latent.size(); ++j) {
        if (!std::isfinite(latent[j])) throw NumericError("non-finite latent in lfq_quantize");
        if (latent[j] > 0.0) code |= 1 << j;
    }
    return code;
}

std::vector<double> lfq_dequantize(int code, int bits) {
    std::vector<double> out(static_cast<std::size_t>(bits));
    for (int j = 0; j < bits; ++j) out[static_cast<std::size_t>(j)] = (code >> j) & 1 ? 1.0 : -1.0;
    return out;
}

int token_grid_length(int h, int w, int patch) {
    if (patch <= 0 || h % patch != 0 || w % patch != 0)
        throw ShapeError("image dims must be divisible by patch size");
    return (h / patch) * (w / patch);
}

template <typename T>
TokenizerParams<T> TokenizerParams<T>::init(const TokenizerConfig& cfg, uint64_t seed) {
    TokenizerParams<T> p;
    p.cfg = cfg;
    const auto d = static_cast<std::size_t>(cfg.input_dim());
    const auto h = static_cast<std::size_t>(cfg.hidden);
    const auto k = static_cast<std::size_t>(cfg.lfq_bits);
    auto& s = p.store;
    s.add("enc.w1", {h, d});
    s.add("enc.b1", {h});
    s.add("enc.w2", {k, h});
    s.add("enc.b2", {k});
    s.add("dec.w1", {h, k});
    s.add("dec.b1", {h});
    s.add("dec.w2", {d, h});
    s.add("dec.b2", {d});

    Rng rng(seed);
    auto he_fill = [&](const char* name, std::size_t fan_in) {
        auto span = s.span(s.index_of(name));
        const double std_dev = std::sqrt(2.0 / static_cast<double>(fan_in));
        for (auto& v : span) v = static_cast<T>(std_dev * rng.normal());
    };
    he_fill("enc.w1", d);
    he_fill("enc.w2", h);
    he_fill("dec.w1", k);
    he_fill("dec.w2", h);
    return p;
}

template <typename T>
std::vector<T> extract_patches(const Image& img, int patch) {
    const int l = token_grid_length(img.h, img.w, patch);
    const int d = patch * patch * 3;
    const int gw = img.w / patch;
    std::vector<T> out(static_cast<std::size_t>(l) * d);
    for (int gi = 0; gi < l; ++gi) {
        const int gy = gi / gw, gx = gi % gw;
        T* dst = out.data() + static_cast<std::size_t>(gi) * d;
        for (int py = 0; py < patch; ++py)
            for (int px = 0; px < patch; ++px) {
                const float* src = img.at(gy * patch + py, gx * patch + px);
                *dst++ = static_cast<T>(src[0]);
                *dst++ = static_cast<T>(src[1]);
                *dst++ = static_cast<T>(src[2]);
            }
    }
    return out;
}

namespace {

template <typename T>
void add_bias_rows(T* x, const T* b, std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) kern::axpy(T(1), b, x + r * cols, cols);
}

template <typename T>
void relu_forward(T* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        if (x[i] < T(0)) x[i] = T(0);
}

// patches [B,D] -> activations; used by both the codec paths and training
template <typename T>
struct TokWork {
    std::vector<T> h1, z, q, h2, y;

    void forward(const TokenizerParams<T>& p, const T* x, std::size_t batch, bool quantize) {
        const auto d = static_cast<std::size_t>(p.cfg.input_dim());
        const auto h = static_cast<std::size_t>(p.cfg.hidden);
        const auto k = static_cast<std::size_t>(p.cfg.lfq_bits);
        const auto& s = p.store;
        h1.assign(batch * h, T(0));
        z.assign(batch * k, T(0));
        q.assign(batch * k, T(0));
        h2.assign(batch * h, T(0));
        y.assign(batch * d, T(0));

        kern::gemm_nt(batch, h, d, x, d, s.ptr("enc.w1"), d, h1.data(), h, false);
        add_bias_rows(h1.data(), s.ptr("enc.b1"), batch, h);
        relu_forward(h1.data(), h1.size());
        kern::gemm_nt(batch, k, h, h1.data(), h, s.ptr("enc.w2"), h, z.data(), k, false);
        add_bias_rows(z.data(), s.ptr("enc.b2"), batch, k);
        if (quantize) {
            for (std::size_t i = 0; i < z.size(); ++i) {
                if (!std::isfinite(static_cast<double>(z[i])))
                    throw NumericError("non-finite tokenizer latent");
                q[i] = z[i] > T(0) ? T(1) : T(-1);
            }
        } else {
            q = z;
        }
        kern::gemm_nt(batch, h, k, q.data(), k, s.ptr("dec.w1"), k, h2.data(), h, false);
        add_bias_rows(h2.data(), s.ptr("dec.b1"), batch, h);
        relu_forward(h2.data(), h2.size());
        kern::gemm_nt(batch, d, h, h2.data(), h, s.ptr("dec.w2"), h, y.data(), d, false);
        add_bias_rows(y.data(), s.ptr("dec.b2"), batch, d);
    }
};

template <typename T>
void col_sum_into(const T* x, std::size_t rows, std::size_t cols, T* out) {
    for (std::size_t r = 0; r < rows; ++r) kern::axpy(T(1), x + r * cols, out, cols);
}

}  // namespace

template <typename T>
T tokenizer_loss_and_grad(const TokenizerParams<T>& params, const T* patches, std::size_t batch,
                          double entropy_weight, bool quantize, TensorStore<T>* grads) {
    const auto d = static_cast<std::size_t>(params.cfg.input_dim());
    const auto h = static_cast<std::size_t>(params.cfg.hidden);
    const auto k = static_cast<std::size_t>(params.cfg.lfq_bits);
    const auto& s = params.store;

    TokWork<T> w;
    w.forward(params, patches, batch, quantize);

    const double inv_bd = 1.0 / (static_cast<double>(batch) * static_cast<double>(d));
    double mse = 0.0;
    for (std::size_t i = 0; i < w.y.size(); ++i) {
        const double e = static_cast<double>(w.y[i]) - static_cast<double>(patches[i]);
        mse += e * e;
    }
    mse *= inv_bd;

    // per-bit usage entropy over the batch
    std::vector<double> pbar(k, 0.0);
    for (std::size_t i = 0; i < batch; ++i)
        for (std::size_t j = 0; j < k; ++j)
            pbar[j] += 1.0 / (1.0 + std::exp(-static_cast<double>(w.z[i * k + j])));
    double bonus = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        pbar[j] /= static_cast<double>(batch);
        bonus += -pbar[j] * std::log(pbar[j]) - (1.0 - pbar[j]) * std::log(1.0 - pbar[j]);
    }
    bonus /= static_cast<double>(k);

    const T loss = static_cast<T>(mse - entropy_weight * bonus);
    if (!grads) return loss;

    std::vector<T> dy(batch * d), dh2(batch * h), dq(batch * k), dz(batch * k), dh1(batch * h);
    for (std::size_t i = 0; i < dy.size(); ++i)
        dy[i] = static_cast<T>(2.0 * inv_bd *
                               (static_cast<double>(w.y[i]) - static_cast<double>(patches[i])));

    auto g = [&](const char* name) { return grads->ptr(grads->index_of(name)); };

    kern::gemm_tn(batch, d, h, dy.data(), d, w.h2.data(), h, g("dec.w2"), h, true);
    col_sum_into(dy.data(), batch, d, g("dec.b2"));
    kern::gemm_nn(batch, d, h, dy.data(), d, s.ptr("dec.w2"), h, dh2.data(), h, false);
    for (std::size_t i = 0; i < dh2.size(); ++i)
        if (w.h2[i] <= T(0)) dh2[i] = T(0);

    kern::gemm_tn(batch, h, k, dh2.data(), h, w.q.data(), k, g("dec.w1"), k, true);
    col_sum_into(dh2.data(), batch, h, g("dec.b1"));
    kern::gemm_nn(batch, h, k, dh2.data(), h, s.ptr("dec.w1"), k, dq.data(), k, false);

    // straight-through across the quantizer, plus the entropy path on z
    dz = dq;
    const double ew = entropy_weight / (static_cast<double>(k) * static_cast<double>(batch));
    for (std::size_t i = 0; i < batch; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            const double sig = 1.0 / (1.0 + std::exp(-static_cast<double>(w.z[i * k + j])));
            const double hprime = std::log((1.0 - pbar[j]) / pbar[j]);
            dz[i * k + j] += static_cast<T>(-ew * hprime * sig * (1.0 - sig));
        }

    kern::gemm_tn(batch, k, h, dz.data(), k, w.h1.data(), h, g("enc.w2"), h, true);
    col_sum_into(dz.data(), batch, k, g("enc.b2"));
    kern::gemm_nn(batch, k, h, dz.data(), k, s.ptr("enc.w2"), h, dh1.data(), h, false);
    for (std::size_t i = 0; i < dh1.size(); ++i)
        if (w.h1[i] <= T(0)) dh1[i] = T(0);

    kern::gemm_tn(batch, h, d, dh1.data(), h, patches, d, g("enc.w1"), d, true);
    col_sum_into(dh1.data(), batch, h, g("enc.b1"));

    return loss;
}

std::vector<int> LfqTokenizer::encode(const Image& img) const {
    const int l = token_grid_length(img.h, img.w, params.cfg.patch_size);
    const auto patches = extract_patches<float>(img, params.cfg.patch_size);
    TokWork<float> w;
    w.forward(params, patches.data(), static_cast<std::size_t>(l), true);
    const auto k = static_cast<std::size_t>(params.cfg.lfq_bits);
    std::vector<int> codes(static_cast<std::size_t>(l));
    for (std::size_t i = 0; i < codes.size(); ++i) {
        int code = 0;
        for (std::size_t j = 0; j < k; ++j)
            if (w.q[i * k + j] > 0.0f) code |= 1 << j;
        codes[i] = code;
    }
    return codes;
}

Image LfqTokenizer::decode(std::span<const int> codes, int h, int w) const {
    const int patch = params.cfg.patch_size;
    const int l = token_grid_length(h, w, patch);
    if (static_cast<int>(codes.size()) != l) throw ShapeError("token count does not match image dims");
    const auto k = static_cast<std::size_t>(params.cfg.lfq_bits);
    std::vector<float> q(static_cast<std::size_t>(l) * k);
    for (int i = 0; i < l; ++i)
        for (std::size_t j = 0; j < k; ++j)
            q[static_cast<std::size_t>(i) * k + j] = (codes[static_cast<std::size_t>(i)] >> j) & 1 ? 1.0f : -1.0f;

    const auto& s = params.store;
    const auto hd = static_cast<std::size_t>(params.cfg.hidden);
    const auto d = static_cast<std::size_t>(params.cfg.input_dim());
    std::vector<float> h2(static_cast<std::size_t>(l) * hd), y(static_cast<std::size_t>(l) * d);
    kern::gemm_nt(static_cast<std::size_t>(l), hd, k, q.data(), k, s.ptr("dec.w1"), k, h2.data(), hd, false);
    add_bias_rows(h2.data(), s.ptr("dec.b1"), static_cast<std::size_t>(l), hd);
    relu_forward(h2.data(), h2.size());
    kern::gemm_nt(static_cast<std::size_t>(l), d, hd, h2.data(), hd, s.ptr("dec.w2"), hd, y.data(), d, false);
    add_bias_rows(y.data(), s.ptr("dec.b2"), static_cast<std::size_t>(l), d);

    Image img(h, w);
    const int gw = w / patch;
    for (int gi = 0; gi < l; ++gi) {
        const int gy = gi / gw, gx = gi % gw;
        const float* src = y.data() + static_cast<std::size_t>(gi) * d;
        for (int py = 0; py < patch; ++py)
            for (int px = 0; px < patch; ++px) {
                float* dst = img.at(gy * patch + py, gx * patch + px);
                dst[0] = std::clamp(*src++, 0.0f, 1.0f);
                dst[1] = std::clamp(*src++, 0.0f, 1.0f);
                dst[2] = std::clamp(*src++, 0.0f, 1.0f);
            }
    }
    return img;
}

PaletteOracle::PaletteOracle(std::vector<std::array<float, 3>> palette_colors, int patch_size)
    : colors(std::move(palette_colors)), patch(patch_size) {
    if (colors.empty()) throw ConfigError("oracle palette is empty");
    for (std::size_t i = 0; i < colors.size(); ++i)
        for (std::size_t j = i + 1; j < colors.size(); ++j)
            if (colors[i] == colors[j]) throw ConfigError("oracle palette colors must be distinct");
}

std::vector<int> PaletteOracle::encode(const Image& img) const {
    const int l = token_grid_length(img.h, img.w, patch);
    const int gw = img.w / patch;
    std::vector<int> codes(static_cast<std::size_t>(l));
    for (int gi = 0; gi < l; ++gi) {
        const int gy = gi / gw, gx = gi % gw;
        double mean[3] = {0, 0, 0};
        for (int py = 0; py < patch; ++py)
            for (int px = 0; px < patch; ++px) {
                const float* p = img.at(gy * patch + py, gx * patch + px);
                mean[0] += p[0];
                mean[1] += p[1];
                mean[2] += p[2];
            }
        const double inv = 1.0 / (patch * patch);
        mean[0] *= inv;
        mean[1] *= inv;
        mean[2] *= inv;
        int best = 0;
        double best_d = 1e30;
        for (std::size_t c = 0; c < colors.size(); ++c) {
            const double dr = mean[0] - colors[c][0];
            const double dg = mean[1] - colors[c][1];
            const double db = mean[2] - colors[c][2];
            const double dist = dr * dr + dg * dg + db * db;
            if (dist < best_d) {
                best_d = dist;
                best = static_cast<int>(c);
            }
        }
        codes[static_cast<std::size_t>(gi)] = best;
    }
    return codes;
}

Image PaletteOracle::decode(std::span<const int> codes, int h, int w) const {
    const int l = token_grid_length(h, w, patch);
    if (static_cast<int>(codes.size()) != l) throw ShapeError("token count does not match image dims");
    Image img(h, w);
    const int gw = w / patch;
    for (int gi = 0; gi < l; ++gi) {
        const int code = codes[static_cast<std::size_t>(gi)];
        if (code < 0 || code >= code_count()) throw ShapeError("oracle code out of range");
        const auto& col = colors[static_cast<std::size_t>(code)];
        const int gy = gi / gw, gx = gi % gw;
        for (int py = 0; py < patch; ++py)
            for (int px = 0; px < patch; ++px) {
                float* dst = img.at(gy * patch + py, gx * patch + px);
                dst[0] = col[0];
                dst[1] = col[1];
                dst[2] = col[2];
            }
    }
    return img;
}

template <typename T>
TokTrainResult train_tokenizer(TokenizerParams<T>& params, const std::vector<Image>& images,
                               const TokTrainOpts& opts) {
    if (images.empty()) throw ConfigError("tokenizer training set is empty");

    // gather every patch of every image
    std::vector<T> all;
    const auto d = static_cast<std::size_t>(params.cfg.input_dim());
    for (const auto& img : images) {
        auto p = extract_patches<T>(img, params.cfg.patch_size);
        all.insert(all.end(), p.begin(), p.end());
    }
    const std::size_t n = all.size() / d;

    TokTrainResult result;
    auto grads = params.store.clone_shape();
    auto adam = AdamState<T>::like(params.store);
    AdamConfig acfg;
    acfg.lr = opts.lr;
    Rng rng(opts.seed);
    std::vector<T> batch(static_cast<std::size_t>(opts.batch) * d);
    for (int step = 0; step < opts.steps; ++step) {
        const std::size_t bs = std::min<std::size_t>(static_cast<std::size_t>(opts.batch), n);
        for (std::size_t i = 0; i < bs; ++i) {
            const std::size_t idx = rng.uniform_below(n);
            std::memcpy(batch.data() + i * d, all.data() + idx * d, d * sizeof(T));
        }
        grads.zero();
        const T loss =
            tokenizer_loss_and_grad(params, batch.data(), bs, opts.entropy_weight, true, &grads);
        if (!std::isfinite(static_cast<double>(loss)))
            throw NumericError("non-finite tokenizer loss at step " + std::to_string(step));
        adamw_step(params.store, grads, adam, acfg);
        result.loss.push_back(static_cast<double>(loss));
    }
    return result;
}

double reconstruction_psnr(const VisualCodec& codec, const std::vector<Image>& images) {
    if (images.empty()) throw ConfigError("empty image set");
    double se = 0.0;
    std::size_t count = 0;
    for (const auto& img : images) {
        const auto codes = codec.encode(img);
        const Image rec = codec.decode(codes, img.h, img.w);
        for (std::size_t i = 0; i < img.px.size(); ++i) {
            const double e = static_cast<double>(img.px[i]) - static_cast<double>(rec.px[i]);
            se += e * e;
        }
        count += img.px.size();
    }
    const double mse = se / static_cast<double>(count);
    if (mse <= 0.0) return 99.0;
    return std::min(99.0, 10.0 * std::log10(1.0 / mse));
}

template struct TokenizerParams<float>;
template struct TokenizerParams<double>;
template std::vector<float> extract_patches<float>(const Image&, int);
template std::vector<double> extract_patches<double>(const Image&, int);
template float tokenizer_loss_and_grad<float>(const TokenizerParams<float>&, const float*,
                                              std::size_t, double, bool, TensorStore<float>*);
template double tokenizer_loss_and_grad<double>(const TokenizerParams<double>&, const double*,
                                                std::size_t, double, bool, TensorStore<double>*);
template TokTrainResult train_tokenizer<float>(TokenizerParams<float>&, const std::vector<Image>&,
                                               const TokTrainOpts&);
template TokTrainResult train_tokenizer<double>(TokenizerParams<double>&, const std::vector<Image>&,
                                                const TokTrainOpts&);

}  // namespace vmk
