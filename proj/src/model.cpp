#include "vmk/model.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "vmk/errors.hpp"
#include "vmk/kernels.hpp"
#include "vmk/rng.hpp"

namespace vmk {

void ModelConfig::validate() const {
    if (d <= 0 || n_layers <= 0 || n_heads <= 0 || max_seq_len <= 0 || ffn_mult <= 0)
        throw ConfigError("model dims must be positive");
    if (d % n_heads != 0) throw ConfigError("d must be divisible by n_heads");
    if (vocab_size <= 0) throw ConfigError("vocab_size must be set");
}

namespace {

std::string layer_name(int l, const char* suffix) {
    return "layer" + std::to_string(l) + "." + suffix;
}

constexpr double kLnEps = 1e-5;
constexpr double kGeluC = 0.7978845608028654;  // sqrt(2/pi)
constexpr double kGeluA = 0.044715;

template <typename T>
struct LayerPtrs {
    const T *ln1_g, *ln1_b, *wq, *wk, *wv, *wo, *ln2_g, *ln2_b, *w1, *w2;
};

template <typename T, typename Store>
LayerPtrs<T> layer_ptrs(Store& s, int l) {
    return {s.ptr(layer_name(l, "ln1.g")), s.ptr(layer_name(l, "ln1.b")),
            s.ptr(layer_name(l, "attn.wq")), s.ptr(layer_name(l, "attn.wk")),
            s.ptr(layer_name(l, "attn.wv")), s.ptr(layer_name(l, "attn.wo")),
            s.ptr(layer_name(l, "ln2.g")), s.ptr(layer_name(l, "ln2.b")),
            s.ptr(layer_name(l, "ffn.w1")), s.ptr(layer_name(l, "ffn.w2"))};
}

template <typename T>
void layernorm_fwd(const T* x, const T* g, const T* b, T* out, T* mean, T* rstd,
                   std::size_t rows, std::size_t d) {
    for (std::size_t r = 0; r < rows; ++r) {
        const T* xr = x + r * d;
        T* yr = out + r * d;
        double mu = 0;
        for (std::size_t i = 0; i < d; ++i) mu += static_cast<double>(xr[i]);
        mu /= static_cast<double>(d);
        double var = 0;
        for (std::size_t i = 0; i < d; ++i) {
            const double c = static_cast<double>(xr[i]) - mu;
            var += c * c;
        }
        var /= static_cast<double>(d);
        const double rs = 1.0 / std::sqrt(var + kLnEps);
        mean[r] = static_cast<T>(mu);
        rstd[r] = static_cast<T>(rs);
        for (std::size_t i = 0; i < d; ++i)
            yr[i] = static_cast<T>((static_cast<double>(xr[i]) - mu) * rs) * g[i] + b[i];
    }
}

// dx is overwritten; dg/db are accumulated
template <typename T>
void layernorm_bwd(const T* x, const T* mean, const T* rstd, const T* g, const T* dy,
                   T* dx, T* dg, T* db, std::size_t rows, std::size_t d) {
    for (std::size_t r = 0; r < rows; ++r) {
        const T* xr = x + r * d;
        const T* dyr = dy + r * d;
        T* dxr = dx + r * d;
        const double mu = static_cast<double>(mean[r]);
        const double rs = static_cast<double>(rstd[r]);
        double sum_dxhat = 0, sum_dxhat_xhat = 0;
        for (std::size_t i = 0; i < d; ++i) {
            const double xhat = (static_cast<double>(xr[i]) - mu) * rs;
            const double dxhat = static_cast<double>(dyr[i]) * static_cast<double>(g[i]);
            sum_dxhat += dxhat;
            sum_dxhat_xhat += dxhat * xhat;
            dg[i] += static_cast<T>(static_cast<double>(dyr[i]) * xhat);
            db[i] += dyr[i];
        }
        const double inv_d = 1.0 / static_cast<double>(d);
        for (std::size_t i = 0; i < d; ++i) {
            const double xhat = (static_cast<double>(xr[i]) - mu) * rs;
            const double dxhat = static_cast<double>(dyr[i]) * static_cast<double>(g[i]);
            dxr[i] = static_cast<T>(rs * (dxhat - inv_d * sum_dxhat - xhat * inv_d * sum_dxhat_xhat));
        }
    }
}

template <typename T>
void gelu_fwd(const T* x, T* tanh_u, T* y, std::size_t n) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        const double v = static_cast<double>(x[i]);
        const double t = std::tanh(kGeluC * (v + kGeluA * v * v * v));
        tanh_u[i] = static_cast<T>(t);
        y[i] = static_cast<T>(0.5 * v * (1.0 + t));
    }
}

template <typename T>
void gelu_bwd(const T* x, const T* tanh_u, const T* dy, T* dx, std::size_t n) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        const double v = static_cast<double>(x[i]);
        const double t = static_cast<double>(tanh_u[i]);
        const double du = kGeluC * (1.0 + 3.0 * kGeluA * v * v);
        const double grad = 0.5 * (1.0 + t) + 0.5 * v * (1.0 - t * t) * du;
        dx[i] = static_cast<T>(static_cast<double>(dy[i]) * grad);
    }
}

}  // namespace

template <typename T>
ModelParams<T> ModelParams<T>::init(const ModelConfig& cfg, uint64_t seed) {
    cfg.validate();
    ModelParams<T> p;
    p.cfg = cfg;
    auto& s = p.store;
    const auto d = static_cast<std::size_t>(cfg.d);
    const auto f = static_cast<std::size_t>(cfg.ffn_dim());
    const auto v = static_cast<std::size_t>(cfg.vocab_size);

    s.add("embed", {v, d});
    s.add("pos", {static_cast<std::size_t>(cfg.max_seq_len), d});
    for (int l = 0; l < cfg.n_layers; ++l) {
        s.add(layer_name(l, "ln1.g"), {d});
        s.add(layer_name(l, "ln1.b"), {d});
        s.add(layer_name(l, "attn.wq"), {d, d});
        s.add(layer_name(l, "attn.wk"), {d, d});
        s.add(layer_name(l, "attn.wv"), {d, d});
        s.add(layer_name(l, "attn.wo"), {d, d});
        s.add(layer_name(l, "ln2.g"), {d});
        s.add(layer_name(l, "ln2.b"), {d});
        s.add(layer_name(l, "ffn.w1"), {f, d});
        s.add(layer_name(l, "ffn.w2"), {d, f});
    }
    s.add("lnf.g", {d});
    s.add("lnf.b", {d});
    s.add("head", {v, d});

    Rng rng(seed);
    const double base_std = 0.02;
    const double resid_std = base_std / std::sqrt(2.0 * cfg.n_layers);
    auto fill_normal = [&](const std::string& name, double std_dev) {
        for (auto& w : s.span(s.index_of(name))) w = static_cast<T>(std_dev * rng.normal());
    };
    auto fill_const = [&](const std::string& name, T value) {
        for (auto& w : s.span(s.index_of(name))) w = value;
    };

    fill_normal("embed", base_std);
    fill_normal("pos", base_std);
    for (int l = 0; l < cfg.n_layers; ++l) {
        fill_const(layer_name(l, "ln1.g"), T(1));
        fill_normal(layer_name(l, "attn.wq"), base_std);
        fill_normal(layer_name(l, "attn.wk"), base_std);
        fill_normal(layer_name(l, "attn.wv"), base_std);
        fill_normal(layer_name(l, "attn.wo"), resid_std);
        fill_const(layer_name(l, "ln2.g"), T(1));
        fill_normal(layer_name(l, "ffn.w1"), base_std);
        fill_normal(layer_name(l, "ffn.w2"), resid_std);
    }
    fill_const("lnf.g", T(1));
    fill_normal("head", base_std);
    return p;
}

template <typename T>
void Workspace<T>::resize(const ModelConfig& cfg, int l) {
    seq_len = l;
    const auto ls = static_cast<std::size_t>(l);
    const auto d = static_cast<std::size_t>(cfg.d);
    const auto f = static_cast<std::size_t>(cfg.ffn_dim());
    const auto h = static_cast<std::size_t>(cfg.n_heads);
    layers.resize(static_cast<std::size_t>(cfg.n_layers));
    for (auto& la : layers) {
        la.x_in.assign(ls * d, T(0));
        la.ln1_out.assign(ls * d, T(0));
        la.q.assign(ls * d, T(0));
        la.k.assign(ls * d, T(0));
        la.v.assign(ls * d, T(0));
        la.att_probs.assign(h * ls * ls, T(0));
        la.att_out.assign(ls * d, T(0));
        la.x_mid.assign(ls * d, T(0));
        la.ln2_out.assign(ls * d, T(0));
        la.ffn_pre.assign(ls * f, T(0));
        la.ffn_tanh.assign(ls * f, T(0));
        la.ffn_post.assign(ls * f, T(0));
        la.ln1_mean.assign(ls, T(0));
        la.ln1_rstd.assign(ls, T(0));
        la.ln2_mean.assign(ls, T(0));
        la.ln2_rstd.assign(ls, T(0));
    }
    x_final.assign(ls * d, T(0));
    lnf_out.assign(ls * d, T(0));
    lnf_mean.assign(ls, T(0));
    lnf_rstd.assign(ls, T(0));
    dx.assign(ls * d, T(0));
    dres.assign(ls * d, T(0));
    dq.assign(ls * d, T(0));
    dk.assign(ls * d, T(0));
    dv.assign(ls * d, T(0));
    datt_out.assign(ls * d, T(0));
    dp_head.assign(ls * ls, T(0));
    dffn.assign(ls * f, T(0));
    dln.assign(ls * d, T(0));
    dlnf.assign(ls * d, T(0));
}

template <typename T>
void forward(const ModelParams<T>& params, std::span<const int> ids, Workspace<T>& ws) {
    const ModelConfig& cfg = params.cfg;
    const int l = static_cast<int>(ids.size());
    if (l == 0) throw ShapeError("empty sequence");
    if (l > cfg.max_seq_len) throw ShapeError("sequence longer than max_seq_len");
    for (int id : ids)
        if (id < 0 || id >= cfg.vocab_size) throw ShapeError("token id exceeds vocab");

    ws.resize(cfg, l);
    const auto ls = static_cast<std::size_t>(l);
    const auto d = static_cast<std::size_t>(cfg.d);
    const auto f = static_cast<std::size_t>(cfg.ffn_dim());
    const auto dh = static_cast<std::size_t>(cfg.head_dim());
    const T att_scale = static_cast<T>(1.0 / std::sqrt(static_cast<double>(dh)));
    const auto& s = params.store;

    // embedding + learned positions
    {
        const T* embed = s.ptr("embed");
        const T* pos = s.ptr("pos");
        T* x = ws.layers[0].x_in.data();
        for (std::size_t i = 0; i < ls; ++i) {
            const T* e = embed + static_cast<std::size_t>(ids[i]) * d;
            const T* p = pos + i * d;
            T* xr = x + i * d;
            for (std::size_t j = 0; j < d; ++j) xr[j] = e[j] + p[j];
        }
    }

    for (int li = 0; li < cfg.n_layers; ++li) {
        auto& la = ws.layers[static_cast<std::size_t>(li)];
        const auto lp = layer_ptrs<T>(s, li);
        const T* x_in = la.x_in.data();

        layernorm_fwd(x_in, lp.ln1_g, lp.ln1_b, la.ln1_out.data(), la.ln1_mean.data(),
                      la.ln1_rstd.data(), ls, d);

        kern::gemm_nt(ls, d, d, la.ln1_out.data(), d, lp.wq, d, la.q.data(), d, false);
        kern::gemm_nt(ls, d, d, la.ln1_out.data(), d, lp.wk, d, la.k.data(), d, false);
        kern::gemm_nt(ls, d, d, la.ln1_out.data(), d, lp.wv, d, la.v.data(), d, false);

        for (int h = 0; h < cfg.n_heads; ++h) {
            const std::size_t off = static_cast<std::size_t>(h) * dh;
            T* probs = la.att_probs.data() + static_cast<std::size_t>(h) * ls * ls;
            kern::gemm_nt(ls, ls, dh, la.q.data() + off, d, la.k.data() + off, d, probs, ls, false);
            kern::scale(probs, att_scale, ls * ls);
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(ls); ++r)
                kern::softmax_row(probs + static_cast<std::size_t>(r) * ls, ls);
            kern::gemm_nn(ls, ls, dh, probs, ls, la.v.data() + off, d, la.att_out.data() + off, d,
                          false);
        }

        // x_mid = x_in + att_out * wo^T
        la.x_mid = la.x_in;
        kern::gemm_nt(ls, d, d, la.att_out.data(), d, lp.wo, d, la.x_mid.data(), d, true);

        layernorm_fwd(la.x_mid.data(), lp.ln2_g, lp.ln2_b, la.ln2_out.data(), la.ln2_mean.data(),
                      la.ln2_rstd.data(), ls, d);

        kern::gemm_nt(ls, f, d, la.ln2_out.data(), d, lp.w1, d, la.ffn_pre.data(), f, false);
        gelu_fwd(la.ffn_pre.data(), la.ffn_tanh.data(), la.ffn_post.data(), ls * f);

        T* out = (li + 1 < cfg.n_layers) ? ws.layers[static_cast<std::size_t>(li + 1)].x_in.data()
                                         : ws.x_final.data();
        std::memcpy(out, la.x_mid.data(), ls * d * sizeof(T));
        kern::gemm_nt(ls, d, f, la.ffn_post.data(), f, lp.w2, f, out, d, true);
    }

    layernorm_fwd(ws.x_final.data(), s.ptr("lnf.g"), s.ptr("lnf.b"), ws.lnf_out.data(),
                  ws.lnf_mean.data(), ws.lnf_rstd.data(), ls, d);
}

template <typename T>
void head_logits(const ModelParams<T>& params, Workspace<T>& ws,
                 std::span<const std::size_t> rows) {
    const auto d = static_cast<std::size_t>(params.cfg.d);
    const auto v = static_cast<std::size_t>(params.cfg.vocab_size);
    const std::size_t n = rows.size();
    ws.rows_buf.assign(n * d, T(0));
    ws.logits.assign(n * v, T(0));
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i] >= static_cast<std::size_t>(ws.seq_len)) throw ShapeError("logit row out of range");
        std::memcpy(ws.rows_buf.data() + i * d, ws.lnf_out.data() + rows[i] * d, d * sizeof(T));
    }
    kern::gemm_nt(n, v, d, ws.rows_buf.data(), d, params.store.ptr("head"), d, ws.logits.data(), v,
                  false);
}

template <typename T>
std::vector<T> forward_full_logits(const ModelParams<T>& params, std::span<const int> ids,
                                   Workspace<T>& ws) {
    forward(params, ids, ws);
    std::vector<std::size_t> rows(ids.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    head_logits(params, ws, rows);
    return ws.logits;
}

template <typename T>
T loss_and_grad(const ModelParams<T>& params, std::span<const int> ids,
                std::span<const std::size_t> masked, std::span<const int> original,
                Workspace<T>& ws, TensorStore<T>* grads, const LossOpts& opts) {
    if (masked.empty()) throw ConfigError("loss requires a nonempty masked set");
    if (masked.size() != original.size()) throw ShapeError("masked/original size mismatch");
    const ModelConfig& cfg = params.cfg;
    const auto d = static_cast<std::size_t>(cfg.d);
    const auto f = static_cast<std::size_t>(cfg.ffn_dim());
    const auto v = static_cast<std::size_t>(cfg.vocab_size);
    const auto dh = static_cast<std::size_t>(cfg.head_dim());

    // canonical ascending order makes the loss independent of enumeration order
    std::vector<std::size_t> order(masked.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return masked[a] < masked[b]; });
    std::vector<std::size_t> rows(masked.size());
    std::vector<int> targets(masked.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        rows[i] = masked[order[i]];
        targets[i] = original[order[i]];
        if (targets[i] < 0 || targets[i] >= cfg.vocab_size)
            throw ShapeError("target id exceeds vocab");
    }

    forward(params, ids, ws);
    head_logits(params, ws, rows);

    double weight = 1.0 / static_cast<double>(rows.size());
    if (opts.weighting == LossWeighting::inv_ratio) {
        if (opts.n_targets == 0) throw ConfigError("inv_ratio weighting requires n_targets");
        const double r = static_cast<double>(rows.size()) / static_cast<double>(opts.n_targets);
        weight /= r;
    }

    const std::size_t n = rows.size();
    std::vector<double> row_loss(n, 0.0);
    T* logits = ws.logits.data();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        T* row = logits + static_cast<std::size_t>(i) * v;
        const T m = kern::reduce_max(row, v);
        double sum = 0.0;
        for (std::size_t j = 0; j < v; ++j) sum += std::exp(static_cast<double>(row[j] - m));
        const double lse = static_cast<double>(m) + std::log(sum);
        row_loss[static_cast<std::size_t>(i)] =
            lse - static_cast<double>(row[static_cast<std::size_t>(targets[static_cast<std::size_t>(i)])]);
        if (grads) {
            // overwrite the row with d(loss)/d(logit) = weight * (p - onehot)
            const double inv_sum = 1.0 / sum;
            for (std::size_t j = 0; j < v; ++j) {
                const double p = std::exp(static_cast<double>(row[j] - m)) * inv_sum;
                row[j] = static_cast<T>(weight * p);
            }
            row[static_cast<std::size_t>(targets[static_cast<std::size_t>(i)])] -= static_cast<T>(weight);
        }
    }
    double loss_acc = 0.0;
    for (double rl : row_loss) loss_acc += rl;
    const T loss = static_cast<T>(loss_acc * weight);

    if (!grads) return loss;

    const auto ls = static_cast<std::size_t>(ws.seq_len);
    const auto& s = params.store;
    auto g = [&](const std::string& name) { return grads->ptr(grads->index_of(name)); };

    // head backward: dlogits (in ws.logits) -> dhead, d(lnf rows)
    kern::gemm_tn(n, v, d, ws.logits.data(), v, ws.rows_buf.data(), d, g("head"), d, true);
    std::vector<T>& drows = ws.rows_buf;  // reuse as [n, d] grad buffer
    {
        std::vector<T> tmp(n * d, T(0));
        kern::gemm_nn(n, v, d, ws.logits.data(), v, s.ptr("head"), d, tmp.data(), d, false);
        drows = tmp;
    }
    std::fill(ws.dlnf.begin(), ws.dlnf.end(), T(0));
    for (std::size_t i = 0; i < n; ++i)
        std::memcpy(ws.dlnf.data() + rows[i] * d, drows.data() + i * d, d * sizeof(T));

    // final layernorm
    layernorm_bwd(ws.x_final.data(), ws.lnf_mean.data(), ws.lnf_rstd.data(), s.ptr("lnf.g"),
                  ws.dlnf.data(), ws.dx.data(), g("lnf.g"), g("lnf.b"), ls, d);

    const T att_scale = static_cast<T>(1.0 / std::sqrt(static_cast<double>(dh)));
    for (int li = cfg.n_layers - 1; li >= 0; --li) {
        auto& la = ws.layers[static_cast<std::size_t>(li)];
        const auto lp = layer_ptrs<T>(s, li);

        // ffn branch: out = x_mid + ffn_post * w2^T
        kern::gemm_tn(ls, d, f, ws.dx.data(), d, la.ffn_post.data(), f,
                      g(layer_name(li, "ffn.w2")), f, true);
        kern::gemm_nn(ls, d, f, ws.dx.data(), d, lp.w2, f, ws.dffn.data(), f, false);
        gelu_bwd(la.ffn_pre.data(), la.ffn_tanh.data(), ws.dffn.data(), ws.dffn.data(), ls * f);
        kern::gemm_tn(ls, f, d, ws.dffn.data(), f, la.ln2_out.data(), d,
                      g(layer_name(li, "ffn.w1")), d, true);
        kern::gemm_nn(ls, f, d, ws.dffn.data(), f, lp.w1, d, ws.dln.data(), d, false);
        layernorm_bwd(la.x_mid.data(), la.ln2_mean.data(), la.ln2_rstd.data(), lp.ln2_g,
                      ws.dln.data(), ws.dres.data(), g(layer_name(li, "ln2.g")),
                      g(layer_name(li, "ln2.b")), ls, d);
        kern::axpy(T(1), ws.dres.data(), ws.dx.data(), ls * d);  // dx now holds d(x_mid)

        // attention branch: x_mid = x_in + att_out * wo^T
        kern::gemm_tn(ls, d, d, ws.dx.data(), d, la.att_out.data(), d,
                      g(layer_name(li, "attn.wo")), d, true);
        kern::gemm_nn(ls, d, d, ws.dx.data(), d, lp.wo, d, ws.datt_out.data(), d, false);

        for (int h = 0; h < cfg.n_heads; ++h) {
            const std::size_t off = static_cast<std::size_t>(h) * dh;
            const T* probs = la.att_probs.data() + static_cast<std::size_t>(h) * ls * ls;
            T* dp = ws.dp_head.data();
            kern::gemm_nt(ls, ls, dh, ws.datt_out.data() + off, d, la.v.data() + off, d, dp, ls,
                          false);
            kern::gemm_tn(ls, ls, dh, probs, ls, ws.datt_out.data() + off, d, ws.dv.data() + off,
                          d, false);
            // softmax backward, then fold in the score scale
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(ls); ++r) {
                const T* pr = probs + static_cast<std::size_t>(r) * ls;
                T* dpr = dp + static_cast<std::size_t>(r) * ls;
                const T t = kern::dot(pr, dpr, ls);
                for (std::size_t c = 0; c < ls; ++c) dpr[c] = pr[c] * (dpr[c] - t) * att_scale;
            }
            kern::gemm_nn(ls, ls, dh, dp, ls, la.k.data() + off, d, ws.dq.data() + off, d, false);
            kern::gemm_tn(ls, ls, dh, dp, ls, la.q.data() + off, d, ws.dk.data() + off, d, false);
        }

        kern::gemm_tn(ls, d, d, ws.dq.data(), d, la.ln1_out.data(), d,
                      g(layer_name(li, "attn.wq")), d, true);
        kern::gemm_tn(ls, d, d, ws.dk.data(), d, la.ln1_out.data(), d,
                      g(layer_name(li, "attn.wk")), d, true);
        kern::gemm_tn(ls, d, d, ws.dv.data(), d, la.ln1_out.data(), d,
                      g(layer_name(li, "attn.wv")), d, true);
        kern::gemm_nn(ls, d, d, ws.dq.data(), d, lp.wq, d, ws.dln.data(), d, false);
        kern::gemm_nn(ls, d, d, ws.dk.data(), d, lp.wk, d, ws.dln.data(), d, true);
        kern::gemm_nn(ls, d, d, ws.dv.data(), d, lp.wv, d, ws.dln.data(), d, true);
        layernorm_bwd(la.x_in.data(), la.ln1_mean.data(), la.ln1_rstd.data(), lp.ln1_g,
                      ws.dln.data(), ws.dres.data(), g(layer_name(li, "ln1.g")),
                      g(layer_name(li, "ln1.b")), ls, d);
        kern::axpy(T(1), ws.dres.data(), ws.dx.data(), ls * d);  // dx now holds d(x_in)
    }

    // embedding + position scatter
    {
        T* dembed = g("embed");
        T* dpos = g("pos");
        for (std::size_t i = 0; i < ls; ++i) {
            const T* dxr = ws.dx.data() + i * d;
            kern::axpy(T(1), dxr, dembed + static_cast<std::size_t>(ids[i]) * d, d);
            kern::axpy(T(1), dxr, dpos + i * d, d);
        }
    }

    return loss;
}

template struct ModelParams<float>;
template struct ModelParams<double>;
template struct Workspace<float>;
template struct Workspace<double>;
template void forward<float>(const ModelParams<float>&, std::span<const int>, Workspace<float>&);
template void forward<double>(const ModelParams<double>&, std::span<const int>, Workspace<double>&);
template void head_logits<float>(const ModelParams<float>&, Workspace<float>&,
                                 std::span<const std::size_t>);
template void head_logits<double>(const ModelParams<double>&, Workspace<double>&,
                                  std::span<const std::size_t>);
template std::vector<float> forward_full_logits<float>(const ModelParams<float>&,
                                                       std::span<const int>, Workspace<float>&);
template std::vector<double> forward_full_logits<double>(const ModelParams<double>&,
                                                         std::span<const int>, Workspace<double>&);
template float loss_and_grad<float>(const ModelParams<float>&, std::span<const int>,
                                    std::span<const std::size_t>, std::span<const int>,
                                    Workspace<float>&, TensorStore<float>*, const LossOpts&);
template double loss_and_grad<double>(const ModelParams<double>&, std::span<const int>,
                                      std::span<const std::size_t>, std::span<const int>,
                                      Workspace<double>&, TensorStore<double>*, const LossOpts&);

}  // namespace vmk
