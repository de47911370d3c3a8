#include "vmk/optim.hpp"

#include <cmath>

#include "vmk/errors.hpp"
#include "vmk/kernels.hpp"

namespace vmk {

template <typename T>
double global_grad_norm(const TensorStore<T>& grads) {
    const T* g = grads.data.data();
    const double sq = static_cast<double>(kern::dot(g, g, grads.data.size()));
    return std::sqrt(sq);
}

template <typename T>
void adamw_step(TensorStore<T>& params, TensorStore<T>& grads, AdamState<T>& state,
                const AdamConfig& cfg) {
    if (params.total_size() != grads.total_size() || params.total_size() != state.m.total_size())
        throw ShapeError("optimizer state does not match parameter layout");

    if (cfg.clip > 0.0) {
        const double norm = global_grad_norm(grads);
        if (norm > cfg.clip)
            kern::scale(grads.data.data(), static_cast<T>(cfg.clip / norm), grads.data.size());
    }

    state.t += 1;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));

    T* p = params.data.data();
    T* g = grads.data.data();
    T* m = state.m.data.data();
    T* v = state.v.data.data();
    const std::size_t n = params.total_size();
    for (std::size_t i = 0; i < n; ++i) {
        const double gi = static_cast<double>(g[i]);
        const double mi = cfg.beta1 * static_cast<double>(m[i]) + (1.0 - cfg.beta1) * gi;
        const double vi = cfg.beta2 * static_cast<double>(v[i]) + (1.0 - cfg.beta2) * gi * gi;
        m[i] = static_cast<T>(mi);
        v[i] = static_cast<T>(vi);
        const double mhat = mi / bc1;
        const double vhat = vi / bc2;
        const double step = mhat / (std::sqrt(vhat) + cfg.eps) + cfg.weight_decay * static_cast<double>(p[i]);
        p[i] = static_cast<T>(static_cast<double>(p[i]) - cfg.lr * step);
    }
}

template double global_grad_norm<float>(const TensorStore<float>&);
template double global_grad_norm<double>(const TensorStore<double>&);
template void adamw_step<float>(TensorStore<float>&, TensorStore<float>&, AdamState<float>&,
                                const AdamConfig&);
template void adamw_step<double>(TensorStore<double>&, TensorStore<double>&, AdamState<double>&,
                                 const AdamConfig&);

}  // namespace vmk
