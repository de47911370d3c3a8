#pragma once

#include <cstdint>

#include "vmk/tensor.hpp"

namespace vmk {

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.95;
    double eps = 1e-8;
    double weight_decay = 0.0;
    double clip = 0.0;  // global grad-norm clip, 0 disables
};

template <typename T>
struct AdamState {
    TensorStore<T> m;
    TensorStore<T> v;
    int64_t t = 0;

    static AdamState like(const TensorStore<T>& params) {
        return {params.clone_shape(), params.clone_shape(), 0};
    }
};

template <typename T>
double global_grad_norm(const TensorStore<T>& grads);

// decoupled weight decay; clips grads in place when cfg.clip > 0
template <typename T>
void adamw_step(TensorStore<T>& params, TensorStore<T>& grads, AdamState<T>& state,
                const AdamConfig& cfg);

}  // namespace vmk
