#include "vmk/kernels_impl.hpp"

namespace vmk::kern::detail {

namespace {

template <typename T>
T dot_s(const T* a, const T* b, std::size_t n) {
    T acc{};
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

template <typename T>
void axpy_s(T alpha, const T* x, T* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

template <typename T>
void scale_s(T* x, T alpha, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

template <typename T>
T reduce_sum_s(const T* x, std::size_t n) {
    T acc{};
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

template <typename T>
T reduce_max_s(const T* x, std::size_t n) {
    T m = x[0];
    for (std::size_t i = 1; i < n; ++i)
        if (x[i] > m) m = x[i];
    return m;
}

template <typename T>
void gemm_rows_s(std::size_t r0, std::size_t r1, std::size_t n, std::size_t k,
                 const T* a, std::size_t lda, const T* b, std::size_t ldb,
                 T* c, std::size_t ldc, bool accumulate) {
    for (std::size_t m = r0; m < r1; ++m) {
        const T* ar = a + m * lda;
        T* cr = c + m * ldc;
        for (std::size_t j = 0; j < n; ++j) {
            T acc = dot_s(ar, b + j * ldb, k);
            cr[j] = accumulate ? cr[j] + acc : acc;
        }
    }
}

}  // namespace

const Ops<float>& scalar_ops_f32() {
    static const Ops<float> ops = {dot_s<float>, axpy_s<float>, scale_s<float>,
                                   reduce_sum_s<float>, reduce_max_s<float>, gemm_rows_s<float>};
    return ops;
}

const Ops<double>& scalar_ops_f64() {
    static const Ops<double> ops = {dot_s<double>, axpy_s<double>, scale_s<double>,
                                    reduce_sum_s<double>, reduce_max_s<double>, gemm_rows_s<double>};
    return ops;
}

}  // namespace vmk::kern::detail
