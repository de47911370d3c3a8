#include "vmk/kernels.hpp"

#include <omp.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "vmk/errors.hpp"
#include "vmk/kernels_impl.hpp"

namespace vmk::kern {

namespace {

bool cpu_has_avx2() {
#if defined(VMK_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa pick_default() {
    if (const char* env = std::getenv("VMK_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
        if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) return Isa::avx2;
    }
    return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa> g_isa{pick_default()};
std::atomic<int> g_threads{0};  // <= 0: leave OpenMP default

template <typename T>
const detail::Ops<T>& ops_for(Isa isa);

template <>
const detail::Ops<float>& ops_for<float>(Isa isa) {
#ifdef VMK_HAVE_AVX2_TU
    if (isa == Isa::avx2) return detail::avx2_ops_f32();
#endif
    (void)isa;
    return detail::scalar_ops_f32();
}

template <>
const detail::Ops<double>& ops_for<double>(Isa isa) {
#ifdef VMK_HAVE_AVX2_TU
    if (isa == Isa::avx2) return detail::avx2_ops_f64();
#endif
    (void)isa;
    return detail::scalar_ops_f64();
}

template <typename T>
const detail::Ops<T>& active_ops() {
    return ops_for<T>(g_isa.load(std::memory_order_relaxed));
}

template <typename T>
std::vector<T>& pack_scratch() {
    static thread_local std::vector<T> buf;
    return buf;
}

// B[N,K] with leading dimension ldb -> dst[K,N] densely packed
template <typename T>
void pack_transpose(const T* b, std::size_t n, std::size_t k, std::size_t ldb, T* dst) {
    for (std::size_t j = 0; j < n; ++j) {
        const T* src = b + j * ldb;
        for (std::size_t kk = 0; kk < k; ++kk) dst[kk * n + j] = src[kk];
    }
}

// Row-parallel driver over the per-ISA gemm_rows kernel. Each output row is
// produced by exactly one thread with a fixed operation order, so results are
// independent of the thread count.
template <typename T>
void gemm_nt_driver(std::size_t m, std::size_t n, std::size_t k,
                    const T* a, std::size_t lda, const T* b, std::size_t ldb,
                    T* c, std::size_t ldc, bool accumulate) {
    if (m == 0 || n == 0) return;
    const auto& ops = active_ops<T>();
    const double work = double(m) * double(n) * double(k);
    int nt = g_threads.load(std::memory_order_relaxed);
    if (nt <= 0) nt = omp_get_max_threads();
    if (work < 65536.0 || m < 2) nt = 1;
    if (nt <= 1) {
        ops.gemm_rows(0, m, n, k, a, lda, b, ldb, c, ldc, accumulate);
        return;
    }
#pragma omp parallel num_threads(nt)
    {
        const std::size_t w = static_cast<std::size_t>(omp_get_thread_num());
        const std::size_t nw = static_cast<std::size_t>(omp_get_num_threads());
        const std::size_t r0 = m * w / nw;
        const std::size_t r1 = m * (w + 1) / nw;
        if (r1 > r0) ops.gemm_rows(r0, r1, n, k, a, lda, b, ldb, c, ldc, accumulate);
    }
}

}  // namespace

bool isa_supported(Isa isa) {
    switch (isa) {
        case Isa::scalar: return true;
        case Isa::avx2: return cpu_has_avx2();
    }
    return false;
}

Isa active_isa() { return g_isa.load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
    if (!isa_supported(isa)) throw ConfigError("kernel ISA not supported on this CPU");
    g_isa.store(isa, std::memory_order_relaxed);
}

const char* isa_name(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "?";
}

void set_threads(int n) {
    g_threads.store(n, std::memory_order_relaxed);
    if (n > 0) omp_set_num_threads(n);
}

int max_threads() {
    int nt = g_threads.load(std::memory_order_relaxed);
    return nt > 0 ? nt : omp_get_max_threads();
}

template <typename T>
T dot(const T* a, const T* b, std::size_t n) {
    return active_ops<T>().dot(a, b, n);
}

template <typename T>
void axpy(T alpha, const T* x, T* y, std::size_t n) {
    active_ops<T>().axpy(alpha, x, y, n);
}

template <typename T>
void scale(T* x, T alpha, std::size_t n) {
    active_ops<T>().scale(x, alpha, n);
}

template <typename T>
T reduce_sum(const T* x, std::size_t n) {
    return active_ops<T>().reduce_sum(x, n);
}

template <typename T>
T reduce_max(const T* x, std::size_t n) {
    return active_ops<T>().reduce_max(x, n);
}

template <typename T>
void gemm_nt(std::size_t m, std::size_t n, std::size_t k,
             const T* a, std::size_t lda, const T* b, std::size_t ldb,
             T* c, std::size_t ldc, bool accumulate) {
    gemm_nt_driver(m, n, k, a, lda, b, ldb, c, ldc, accumulate);
}

// A[M,N]*B[N,K]: pack B^T once, then reuse the row-dot kernel. Pack cost is
// N*K against M*N*K multiplies.
template <typename T>
void gemm_nn(std::size_t m, std::size_t n, std::size_t k,
             const T* a, std::size_t lda, const T* b, std::size_t ldb,
             T* c, std::size_t ldc, bool accumulate) {
    if (m == 0 || k == 0) return;
    auto& scratch = pack_scratch<T>();
    if (scratch.size() < n * k) scratch.resize(n * k);
    pack_transpose(b, n, k, ldb, scratch.data());
    gemm_nt_driver(m, k, n, a, lda, scratch.data(), n, c, ldc, accumulate);
}

// A^T[N,M]*B[M,K]: pack both operands transposed, then row-dots of length M.
template <typename T>
void gemm_tn(std::size_t m, std::size_t n, std::size_t k,
             const T* a, std::size_t lda, const T* b, std::size_t ldb,
             T* c, std::size_t ldc, bool accumulate) {
    if (n == 0 || k == 0) return;
    auto& scratch = pack_scratch<T>();
    if (scratch.size() < m * (n + k)) scratch.resize(m * (n + k));
    T* at = scratch.data();          // [N,M]
    T* bt = scratch.data() + m * n;  // [K,M]
    pack_transpose(a, m, n, lda, at);
    pack_transpose(b, m, k, ldb, bt);
    gemm_nt_driver(n, k, m, at, m, bt, m, c, ldc, accumulate);
}

template <typename T>
void softmax_row(T* x, std::size_t n) {
    const T m = active_ops<T>().reduce_max(x, n);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::exp(x[i] - m);
    const T s = active_ops<T>().reduce_sum(x, n);
    active_ops<T>().scale(x, T(1) / s, n);
}

template float dot<float>(const float*, const float*, std::size_t);
template double dot<double>(const double*, const double*, std::size_t);
template void axpy<float>(float, const float*, float*, std::size_t);
template void axpy<double>(double, const double*, double*, std::size_t);
template void scale<float>(float*, float, std::size_t);
template void scale<double>(double*, double, std::size_t);
template float reduce_sum<float>(const float*, std::size_t);
template double reduce_sum<double>(const double*, std::size_t);
template float reduce_max<float>(const float*, std::size_t);
template double reduce_max<double>(const double*, std::size_t);
template void gemm_nt<float>(std::size_t, std::size_t, std::size_t, const float*, std::size_t,
                             const float*, std::size_t, float*, std::size_t, bool);
template void gemm_nt<double>(std::size_t, std::size_t, std::size_t, const double*, std::size_t,
                              const double*, std::size_t, double*, std::size_t, bool);
template void gemm_nn<float>(std::size_t, std::size_t, std::size_t, const float*, std::size_t,
                             const float*, std::size_t, float*, std::size_t, bool);
template void gemm_nn<double>(std::size_t, std::size_t, std::size_t, const double*, std::size_t,
                              const double*, std::size_t, double*, std::size_t, bool);
template void gemm_tn<float>(std::size_t, std::size_t, std::size_t, const float*, std::size_t,
                             const float*, std::size_t, float*, std::size_t, bool);
template void gemm_tn<double>(std::size_t, std::size_t, std::size_t, const double*, std::size_t,
                              const double*, std::size_t, double*, std::size_t, bool);
template void softmax_row<float>(float*, std::size_t);
template void softmax_row<double>(double*, std::size_t);

}  // namespace vmk::kern
