#pragma once

#include <cstddef>

// Internal: per-ISA entry points shared between the dispatch driver and the
// ISA translation units. Not part of the public surface.
namespace vmk::kern::detail {

template <typename T>
struct Ops {
    T (*dot)(const T*, const T*, std::size_t);
    void (*axpy)(T, const T*, T*, std::size_t);
    void (*scale)(T*, T, std::size_t);
    T (*reduce_sum)(const T*, std::size_t);
    T (*reduce_max)(const T*, std::size_t);
    // rows [r0,r1) of C[M,N] (+)= A[M,K] * B[N,K]^T
    void (*gemm_rows)(std::size_t r0, std::size_t r1, std::size_t n, std::size_t k,
                      const T* a, std::size_t lda, const T* b, std::size_t ldb,
                      T* c, std::size_t ldc, bool accumulate);
};

const Ops<float>& scalar_ops_f32();
const Ops<double>& scalar_ops_f64();

#ifdef VMK_HAVE_AVX2_TU
const Ops<float>& avx2_ops_f32();
const Ops<double>& avx2_ops_f64();
#endif

}  // namespace vmk::kern::detail
