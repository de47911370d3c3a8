#pragma once

#include <cstddef>

namespace vmk::kern {

// Arithmetic inner loops, dispatched at runtime between a scalar reference
// implementation and AVX2 variants. The two are equivalence-tested; anything
// built on top of this header is ISA-agnostic.
enum class Isa { scalar, avx2 };

bool isa_supported(Isa isa);
Isa active_isa();
void set_isa(Isa isa);  // throws ConfigError if unsupported
const char* isa_name(Isa isa);

// thread cap for the row-parallel gemm driver; <= 0 restores the OpenMP default
void set_threads(int n);
int max_threads();

template <typename T> T dot(const T* a, const T* b, std::size_t n);
template <typename T> void axpy(T alpha, const T* x, T* y, std::size_t n);  // y += alpha*x
template <typename T> void scale(T* x, T alpha, std::size_t n);
template <typename T> T reduce_sum(const T* x, std::size_t n);
template <typename T> T reduce_max(const T* x, std::size_t n);

// C[M,N] (+)= A[M,K] * B[N,K]^T   (rows of A dotted with rows of B)
template <typename T>
void gemm_nt(std::size_t m, std::size_t n, std::size_t k,
             const T* a, std::size_t lda, const T* b, std::size_t ldb,
             T* c, std::size_t ldc, bool accumulate);

// C[M,K] (+)= A[M,N] * B[N,K]
template <typename T>
void gemm_nn(std::size_t m, std::size_t n, std::size_t k,
             const T* a, std::size_t lda, const T* b, std::size_t ldb,
             T* c, std::size_t ldc, bool accumulate);

// C[N,K] (+)= A[M,N]^T * B[M,K]
template <typename T>
void gemm_tn(std::size_t m, std::size_t n, std::size_t k,
             const T* a, std::size_t lda, const T* b, std::size_t ldb,
             T* c, std::size_t ldc, bool accumulate);

// numerically-stable in-place softmax of one row
template <typename T> void softmax_row(T* x, std::size_t n);

}  // namespace vmk::kern
