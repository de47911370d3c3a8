// AVX2+FMA kernel variants. This TU is the only one compiled with -mavx2;
// callers reach it through the runtime dispatch table.
#include "vmk/kernels_impl.hpp"

#include <immintrin.h>

namespace vmk::kern::detail {

namespace {

inline float hsum(__m256 v) {
    __m128 lo = _mm256_castps256_ps128(v);
    __m128 hi = _mm256_extractf128_ps(v, 1);
    lo = _mm_add_ps(lo, hi);
    lo = _mm_add_ps(lo, _mm_movehl_ps(lo, lo));
    lo = _mm_add_ss(lo, _mm_shuffle_ps(lo, lo, 0x55));
    return _mm_cvtss_f32(lo);
}

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
}

float dot_v(const float* a, const float* b, std::size_t n) {
    __m256 acc0 = _mm256_setzero_ps();
    __m256 acc1 = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
        acc1 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i + 8), _mm256_loadu_ps(b + i + 8), acc1);
    }
    for (; i + 8 <= n; i += 8)
        acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
    float s = hsum(_mm256_add_ps(acc0, acc1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double dot_v(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_v(float alpha, const float* x, float* y, std::size_t n) {
    const __m256 va = _mm256_set1_ps(alpha);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 vy = _mm256_loadu_ps(y + i);
        vy = _mm256_fmadd_ps(va, _mm256_loadu_ps(x + i), vy);
        _mm256_storeu_ps(y + i, vy);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void axpy_v(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale_v(float* x, float alpha, std::size_t n) {
    const __m256 va = _mm256_set1_ps(alpha);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8)
        _mm256_storeu_ps(x + i, _mm256_mul_ps(va, _mm256_loadu_ps(x + i)));
    for (; i < n; ++i) x[i] *= alpha;
}

void scale_v(double* x, double alpha, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) x[i] *= alpha;
}

float reduce_sum_v(const float* x, std::size_t n) {
    __m256 acc = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) acc = _mm256_add_ps(acc, _mm256_loadu_ps(x + i));
    float s = hsum(acc);
    for (; i < n; ++i) s += x[i];
    return s;
}

double reduce_sum_v(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i];
    return s;
}

float reduce_max_v(const float* x, std::size_t n) {
    float m = x[0];
    std::size_t i = 0;
    if (n >= 8) {
        __m256 vm = _mm256_loadu_ps(x);
        for (i = 8; i + 8 <= n; i += 8) vm = _mm256_max_ps(vm, _mm256_loadu_ps(x + i));
        alignas(32) float tmp[8];
        _mm256_store_ps(tmp, vm);
        m = tmp[0];
        for (int j = 1; j < 8; ++j)
            if (tmp[j] > m) m = tmp[j];
    }
    for (; i < n; ++i)
        if (x[i] > m) m = x[i];
    return m;
}

double reduce_max_v(const double* x, std::size_t n) {
    double m = x[0];
    std::size_t i = 0;
    if (n >= 4) {
        __m256d vm = _mm256_loadu_pd(x);
        for (i = 4; i + 4 <= n; i += 4) vm = _mm256_max_pd(vm, _mm256_loadu_pd(x + i));
        alignas(32) double tmp[4];
        _mm256_store_pd(tmp, vm);
        m = tmp[0];
        for (int j = 1; j < 4; ++j)
            if (tmp[j] > m) m = tmp[j];
    }
    for (; i < n; ++i)
        if (x[i] > m) m = x[i];
    return m;
}

// 1x4 microkernel: one A row against four B rows keeps the A loads amortized.
void gemm_rows_v(std::size_t r0, std::size_t r1, std::size_t n, std::size_t k,
                 const float* a, std::size_t lda, const float* b, std::size_t ldb,
                 float* c, std::size_t ldc, bool accumulate) {
    for (std::size_t m = r0; m < r1; ++m) {
        const float* ar = a + m * lda;
        float* cr = c + m * ldc;
        std::size_t j = 0;
        for (; j + 4 <= n; j += 4) {
            const float* b0 = b + j * ldb;
            const float* b1 = b0 + ldb;
            const float* b2 = b1 + ldb;
            const float* b3 = b2 + ldb;
            __m256 s0 = _mm256_setzero_ps(), s1 = _mm256_setzero_ps();
            __m256 s2 = _mm256_setzero_ps(), s3 = _mm256_setzero_ps();
            std::size_t kk = 0;
            for (; kk + 8 <= k; kk += 8) {
                const __m256 va = _mm256_loadu_ps(ar + kk);
                s0 = _mm256_fmadd_ps(va, _mm256_loadu_ps(b0 + kk), s0);
                s1 = _mm256_fmadd_ps(va, _mm256_loadu_ps(b1 + kk), s1);
                s2 = _mm256_fmadd_ps(va, _mm256_loadu_ps(b2 + kk), s2);
                s3 = _mm256_fmadd_ps(va, _mm256_loadu_ps(b3 + kk), s3);
            }
            float r0v = hsum(s0), r1v = hsum(s1), r2v = hsum(s2), r3v = hsum(s3);
            for (; kk < k; ++kk) {
                const float av = ar[kk];
                r0v += av * b0[kk];
                r1v += av * b1[kk];
                r2v += av * b2[kk];
                r3v += av * b3[kk];
            }
            if (accumulate) {
                cr[j] += r0v;
                cr[j + 1] += r1v;
                cr[j + 2] += r2v;
                cr[j + 3] += r3v;
            } else {
                cr[j] = r0v;
                cr[j + 1] = r1v;
                cr[j + 2] = r2v;
                cr[j + 3] = r3v;
            }
        }
        for (; j < n; ++j) {
            float acc = dot_v(ar, b + j * ldb, k);
            cr[j] = accumulate ? cr[j] + acc : acc;
        }
    }
}

void gemm_rows_v(std::size_t r0, std::size_t r1, std::size_t n, std::size_t k,
                 const double* a, std::size_t lda, const double* b, std::size_t ldb,
                 double* c, std::size_t ldc, bool accumulate) {
    for (std::size_t m = r0; m < r1; ++m) {
        const double* ar = a + m * lda;
        double* cr = c + m * ldc;
        std::size_t j = 0;
        for (; j + 4 <= n; j += 4) {
            const double* b0 = b + j * ldb;
            const double* b1 = b0 + ldb;
            const double* b2 = b1 + ldb;
            const double* b3 = b2 + ldb;
            __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
            __m256d s2 = _mm256_setzero_pd(), s3 = _mm256_setzero_pd();
            std::size_t kk = 0;
            for (; kk + 4 <= k; kk += 4) {
                const __m256d va = _mm256_loadu_pd(ar + kk);
                s0 = _mm256_fmadd_pd(va, _mm256_loadu_pd(b0 + kk), s0);
                s1 = _mm256_fmadd_pd(va, _mm256_loadu_pd(b1 + kk), s1);
                s2 = _mm256_fmadd_pd(va, _mm256_loadu_pd(b2 + kk), s2);
                s3 = _mm256_fmadd_pd(va, _mm256_loadu_pd(b3 + kk), s3);
            }
            double r0v = hsum(s0), r1v = hsum(s1), r2v = hsum(s2), r3v = hsum(s3);
            for (; kk < k; ++kk) {
                const double av = ar[kk];
                r0v += av * b0[kk];
                r1v += av * b1[kk];
                r2v += av * b2[kk];
                r3v += av * b3[kk];
            }
            if (accumulate) {
                cr[j] += r0v;
                cr[j + 1] += r1v;
                cr[j + 2] += r2v;
                cr[j + 3] += r3v;
            } else {
                cr[j] = r0v;
                cr[j + 1] = r1v;
                cr[j + 2] = r2v;
                cr[j + 3] = r3v;
            }
        }
        for (; j < n; ++j) {
            double acc = dot_v(ar, b + j * ldb, k);
            cr[j] = accumulate ? cr[j] + acc : acc;
        }
    }
}

}  // namespace

const Ops<float>& avx2_ops_f32() {
    static const Ops<float> ops = {
        static_cast<float (*)(const float*, const float*, std::size_t)>(dot_v),
        static_cast<void (*)(float, const float*, float*, std::size_t)>(axpy_v),
        static_cast<void (*)(float*, float, std::size_t)>(scale_v),
        static_cast<float (*)(const float*, std::size_t)>(reduce_sum_v),
        static_cast<float (*)(const float*, std::size_t)>(reduce_max_v),
        static_cast<void (*)(std::size_t, std::size_t, std::size_t, std::size_t, const float*,
                             std::size_t, const float*, std::size_t, float*, std::size_t, bool)>(
            gemm_rows_v)};
    return ops;
}

const Ops<double>& avx2_ops_f64() {
    static const Ops<double> ops = {
        static_cast<double (*)(const double*, const double*, std::size_t)>(dot_v),
        static_cast<void (*)(double, const double*, double*, std::size_t)>(axpy_v),
        static_cast<void (*)(double*, double, std::size_t)>(scale_v),
        static_cast<double (*)(const double*, std::size_t)>(reduce_sum_v),
        static_cast<double (*)(const double*, std::size_t)>(reduce_max_v),
        static_cast<void (*)(std::size_t, std::size_t, std::size_t, std::size_t, const double*,
                             std::size_t, const double*, std::size_t, double*, std::size_t, bool)>(
            gemm_rows_v)};
    return ops;
}

}  // namespace vmk::kern::detail
