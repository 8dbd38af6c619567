// Compiled with -mavx2 (and without -mfma: the elementwise kernels must round
// exactly like the scalar ones). Only built on x86-64; dispatch.cpp guards use.

#include "fracmono/simd.hpp"

#if defined(FRACMONO_HAVE_AVX2_TU)

#include <immintrin.h>

namespace fracmono::simd {
namespace {

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_add_pd(acc, prod);
    }
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    double sum = (lane[0] + lane[1]) + (lane[2] + lane[3]);
    for (; i < n; ++i) sum += a[i] * b[i];
    return sum;
}

double weighted_dot_avx2(const double* w, const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        prod = _mm256_mul_pd(_mm256_loadu_pd(w + i), prod);
        acc = _mm256_add_pd(acc, prod);
    }
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    double sum = (lane[0] + lane[1]) + (lane[2] + lane[3]);
    for (; i < n; ++i) sum += w[i] * a[i] * b[i];
    return sum;
}

void axpy_avx2(double c, const double* x, double* y, std::size_t n) {
    const __m256d cv = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d prod = _mm256_mul_pd(cv, _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
    }
    for (; i < n; ++i) y[i] = y[i] + c * x[i];
}

void rotate_avx2(double* x, double* y, double c, double s, std::size_t n) {
    const __m256d cv = _mm256_set1_pd(c);
    const __m256d sv = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xv = _mm256_loadu_pd(x + i);
        const __m256d yv = _mm256_loadu_pd(y + i);
        _mm256_storeu_pd(x + i, _mm256_sub_pd(_mm256_mul_pd(cv, xv), _mm256_mul_pd(sv, yv)));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_mul_pd(sv, xv), _mm256_mul_pd(cv, yv)));
    }
    for (; i < n; ++i) {
        const double xi = x[i];
        const double yi = y[i];
        x[i] = c * xi - s * yi;
        y[i] = s * xi + c * yi;
    }
}

} // namespace

const KernelTable* avx2_kernels_or_null() {
    static const KernelTable table{dot_avx2, weighted_dot_avx2, axpy_avx2, rotate_avx2, "avx2"};
    return &table;
}

} // namespace fracmono::simd

#else

namespace fracmono::simd {

const KernelTable* avx2_kernels_or_null() { return nullptr; }

} // namespace fracmono::simd

#endif // FRACMONO_HAVE_AVX2_TU
