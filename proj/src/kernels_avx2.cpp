#include "pipeforge/kernels.hpp"

#include <immintrin.h>

// AVX2/FMA variants. Horizontal reductions use a fixed lane order so results
// are reproducible run-to-run on the same machine.

namespace pipeforge::kernels::avx2 {

namespace {

inline double hadd4(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d s = _mm_add_pd(lo, hi);
    __m128d shuf = _mm_unpackhi_pd(s, s);
    return _mm_cvtsd_f64(_mm_add_sd(s, shuf));
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += a[i] * b[i];
    return hadd4(acc) + tail;
}

double sum(const double* a, std::size_t n) {
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
    double tail = 0.0;
    for (; i < n; ++i) tail += a[i];
    return hadd4(acc) + tail;
}

double sumsq(const double* a, std::size_t n) {
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(a + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += a[i] * a[i];
    return hadd4(acc) + tail;
}

double sq_dist(const double* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double tail = 0.0;
    for (; i < n; ++i) {
        double d = a[i] - b[i];
        tail += d * d;
    }
    return hadd4(acc) + tail;
}

void affine(const double* x, double shift, double scale, double* out, std::size_t n) {
    std::size_t i = 0;
    const __m256d sh = _mm256_set1_pd(shift);
    const __m256d sc = _mm256_set1_pd(scale);
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_sub_pd(_mm256_loadu_pd(x + i), sh);
        _mm256_storeu_pd(out + i, _mm256_mul_pd(v, sc));
    }
    for (; i < n; ++i) out[i] = (x[i] - shift) * scale;
}

void add_scaled(double* w, const double* x, double s, std::size_t n) {
    std::size_t i = 0;
    const __m256d sv = _mm256_set1_pd(s);
    for (; i + 4 <= n; i += 4) {
        __m256d acc = _mm256_fmadd_pd(sv, _mm256_loadu_pd(x + i), _mm256_loadu_pd(w + i));
        _mm256_storeu_pd(w + i, acc);
    }
    for (; i < n; ++i) w[i] += s * x[i];
}

}  // namespace pipeforge::kernels::avx2
