#include "pipeforge/kernels.hpp"

#include <atomic>

namespace pipeforge::kernels {

namespace scalar {

double dot(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double sum(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i];
    return acc;
}

double sumsq(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * a[i];
    return acc;
}

double sq_dist(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

void affine(const double* x, double shift, double scale, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = (x[i] - shift) * scale;
}

void add_scaled(double* w, const double* x, double s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) w[i] += s * x[i];
}

}  // namespace scalar

namespace {

bool cpu_has_avx2() {
#if defined(PIPEFORGE_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

std::atomic<bool> g_use_simd{cpu_has_avx2()};

}  // namespace

void force_backend(bool use_simd) { g_use_simd.store(use_simd && cpu_has_avx2()); }

const char* active_backend() { return g_use_simd.load() ? "avx2" : "scalar"; }

#if defined(PIPEFORGE_HAVE_AVX2_TU)

double dot(const double* a, const double* b, std::size_t n) {
    return g_use_simd.load(std::memory_order_relaxed) ? avx2::dot(a, b, n) : scalar::dot(a, b, n);
}
double sum(const double* a, std::size_t n) {
    return g_use_simd.load(std::memory_order_relaxed) ? avx2::sum(a, n) : scalar::sum(a, n);
}
double sumsq(const double* a, std::size_t n) {
    return g_use_simd.load(std::memory_order_relaxed) ? avx2::sumsq(a, n) : scalar::sumsq(a, n);
}
double sq_dist(const double* a, const double* b, std::size_t n) {
    return g_use_simd.load(std::memory_order_relaxed) ? avx2::sq_dist(a, b, n)
                                                      : scalar::sq_dist(a, b, n);
}
void affine(const double* x, double shift, double scale, double* out, std::size_t n) {
    if (g_use_simd.load(std::memory_order_relaxed))
        avx2::affine(x, shift, scale, out, n);
    else
        scalar::affine(x, shift, scale, out, n);
}
void add_scaled(double* w, const double* x, double s, std::size_t n) {
    if (g_use_simd.load(std::memory_order_relaxed))
        avx2::add_scaled(w, x, s, n);
    else
        scalar::add_scaled(w, x, s, n);
}

#else

double dot(const double* a, const double* b, std::size_t n) { return scalar::dot(a, b, n); }
double sum(const double* a, std::size_t n) { return scalar::sum(a, n); }
double sumsq(const double* a, std::size_t n) { return scalar::sumsq(a, n); }
double sq_dist(const double* a, const double* b, std::size_t n) {
    return scalar::sq_dist(a, b, n);
}
void affine(const double* x, double shift, double scale, double* out, std::size_t n) {
    scalar::affine(x, shift, scale, out, n);
}
void add_scaled(double* w, const double* x, double s, std::size_t n) {
    scalar::add_scaled(w, x, s, n);
}

#endif

}  // namespace pipeforge::kernels
