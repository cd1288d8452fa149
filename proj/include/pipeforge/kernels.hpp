#pragma once

#include <cstddef>

// Dense double-precision inner loops used by the scalers, the SVM trainers and
// the metafeature/covariance accumulators. Each kernel has a scalar reference
// implementation and (on x86-64) an AVX2 variant; the active variant is picked
// once at startup from cpuid. The two variants are equivalence-tested against
// each other.

namespace pipeforge::kernels {

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double sumsq(const double* a, std::size_t n);
double sq_dist(const double* a, const double* b, std::size_t n);
// out[i] = (x[i] - shift) * scale
void affine(const double* x, double shift, double scale, double* out, std::size_t n);
// w[i] += s * x[i]
void add_scaled(double* w, const double* x, double s, std::size_t n);
}  // namespace scalar

#if defined(PIPEFORGE_HAVE_AVX2_TU)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double sumsq(const double* a, std::size_t n);
double sq_dist(const double* a, const double* b, std::size_t n);
void affine(const double* x, double shift, double scale, double* out, std::size_t n);
void add_scaled(double* w, const double* x, double s, std::size_t n);
}  // namespace avx2
#endif

double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double sumsq(const double* a, std::size_t n);
double sq_dist(const double* a, const double* b, std::size_t n);
void affine(const double* x, double shift, double scale, double* out, std::size_t n);
void add_scaled(double* w, const double* x, double s, std::size_t n);

// "avx2" or "scalar"
const char* active_backend();

// Force the scalar path regardless of cpuid; used by the equivalence tests.
void force_backend(bool use_simd);

}  // namespace pipeforge::kernels
