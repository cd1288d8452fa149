#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "pipeforge/common.hpp"
#include "pipeforge/kernels.hpp"

using namespace pipeforge;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.normal() * 3.0;
    return v;
}

}  // namespace

TEST_CASE("dispatched kernels match the scalar reference") {
    Rng rng(42);
    // odd lengths exercise the vector tail paths
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 17u, 64u, 67u, 513u}) {
        std::vector<double> a = random_vec(rng, n);
        std::vector<double> b = random_vec(rng, n);
        const double tol = 1e-12 * (1.0 + static_cast<double>(n));

        CHECK(kernels::dot(a.data(), b.data(), n) ==
              doctest::Approx(kernels::scalar::dot(a.data(), b.data(), n)).epsilon(tol));
        CHECK(kernels::sum(a.data(), n) ==
              doctest::Approx(kernels::scalar::sum(a.data(), n)).epsilon(tol));
        CHECK(kernels::sumsq(a.data(), n) ==
              doctest::Approx(kernels::scalar::sumsq(a.data(), n)).epsilon(tol));
        CHECK(kernels::sq_dist(a.data(), b.data(), n) ==
              doctest::Approx(kernels::scalar::sq_dist(a.data(), b.data(), n)).epsilon(tol));

        std::vector<double> out1(n), out2(n);
        kernels::affine(a.data(), 1.5, -0.25, out1.data(), n);
        kernels::scalar::affine(a.data(), 1.5, -0.25, out2.data(), n);
        // sub+mul only, no reassociation: bit-identical
        CHECK(std::memcmp(out1.data(), out2.data(), n * sizeof(double)) == 0);

        std::vector<double> w1 = b, w2 = b;
        kernels::add_scaled(w1.data(), a.data(), 0.37, n);
        kernels::scalar::add_scaled(w2.data(), a.data(), 0.37, n);
        for (std::size_t i = 0; i < n; ++i) CHECK(w1[i] == doctest::Approx(w2[i]).epsilon(1e-13));
    }
}

TEST_CASE("forcing the scalar backend switches the dispatch") {
    const std::string initial = kernels::active_backend();
    kernels::force_backend(false);
    CHECK(std::string(kernels::active_backend()) == "scalar");
    kernels::force_backend(true);
    // back to whatever cpuid allows
    CHECK(std::string(kernels::active_backend()) == initial);
}

TEST_CASE("kernel edge values") {
    std::vector<double> zeros(9, 0.0);
    CHECK(kernels::sumsq(zeros.data(), zeros.size()) == 0.0);
    std::vector<double> a = {1.0, 2.0, 3.0};
    std::vector<double> b = {4.0, 5.0, 6.0};
    CHECK(kernels::dot(a.data(), b.data(), 3) == doctest::Approx(32.0));
    CHECK(kernels::sq_dist(a.data(), b.data(), 3) == doctest::Approx(27.0));
}
