#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fracmono/rng.hpp"
#include "fracmono/simd.hpp"

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

using namespace fracmono;

namespace {

const std::size_t lengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 13, 16, 31, 64, 100, 257};

std::vector<double> random_vec(Rng& rng, std::size_t n, double lo = -2.0, double hi = 2.0) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(lo, hi);
    return v;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

} // namespace

TEST_CASE("active kernel table is consistent with the platform") {
    const auto& table = simd::kernels();
    const std::string name = table.name;
    CHECK((name == "scalar" || name == "avx2"));
    if (name == "avx2") {
        CHECK(simd::cpu_has_avx2());
        CHECK(simd::avx2_kernels_or_null() != nullptr);
    }
    // Resolution is cached: same table every call.
    CHECK(&simd::kernels() == &table);
}

TEST_CASE("scalar kernels match a plain loop") {
    const auto& sc = simd::scalar_kernels();
    Rng rng(7);
    for (const std::size_t n : lengths) {
        const auto a = random_vec(rng, n);
        const auto b = random_vec(rng, n);
        double expect = 0.0;
        for (std::size_t i = 0; i < n; ++i) expect += a[i] * b[i];
        CHECK(sc.dot(a.data(), b.data(), n) == doctest::Approx(expect).epsilon(1e-14));
    }
}

TEST_CASE("avx2 elementwise kernels are bit-identical to scalar") {
    const simd::KernelTable* avx2 = simd::avx2_kernels_or_null();
    if (avx2 == nullptr || !simd::cpu_has_avx2()) {
        MESSAGE("AVX2 unavailable here; skipping");
        return;
    }
    const auto& sc = simd::scalar_kernels();
    Rng rng(11);
    for (const std::size_t n : lengths) {
        const auto x = random_vec(rng, n);
        const double c = rng.uniform(-3.0, 3.0);

        auto y_sc = random_vec(rng, n);
        auto y_av = y_sc;
        sc.axpy(c, x.data(), y_sc.data(), n);
        avx2->axpy(c, x.data(), y_av.data(), n);
        CHECK(bitwise_equal(y_sc, y_av));

        const double phi = rng.uniform(0.0, 6.28);
        const double rc = std::cos(phi), rs = std::sin(phi);
        auto xs = x, ys = y_sc;
        auto xa = x, ya = y_sc;
        sc.rotate(xs.data(), ys.data(), rc, rs, n);
        avx2->rotate(xa.data(), ya.data(), rc, rs, n);
        CHECK(bitwise_equal(xs, xa));
        CHECK(bitwise_equal(ys, ya));
    }
}

TEST_CASE("avx2 reductions agree with scalar to accumulation roundoff") {
    const simd::KernelTable* avx2 = simd::avx2_kernels_or_null();
    if (avx2 == nullptr || !simd::cpu_has_avx2()) {
        MESSAGE("AVX2 unavailable here; skipping");
        return;
    }
    const auto& sc = simd::scalar_kernels();
    Rng rng(13);
    for (const std::size_t n : lengths) {
        const auto a = random_vec(rng, n);
        const auto b = random_vec(rng, n);
        const auto w = random_vec(rng, n, 0.0, 1.5);

        double scale = 1e-30;
        for (std::size_t i = 0; i < n; ++i) scale += std::abs(a[i] * b[i]);

        const double d_sc = sc.dot(a.data(), b.data(), n);
        const double d_av = avx2->dot(a.data(), b.data(), n);
        CHECK(std::abs(d_sc - d_av) <= 1e-13 * scale);

        const double wd_sc = sc.weighted_dot(w.data(), a.data(), b.data(), n);
        const double wd_av = avx2->weighted_dot(w.data(), a.data(), b.data(), n);
        CHECK(std::abs(wd_sc - wd_av) <= 1e-13 * scale);

        // Reductions are deterministic for fixed inputs.
        CHECK(avx2->dot(a.data(), b.data(), n) == d_av);
        CHECK(avx2->weighted_dot(w.data(), a.data(), b.data(), n) == wd_av);
    }
}

TEST_CASE("weighted_dot reduces to dot when the weight is one") {
    const auto& sc = simd::scalar_kernels();
    Rng rng(17);
    const auto a = random_vec(rng, 37);
    const auto b = random_vec(rng, 37);
    const std::vector<double> w(37, 1.0);
    CHECK(sc.weighted_dot(w.data(), a.data(), b.data(), 37) ==
          doctest::Approx(sc.dot(a.data(), b.data(), 37)).epsilon(1e-14));
}
