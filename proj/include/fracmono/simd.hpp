#pragma once

#include <cstddef>

namespace fracmono::simd {

// Hot inner loops of the dense linear algebra, provided in a scalar reference
// version and an AVX2 version selected at runtime.
//
// axpy and rotate are elementwise and use separate multiply/add (no FMA), so the
// two backends produce bit-identical results. dot and weighted_dot are reductions
// with different accumulation trees; backends agree to roundoff, not bitwise.
struct KernelTable {
    double (*dot)(const double* a, const double* b, std::size_t n);
    // sum_i w[i] * a[i] * b[i]
    double (*weighted_dot)(const double* w, const double* a, const double* b, std::size_t n);
    // y[i] += c * x[i]
    void (*axpy)(double c, const double* x, double* y, std::size_t n);
    // Plane rotation: (x[i], y[i]) <- (c*x[i] - s*y[i], s*x[i] + c*y[i])
    void (*rotate)(double* x, double* y, double c, double s, std::size_t n);
    const char* name;
};

const KernelTable& scalar_kernels();

// The AVX2 table when this build contains one, else nullptr. Builds on other
// architectures compile the AVX2 translation unit down to just this stub.
const KernelTable* avx2_kernels_or_null();

bool cpu_has_avx2();

// Active table, resolved once per process. FRACMONO_SIMD=scalar|avx2 overrides
// detection; requesting avx2 on hardware without it falls back to scalar.
const KernelTable& kernels();

} // namespace fracmono::simd
