#pragma once

#include <complex>
#include <cstddef>
#include <functional>

namespace toruspdo {

using cplx = std::complex<double>;

// Hot inner loops of the toolkit, factored into flat-array kernels so that a
// runtime-dispatched SIMD variant can be substituted for the scalar reference.
//
//   cdotc    sum conj(a[i]) * b[i]            (gram blocks, residuals)
//   cdotu    sum a[i] * b[i]                  (matrix-vector rows)
//   caxpy    y[i] += alpha * x[i]             (banded matrix products)
//   abs_sum  sum |a[i]|                       (Gershgorin radii, Schur sums)
//   sup_abs  max |a[i]|                       (decay profiles)
//   sum_abs2 sum |a[i]|^2                     (L2 norms)
//
// Variants reduce in a different association order than the scalar loop, so
// results agree to rounding, not bitwise; the equivalence tests pin that down.
struct KernelTable {
    cplx (*cdotc)(const cplx* a, const cplx* b, std::size_t n);
    cplx (*cdotu)(const cplx* a, const cplx* b, std::size_t n);
    void (*caxpy)(cplx* y, cplx alpha, const cplx* x, std::size_t n);
    double (*abs_sum)(const cplx* a, std::size_t n);
    double (*sup_abs)(const cplx* a, std::size_t n);
    double (*sum_abs2)(const cplx* a, std::size_t n);
    const char* name;
};

// Scalar reference, always available.
const KernelTable& scalar_kernels();

// AVX2+FMA variant, or nullptr when the binary or the CPU lacks support.
const KernelTable* avx2_kernels();

// Active table. Picked once per process: TORUSPDO_KERNELS=scalar|avx2|auto
// (default auto = best supported). Requesting avx2 on an unsupported CPU
// falls back to scalar.
const KernelTable& kernels();

// Thread budget for column-parallel loops, from TORUSPDO_THREADS (default:
// hardware concurrency, clamped to [1, 16]).
int thread_budget();

// Runs f(i) for i in [begin, end) across the thread budget. Each index must
// write to its own slots only; the split never changes results.
void parallel_for(int begin, int end, const std::function<void(int)>& f);

} // namespace toruspdo
