// AVX2+FMA kernel variants. Compiled with -mavx2 -mfma on x86_64; on other
// targets this translation unit compiles to a stub returning nullptr.

#include "toruspdo/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <cmath>

namespace toruspdo {
namespace {

inline double hsum4(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline double hmax4(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_max_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// Adds the two complex lanes of v; lane layout [re0, im0, re1, im1].
inline cplx hsum_cplx(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return {_mm_cvtsd_f64(lo), _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo))};
}

cplx avx2_cdotc(const cplx* a, const cplx* b, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    __m256d acc1 = _mm256_setzero_pd();
    __m256d acc2 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(pa + 2 * i);
        const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        const __m256d a_re = _mm256_movedup_pd(va);
        const __m256d a_im = _mm256_permute_pd(va, 0xF);
        const __m256d b_sw = _mm256_permute_pd(vb, 0x5);
        acc1 = _mm256_fmadd_pd(a_re, vb, acc1);
        acc2 = _mm256_fmadd_pd(a_im, b_sw, acc2);
    }
    // even lanes: re = ar*br + ai*bi, odd lanes: im = ar*bi - ai*br
    const __m256d ones = _mm256_set1_pd(1.0);
    cplx s = hsum_cplx(_mm256_fmsubadd_pd(ones, acc1, acc2));
    for (; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        s += cplx{ar * br + ai * bi, ar * bi - ai * br};
    }
    return s;
}

cplx avx2_cdotu(const cplx* a, const cplx* b, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    __m256d acc1 = _mm256_setzero_pd();
    __m256d acc2 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(pa + 2 * i);
        const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        const __m256d a_re = _mm256_movedup_pd(va);
        const __m256d a_im = _mm256_permute_pd(va, 0xF);
        const __m256d b_sw = _mm256_permute_pd(vb, 0x5);
        acc1 = _mm256_fmadd_pd(a_re, vb, acc1);
        acc2 = _mm256_fmadd_pd(a_im, b_sw, acc2);
    }
    const __m256d ones = _mm256_set1_pd(1.0);
    cplx s = hsum_cplx(_mm256_fmaddsub_pd(ones, acc1, acc2));
    for (; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        s += cplx{ar * br - ai * bi, ar * bi + ai * br};
    }
    return s;
}

void avx2_caxpy(cplx* y, cplx alpha, const cplx* x, std::size_t n) {
    double* py = reinterpret_cast<double*>(y);
    const double* px = reinterpret_cast<const double*>(x);
    const __m256d a_re = _mm256_set1_pd(alpha.real());
    const __m256d a_im = _mm256_set1_pd(alpha.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d vx = _mm256_loadu_pd(px + 2 * i);
        const __m256d x_sw = _mm256_permute_pd(vx, 0x5);
        const __m256d contrib = _mm256_fmaddsub_pd(a_re, vx, _mm256_mul_pd(a_im, x_sw));
        _mm256_storeu_pd(py + 2 * i, _mm256_add_pd(_mm256_loadu_pd(py + 2 * i), contrib));
    }
    const double cr = alpha.real(), ci = alpha.imag();
    for (; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] += cplx{cr * xr - ci * xi, cr * xi + ci * xr};
    }
}

double avx2_abs_sum(const cplx* a, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v1 = _mm256_loadu_pd(pa + 2 * i);
        const __m256d v2 = _mm256_loadu_pd(pa + 2 * i + 4);
        const __m256d s1 = _mm256_mul_pd(v1, v1);
        const __m256d s2 = _mm256_mul_pd(v2, v2);
        // hadd pairs within 128-bit halves: [|z0|^2, |z2|^2, |z1|^2, |z3|^2]
        acc = _mm256_add_pd(acc, _mm256_sqrt_pd(_mm256_hadd_pd(s1, s2)));
    }
    double s = hsum4(acc);
    for (; i < n; ++i) {
        const double re = a[i].real(), im = a[i].imag();
        s += std::sqrt(re * re + im * im);
    }
    return s;
}

double avx2_sup_abs(const cplx* a, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v1 = _mm256_loadu_pd(pa + 2 * i);
        const __m256d v2 = _mm256_loadu_pd(pa + 2 * i + 4);
        const __m256d s1 = _mm256_mul_pd(v1, v1);
        const __m256d s2 = _mm256_mul_pd(v2, v2);
        acc = _mm256_max_pd(acc, _mm256_hadd_pd(s1, s2));
    }
    double m2 = hmax4(acc);
    for (; i < n; ++i) {
        const double v = a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
        if (v > m2) m2 = v;
    }
    return std::sqrt(m2);
}

double avx2_sum_abs2(const cplx* a, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d v = _mm256_loadu_pd(pa + 2 * i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double s = hsum4(acc);
    for (; i < n; ++i)
        s += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
    return s;
}

const KernelTable avx2_table = {
    avx2_cdotc, avx2_cdotu, avx2_caxpy,
    avx2_abs_sum, avx2_sup_abs, avx2_sum_abs2,
    "avx2",
};

} // namespace

const KernelTable* avx2_kernels() {
    static const KernelTable* table = [] () -> const KernelTable* {
        if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
            return &avx2_table;
        return nullptr;
    }();
    return table;
}

} // namespace toruspdo

#else

namespace toruspdo {
const KernelTable* avx2_kernels() { return nullptr; }
} // namespace toruspdo

#endif
