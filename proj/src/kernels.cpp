#include "toruspdo/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace toruspdo {

namespace {

cplx scalar_cdotc(const cplx* a, const cplx* b, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        re += ar * br + ai * bi;
        im += ar * bi - ai * br;
    }
    return {re, im};
}

cplx scalar_cdotu(const cplx* a, const cplx* b, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        re += ar * br - ai * bi;
        im += ar * bi + ai * br;
    }
    return {re, im};
}

void scalar_caxpy(cplx* y, cplx alpha, const cplx* x, std::size_t n) {
    const double cr = alpha.real(), ci = alpha.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] += cplx{cr * xr - ci * xi, cr * xi + ci * xr};
    }
}

double scalar_abs_sum(const cplx* a, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        s += std::hypot(a[i].real(), a[i].imag());
    return s;
}

double scalar_sup_abs(const cplx* a, std::size_t n) {
    double m2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
        if (v > m2) m2 = v;
    }
    return std::sqrt(m2);
}

double scalar_sum_abs2(const cplx* a, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        s += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
    return s;
}

const KernelTable scalar_table = {
    scalar_cdotc, scalar_cdotu, scalar_caxpy,
    scalar_abs_sum, scalar_sup_abs, scalar_sum_abs2,
    "scalar",
};

const KernelTable* select_table() {
    const char* env = std::getenv("TORUSPDO_KERNELS");
    const std::string want = env ? env : "auto";
    if (want == "scalar") return &scalar_table;
    const KernelTable* avx2 = avx2_kernels();
    if (want == "avx2") return avx2 ? avx2 : &scalar_table;
    return avx2 ? avx2 : &scalar_table;
}

} // namespace

const KernelTable& scalar_kernels() { return scalar_table; }

const KernelTable& kernels() {
    static const KernelTable* active = select_table();
    return *active;
}

int thread_budget() {
    static const int budget = [] {
        int n = static_cast<int>(std::thread::hardware_concurrency());
        if (n < 1) n = 1;
        if (const char* env = std::getenv("TORUSPDO_THREADS")) {
            char* end = nullptr;
            const long v = std::strtol(env, &end, 10);
            if (end && *end == '\0' && v >= 1) n = static_cast<int>(v);
        }
        return std::clamp(n, 1, 16);
    }();
    return budget;
}

void parallel_for(int begin, int end, const std::function<void(int)>& f) {
    const int count = end - begin;
    const int workers = std::min(thread_budget(), count);
    if (workers <= 1 || count < 4) {
        for (int i = begin; i < end; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (int i = begin + w; i < end; i += workers) f(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace toruspdo
