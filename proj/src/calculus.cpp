#include "toruspdo/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "toruspdo/errors.hpp"
#include "toruspdo/fourier.hpp"

namespace toruspdo {

namespace {

// exact through 20!, rejected beyond
double inv_factorial(int h) {
    unsigned long long f = 1;
    for (int i = 2; i <= h; ++i) f *= static_cast<unsigned long long>(i);
    return 1.0 / static_cast<double>(f);
}

void check_order(int n) {
    if (n < 1 || n > 20)
        throw ConfigError("expansion order must lie in [1, 20] (exact factorials)",
                          "calculus");
}

ToroidalGrid shrink_k(const ToroidalGrid& g, int K2) {
    if (K2 == g.K) return g;
    ToroidalGrid out;
    out.Q = g.Q;
    out.K = K2;
    out.values.resize(static_cast<std::size_t>(2 * K2 + 1) * g.Q);
    for (int k = -K2; k <= K2; ++k)
        std::copy(g.col(k), g.col(k) + g.Q, out.col(k));
    return out;
}

bool all_zero(const ToroidalGrid& g) {
    for (const cplx& z : g.values)
        if (z != cplx{}) return false;
    return true;
}

double sup_term(const ToroidalGrid& da, const ToroidalGrid& db, double coef, int K2) {
    double s = 0.0;
    for (int k = -K2; k <= K2; ++k) {
        const cplx* ca = da.col(k);
        const cplx* cb = db.col(k);
        for (std::size_t q = 0; q < da.Q; ++q)
            s = std::max(s, std::abs(ca[q] * cb[q]));
    }
    return s * coef;
}

// shared core: alpha supplies the k-differences, beta the x-derivatives
ExpansionResult compose_grids(const ToroidalGrid& ga, const ToroidalGrid& gb, int N) {
    if (ga.Q != gb.Q || ga.K != gb.K) {
        std::ostringstream os;
        os << "factors sampled on different grids: Q " << ga.Q << " vs " << gb.Q
           << ", K " << ga.K << " vs " << gb.K;
        throw WindowMismatch(os.str(), "calculus");
    }
    check_order(N);
    if (ga.K < N) {
        std::ostringstream os;
        os << "expansion order " << N << " exhausts the k-window K=" << ga.K;
        throw WindowExhausted(os.str(), "calculus");
    }

    const int K2 = ga.K - N;
    ExpansionResult res;
    res.order_N = N;
    res.symbol_grid.Q = ga.Q;
    res.symbol_grid.K = K2;
    res.symbol_grid.values.assign(static_cast<std::size_t>(2 * K2 + 1) * ga.Q, cplx{});

    for (int h = 0; h <= N; ++h) {
        const ToroidalGrid da = delta_k(ga, h);
        const ToroidalGrid db = d_x(gb, h);
        if (all_zero(da) || all_zero(db)) continue;
        const double coef = inv_factorial(h);
        if (h == N) {
            res.remainder_proxy = sup_term(da, db, coef, K2);
            break;
        }
        for (int k = -K2; k <= K2; ++k) {
            const cplx* ca = da.col(k);
            const cplx* cb = db.col(k);
            cplx* out = res.symbol_grid.col(k);
            for (std::size_t q = 0; q < ga.Q; ++q) out[q] += coef * (ca[q] * cb[q]);
        }
    }
    return res;
}

} // namespace

ExpansionResult compose_asymptotic(const Symbol& alpha, const Symbol& beta, int N,
                                   std::size_t Q, int K) {
    return compose_grids(sample_symbol(alpha, Q, K), sample_symbol(beta, Q, K), N);
}

ExpansionResult adjoint_asymptotic(const Symbol& sigma, int N, std::size_t Q, int K) {
    check_order(N);
    if (K < N) {
        std::ostringstream os;
        os << "expansion order " << N << " exhausts the k-window K=" << K;
        throw WindowExhausted(os.str(), "calculus");
    }
    ToroidalGrid gs = sample_symbol(sigma, Q, K);
    for (cplx& z : gs.values) z = std::conj(z);

    const int K2 = K - N;
    ExpansionResult res;
    res.order_N = N;
    res.symbol_grid.Q = Q;
    res.symbol_grid.K = K2;
    res.symbol_grid.values.assign(static_cast<std::size_t>(2 * K2 + 1) * Q, cplx{});

    const cplx iu{0.0, 1.0};
    cplx phase{1.0, 0.0}; // i^h
    for (int h = 0; h <= N; ++h) {
        const ToroidalGrid dd = delta_k(d_x(gs, h), h);
        if (!all_zero(dd)) {
            const cplx coef = phase * inv_factorial(h);
            if (h == N) {
                double s = 0.0;
                for (int k = -K2; k <= K2; ++k) {
                    const cplx* c = dd.col(k);
                    for (std::size_t q = 0; q < Q; ++q) s = std::max(s, std::abs(c[q]));
                }
                res.remainder_proxy = s * std::abs(coef);
                break;
            }
            for (int k = -K2; k <= K2; ++k) {
                const cplx* c = dd.col(k);
                cplx* out = res.symbol_grid.col(k);
                for (std::size_t q = 0; q < Q; ++q) out[q] += coef * c[q];
            }
        }
        phase *= iu;
    }
    return res;
}

AssocMatrix compose_exact_matrix(const Symbol& alpha, const Symbol& beta, int n,
                                 std::size_t Q) {
    if (n < 0) throw ConfigError("window n must be >= 0", "calculus");
    const int half = static_cast<int>(Q / 2) - 1;
    const int M = std::min(2 * n, std::max(half, 0));
    const FourierTable ta = fourier_table(alpha, Q, n, M);
    const FourierTable tb = fourier_table(beta, Q, n, M);
    return matmul(build_assoc_matrix(ta, n), build_assoc_matrix(tb, n));
}

ToroidalGrid symbol_from_matrix(const AssocMatrix& matrix, std::size_t Q) {
    if (!is_pow2(Q) || static_cast<int>(Q) < 2 * matrix.band + 1) {
        std::ostringstream os;
        os << "Q=" << Q << " cannot carry band " << matrix.band;
        throw ConfigError(os.str(), "calculus");
    }
    const int n = matrix.n;
    ToroidalGrid grid;
    grid.Q = Q;
    grid.K = n;
    grid.values.resize(static_cast<std::size_t>(2 * n + 1) * Q);
    std::vector<cplx> bins(Q);
    for (int k = -n; k <= n; ++k) {
        std::fill(bins.begin(), bins.end(), cplx{});
        for (int m = -matrix.band; m <= matrix.band; ++m) {
            if (std::abs(k + m) > n) continue;
            const std::size_t b =
                static_cast<std::size_t>((m % static_cast<int>(Q) + static_cast<int>(Q)) %
                                         static_cast<int>(Q));
            bins[b] = matrix.at(k + m, k);
        }
        const std::vector<cplx> col = dft_synthesis(bins);
        std::copy(col.begin(), col.end(), grid.col(k));
    }
    return grid;
}

ExpansionResult symbol_power(const Symbol& sigma, int n_pow, int N, std::size_t Q, int K) {
    if (n_pow < 1) throw ConfigError("power must be >= 1", "calculus");
    check_order(N);

    const ToroidalGrid base = sample_symbol(sigma, Q, K);
    double bound = 0.0;
    for (const cplx& z : base.values) bound = std::max(bound, std::abs(z));

    ExpansionResult res;
    res.order_N = N;
    res.uniform_bound = bound;
    ToroidalGrid acc = base;
    for (int i = 2; i <= n_pow; ++i) {
        ExpansionResult step = compose_grids(shrink_k(base, acc.K), acc, N);
        acc = std::move(step.symbol_grid);
        res.remainder_proxy = std::max(res.remainder_proxy, step.remainder_proxy);
    }
    res.symbol_grid = std::move(acc);

    // leading term: the plain pointwise power, folded in the same order as the
    // iterated composition so multiplier symbols match it bit for bit
    const int K2 = res.symbol_grid.K;
    res.leading_term.Q = Q;
    res.leading_term.K = K2;
    res.leading_term.values.resize(static_cast<std::size_t>(2 * K2 + 1) * Q);
    for (int k = -K2; k <= K2; ++k) {
        const cplx* src = base.col(k);
        cplx* dst = res.leading_term.col(k);
        for (std::size_t q = 0; q < Q; ++q) {
            cplx v = src[q];
            for (int i = 2; i <= n_pow; ++i) v = src[q] * v;
            dst[q] = v;
        }
    }
    return res;
}

} // namespace toruspdo
