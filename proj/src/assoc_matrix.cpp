#include "toruspdo/assoc_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "toruspdo/errors.hpp"

namespace toruspdo {

namespace {

int effective_band(const FourierTable& t) {
    double peak = 0.0;
    for (const cplx& c : t.coeffs)
        peak = std::max(peak, std::abs(c));
    if (peak == 0.0) return 0;
    const double cut = 1e-14 * peak;
    for (int m = t.M; m >= 1; --m) {
        for (int k = -t.K; k <= t.K; ++k) {
            if (std::abs(t.at(m, k)) > cut || std::abs(t.at(-m, k)) > cut)
                return m;
        }
    }
    return 0;
}

} // namespace

AssocMatrix build_assoc_matrix(const FourierTable& table, int n) {
    if (n < 0)
        throw ConfigError("window radius must be >= 0", "assoc_matrix");
    if (n > table.K)
        throw WindowTooSmall("matrix window n=" + std::to_string(n) +
                             " exceeds the table window K=" + std::to_string(table.K),
                             "assoc_matrix");

    AssocMatrix m;
    m.n = n;
    m.band = std::min(effective_band(table), 2 * n);
    m.trusted = n;
    m.entries.assign(static_cast<std::size_t>(m.dim()) * m.dim(), cplx{});

    for (int j = -n; j <= n; ++j) {
        for (int k = std::max(-n, j - m.band); k <= std::min(n, j + m.band); ++k) {
            if (std::abs(j - k) <= table.M)
                m.at(j, k) = table.at(j - k, k);
        }
    }
    return m;
}

AssocMatrix adjoint(const AssocMatrix& m) {
    AssocMatrix out;
    out.n = m.n;
    out.band = m.band;
    out.trusted = m.trusted;
    out.entries.resize(m.entries.size());
    for (int j = -m.n; j <= m.n; ++j)
        for (int k = -m.n; k <= m.n; ++k)
            out.at(j, k) = std::conj(m.at(k, j));
    return out;
}

AssocMatrix matmul(const AssocMatrix& a, const AssocMatrix& b) {
    if (a.n != b.n)
        throw WindowMismatch("matmul windows differ: " + std::to_string(a.n) + " vs " +
                             std::to_string(b.n));
    const int n = a.n;
    AssocMatrix out;
    out.n = n;
    out.band = std::min(a.band + b.band, 2 * n);
    out.trusted = std::min(a.trusted, b.trusted) - std::min(a.band, b.band);
    out.entries.assign(static_cast<std::size_t>(out.dim()) * out.dim(), cplx{});

    const KernelTable& kt = kernels();
    const std::size_t dim = static_cast<std::size_t>(out.dim());
    parallel_for(-n, n + 1, [&](int j) {
        cplx* dst = out.row(j);
        const int lo = std::max(-n, j - a.band);
        const int hi = std::min(n, j + a.band);
        for (int h = lo; h <= hi; ++h) {
            const cplx w = a.at(j, h);
            if (w == cplx{}) continue;
            kt.caxpy(dst, w, b.row(h), dim);
        }
    });
    return out;
}

CoeffVector apply(const AssocMatrix& m, const CoeffVector& v) {
    if (m.n != v.n)
        throw WindowMismatch("matrix window " + std::to_string(m.n) +
                             " does not match vector window " + std::to_string(v.n));
    CoeffVector out;
    out.n = m.n;
    out.values.resize(static_cast<std::size_t>(m.dim()));
    const KernelTable& kt = kernels();
    for (int j = -m.n; j <= m.n; ++j)
        out.at(j) = kt.cdotu(m.row(j), v.values.data(), static_cast<std::size_t>(m.dim()));
    return out;
}

DenseBlock gram_block(const FourierTable& table, const ToroidalGrid& grid, int n) {
    if (n < 0)
        throw ConfigError("window radius must be >= 0", "assoc_matrix");
    if (n > grid.K || n > table.K)
        throw WindowTooSmall("gram window n=" + std::to_string(n) +
                             " exceeds the symbol window K=" +
                             std::to_string(std::min(grid.K, table.K)),
                             "assoc_matrix");
    if (grid.Q < static_cast<std::size_t>(2 * (table.M + n) + 1))
        throw WindowTooSmall("Q=" + std::to_string(grid.Q) +
                             " is below the alias-free bound 2(M+n)+1=" +
                             std::to_string(2 * (table.M + n) + 1),
                             "assoc_matrix");

    const std::size_t Q = grid.Q;
    const int dim = 2 * n + 1;

    std::vector<cplx> roots(Q);
    for (std::size_t r = 0; r < Q; ++r)
        roots[r] = std::polar(1.0, grid_x(r, Q));

    // f_j(q) = sigma(x_q, j) e^{i x_q j}, rows contiguous
    std::vector<cplx> f(static_cast<std::size_t>(dim) * Q);
    parallel_for(-n, n + 1, [&](int j) {
        const cplx* c = grid.col(j);
        cplx* dst = f.data() + static_cast<std::size_t>(j + n) * Q;
        for (std::size_t q = 0; q < Q; ++q) {
            long long r = (static_cast<long long>(q) * j) % static_cast<long long>(Q);
            if (r < 0) r += static_cast<long long>(Q);
            dst[q] = c[q] * roots[static_cast<std::size_t>(r)];
        }
    });

    DenseBlock block;
    block.n = n;
    block.entries.resize(static_cast<std::size_t>(dim) * dim);
    const double inv = 1.0 / static_cast<double>(Q);
    const KernelTable& kt = kernels();
    parallel_for(-n, n + 1, [&](int j) {
        const cplx* fj = f.data() + static_cast<std::size_t>(j + n) * Q;
        for (int k = -n; k <= n; ++k) {
            const cplx* fk = f.data() + static_cast<std::size_t>(k + n) * Q;
            block.at(j, k) = kt.cdotc(fj, fk, Q) * inv;
        }
    });
    return block;
}

} // namespace toruspdo
