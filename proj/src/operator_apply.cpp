#include "toruspdo/operator_apply.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "toruspdo/errors.hpp"
#include "toruspdo/fourier.hpp"

namespace toruspdo {

namespace {

void require_samples(const PeriodicFunction& f) {
    if (f.samples.empty())
        throw ConfigError("function carries no samples", "operator_apply");
    if (!is_pow2(f.samples.size()))
        throw ConfigError("sample count must be a power of two", "operator_apply");
}

} // namespace

PeriodicFunction PeriodicFunction::from_samples(std::vector<cplx> samples) {
    if (!is_pow2(samples.size()))
        throw ConfigError("sample count must be a nonzero power of two", "operator_apply");
    PeriodicFunction f;
    f.Q = samples.size();
    f.samples = std::move(samples);
    return f;
}

PeriodicFunction PeriodicFunction::from_coeffs(std::size_t Q, const CoeffVector& coeffs) {
    if (!is_pow2(Q) || static_cast<std::size_t>(2 * coeffs.n + 1) > Q) {
        std::ostringstream os;
        os << "coefficient window " << 2 * coeffs.n + 1 << " does not fit Q=" << Q;
        throw WindowTooLarge(os.str(), "operator_apply");
    }
    PeriodicFunction f;
    f.Q = Q;
    f.coeffs = coeffs.values;
    f.coeff_n = coeffs.n;
    std::vector<cplx> bins(Q);
    for (int k = -coeffs.n; k <= coeffs.n; ++k)
        bins[static_cast<std::size_t>((k + static_cast<int>(Q)) % static_cast<int>(Q))] =
            coeffs.at(k);
    f.samples = dft_synthesis(bins);
    return f;
}

CoeffVector forward_coeffs(const PeriodicFunction& f, int n) {
    if (n < 0) throw ConfigError("coefficient window must be >= 0", "operator_apply");
    CoeffVector out;
    out.n = n;
    out.values.assign(static_cast<std::size_t>(2 * n + 1), cplx{});
    if (f.coeff_n >= 0) {
        // band-limited by construction: slice what is stored, zero-pad past it
        const int m = std::min(n, f.coeff_n);
        for (int k = -m; k <= m; ++k)
            out.at(k) = f.coeffs[static_cast<std::size_t>(k + f.coeff_n)];
        return out;
    }
    require_samples(f);
    const std::size_t Q = f.samples.size();
    if (static_cast<std::size_t>(2 * n + 1) > Q) {
        std::ostringstream os;
        os << "window 2n+1=" << 2 * n + 1 << " exceeds sample count Q=" << Q;
        throw WindowTooLarge(os.str(), "operator_apply");
    }
    const std::vector<cplx> c = dft_coeffs(f.samples);
    for (int k = -n; k <= n; ++k)
        out.at(k) = c[static_cast<std::size_t>((k + static_cast<int>(Q)) %
                                               static_cast<int>(Q))];
    return out;
}

PeriodicFunction apply_operator(const Symbol& sym, const PeriodicFunction& f, int n) {
    PeriodicFunction in = f;
    if (in.samples.empty() && in.coeff_n >= 0) in = PeriodicFunction::from_coeffs(f.Q, CoeffVector{f.coeff_n, f.coeffs});
    require_samples(in);
    const std::size_t Q = in.samples.size();
    if (n < 0 || static_cast<std::size_t>(2 * n + 1) > Q) {
        std::ostringstream os;
        os << "mode window 2n+1=" << 2 * n + 1 << " exceeds sample count Q=" << Q;
        throw WindowTooLarge(os.str(), "operator_apply");
    }

    const std::vector<cplx> spectrum = dft_coeffs(in.samples);
    CoeffVector fc;
    fc.n = n;
    fc.values.assign(static_cast<std::size_t>(2 * n + 1), cplx{});
    double dropped = 0.0;
    for (std::size_t b = 0; b < Q; ++b) {
        const int m = signed_mode(b, Q);
        if (std::abs(m) <= n)
            fc.at(m) = spectrum[b];
        else
            dropped += std::norm(spectrum[b]);
    }

    const ToroidalGrid grid = sample_symbol(sym, Q, n);
    std::vector<cplx> roots(Q);
    for (std::size_t r = 0; r < Q; ++r) roots[r] = std::polar(1.0, grid_x(r, Q));

    PeriodicFunction out;
    out.Q = Q;
    out.dropped_tail = std::sqrt(dropped);
    out.samples.assign(Q, cplx{});
    const long long lq = static_cast<long long>(Q);
    parallel_for(0, static_cast<int>(Q), [&](int qi) {
        const long long q = qi;
        cplx acc{};
        for (int k = -n; k <= n; ++k) {
            const long long r = ((q * k) % lq + lq) % lq;
            acc += grid.at(static_cast<std::size_t>(q), k) * fc.at(k) *
                   roots[static_cast<std::size_t>(r)];
        }
        out.samples[static_cast<std::size_t>(q)] = acc;
    });
    return out;
}

double matrix_consistency_residual(const Symbol& sym, const PeriodicFunction& f, int n,
                                   int M) {
    if (M < 0) M = n;
    PeriodicFunction in = f;
    if (in.samples.empty() && in.coeff_n >= 0) in = PeriodicFunction::from_coeffs(f.Q, CoeffVector{f.coeff_n, f.coeffs});
    require_samples(in);
    const std::size_t Q = in.samples.size();
    if (Q < static_cast<std::size_t>(2 * (M + n) + 1)) {
        std::ostringstream os;
        os << "Q=" << Q << " is not alias-free for M=" << M << ", n=" << n;
        throw WindowTooSmall(os.str(), "operator_apply");
    }

    const PeriodicFunction g = apply_operator(sym, in, n);
    const CoeffVector ga = forward_coeffs(g, n);

    const FourierTable table = fourier_table(sym, Q, n, M);
    const AssocMatrix mat = build_assoc_matrix(table, n);
    const CoeffVector mb = apply(mat, forward_coeffs(in, n));

    const int t = n - mat.band;
    if (t < 0)
        throw WindowTooSmall("no output mode is fully resolved by the window",
                             "operator_apply");
    double num = 0.0;
    double den = 0.0;
    for (int j = -t; j <= t; ++j) {
        num += std::norm(ga.at(j) - mb.at(j));
        den += std::norm(mb.at(j));
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

} // namespace toruspdo
