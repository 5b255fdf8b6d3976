#include "toruspdo/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "toruspdo/errors.hpp"
#include "toruspdo/fourier.hpp"

namespace toruspdo {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void require_windows(std::size_t Q, int K) {
    if (!is_pow2(Q) || Q < 2)
        throw ConfigError("Q must be a power of two >= 2, got " + std::to_string(Q),
                          "symbol_core");
    if (K < 1)
        throw ConfigError("K must be >= 1, got " + std::to_string(K), "symbol_core");
}

void check_finite(const ToroidalGrid& g, const char* what) {
    for (int k = -g.K; k <= g.K; ++k) {
        const cplx* c = g.col(k);
        for (std::size_t q = 0; q < g.Q; ++q) {
            if (!std::isfinite(c[q].real()) || !std::isfinite(c[q].imag()))
                throw NonFiniteSample(std::string(what) + " produced a non-finite value at q=" +
                                      std::to_string(q) + ", k=" + std::to_string(k));
        }
    }
}

// Signed binomial weights of the forward difference:
// coef[h] = (-1)^{t-h} C(t,h). Pascal's triangle keeps them exact.
std::vector<double> signed_binomials(int t) {
    std::vector<double> row(static_cast<std::size_t>(t) + 1, 0.0);
    row[0] = 1.0;
    for (int i = 1; i <= t; ++i)
        for (int h = i; h >= 1; --h) row[h] += row[h - 1];
    for (int h = 0; h <= t; ++h)
        if ((t - h) % 2 != 0) row[h] = -row[h];
    return row;
}

bool column_constant(const cplx* c, std::size_t Q) {
    for (std::size_t q = 1; q < Q; ++q)
        if (c[q] != c[0]) return false;
    return true;
}

double int_pow(double base, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

ToroidalGrid resample(const ToroidalGrid& src, std::size_t Q, int K) {
    if (K > src.K)
        throw WindowTooLarge("requested K=" + std::to_string(K) +
                             " exceeds the sampled window K=" + std::to_string(src.K));
    ToroidalGrid out;
    out.Q = Q;
    out.K = K;
    out.values.assign(Q * static_cast<std::size_t>(2 * K + 1), cplx{});

    const std::size_t Qs = src.Q;
    for (int k = -K; k <= K; ++k) {
        const cplx* in = src.col(k);
        cplx* dst = out.col(k);
        if (Q == Qs) {
            std::copy(in, in + Qs, dst);
        } else if (Q < Qs) {
            const std::size_t stride = Qs / Q;
            for (std::size_t q = 0; q < Q; ++q) dst[q] = in[q * stride];
        } else {
            // Trigonometric interpolation: zero-pad the spectrum, splitting the
            // unmatched Qs/2 mode evenly between +Qs/2 and -Qs/2.
            std::vector<cplx> c(in, in + Qs);
            c = dft_coeffs(std::move(c));
            std::vector<cplx> pad(Q, cplx{});
            for (std::size_t b = 0; b < Qs; ++b) {
                const int m = signed_mode(b, Qs);
                if (Qs >= 2 && b == Qs / 2) {
                    pad[Qs / 2] += c[b] * 0.5;
                    pad[Q - Qs / 2] += c[b] * 0.5;
                } else {
                    pad[(m >= 0) ? static_cast<std::size_t>(m)
                                 : Q - static_cast<std::size_t>(-m)] = c[b];
                }
            }
            pad = dft_synthesis(std::move(pad));
            std::copy(pad.begin(), pad.end(), dst);
        }
    }
    return out;
}

} // namespace

Symbol Symbol::closed_form(const std::string& expr_text) {
    Expr e = Expr::parse(expr_text);
    Symbol s;
    s.kind_ = Kind::ClosedForm;
    s.desc_ = expr_text;
    s.x_free_ = !e.depends_on_x();
    s.eval_ = [e](double x, int k) { return e.eval(x, static_cast<double>(k)); };
    return s;
}

Symbol Symbol::multiplier(const std::string& expr_text) {
    Expr e = Expr::parse(expr_text);
    if (e.depends_on_x())
        throw ParseError("multiplier expression references x: \"" + expr_text + "\"");
    Symbol s;
    s.kind_ = Kind::Multiplier;
    s.desc_ = expr_text;
    s.x_free_ = true;
    s.eval_ = [e](double x, int k) { return e.eval(x, static_cast<double>(k)); };
    return s;
}

Symbol Symbol::closed_form(std::string description, EvalFn f, GridEvalFn g) {
    Symbol s;
    s.kind_ = Kind::ClosedForm;
    s.desc_ = std::move(description);
    s.eval_ = std::move(f);
    s.grid_eval_ = std::move(g);
    return s;
}

Symbol Symbol::multiplier(std::string description, EvalFn f) {
    Symbol s;
    s.kind_ = Kind::Multiplier;
    s.desc_ = std::move(description);
    s.x_free_ = true;
    s.eval_ = std::move(f);
    return s;
}

Symbol Symbol::sampled(ToroidalGrid grid, std::string description) {
    Symbol s;
    s.kind_ = Kind::Sampled;
    s.desc_ = std::move(description);
    s.grid_ = std::make_shared<const ToroidalGrid>(std::move(grid));
    return s;
}

bool Symbol::x_independent() const { return x_free_; }

cplx Symbol::eval(double x, int k) const {
    if (!eval_)
        throw std::logic_error("eval on a sampled symbol; use sample_symbol");
    return eval_(x, k);
}

cplx Symbol::eval_grid(std::size_t q, std::size_t Q, int k) const {
    if (grid_eval_) return grid_eval_(q, Q, k);
    return eval(grid_x(q, Q), k);
}

const ToroidalGrid& Symbol::stored_samples() const {
    if (!grid_)
        throw std::logic_error("stored_samples on a non-sampled symbol");
    return *grid_;
}

ToroidalGrid sample_symbol(const Symbol& sym, std::size_t Q, int K) {
    require_windows(Q, K);

    if (sym.kind() == Symbol::Kind::Sampled) {
        ToroidalGrid g = resample(sym.stored_samples(), Q, K);
        check_finite(g, "resampling");
        return g;
    }

    ToroidalGrid g;
    g.Q = Q;
    g.K = K;
    g.values.resize(Q * static_cast<std::size_t>(2 * K + 1));

    if (sym.x_independent()) {
        for (int k = -K; k <= K; ++k) {
            const cplx v = sym.eval(0.0, k);
            cplx* c = g.col(k);
            std::fill(c, c + Q, v);
        }
    } else {
        parallel_for(-K, K + 1, [&](int k) {
            cplx* c = g.col(k);
            for (std::size_t q = 0; q < Q; ++q) c[q] = sym.eval_grid(q, Q, k);
        });
    }
    check_finite(g, "symbol evaluation");
    return g;
}

FourierTable fourier_table(const ToroidalGrid& grid, int M) {
    if (M < 0)
        throw ConfigError("M must be >= 0, got " + std::to_string(M), "symbol_core");
    if (static_cast<std::size_t>(2 * M + 1) > grid.Q)
        throw WindowTooLarge("2M+1 = " + std::to_string(2 * M + 1) + " exceeds Q = " +
                             std::to_string(grid.Q));

    FourierTable t;
    t.M = M;
    t.K = grid.K;
    t.coeffs.assign(static_cast<std::size_t>(2 * M + 1) * (2 * grid.K + 1), cplx{});

    const std::size_t Q = grid.Q;
    parallel_for(-grid.K, grid.K + 1, [&](int k) {
        const cplx* c = grid.col(k);
        cplx* out = t.col(k);
        if (column_constant(c, Q)) {
            out[M] = c[0];
            return;
        }
        std::vector<cplx> buf(c, c + Q);
        fft_inplace(buf.data(), Q, -1);
        const double inv = 1.0 / static_cast<double>(Q);
        for (int m = -M; m <= M; ++m) {
            const std::size_t b = (m >= 0) ? static_cast<std::size_t>(m)
                                           : Q - static_cast<std::size_t>(-m);
            out[m + M] = buf[b] * inv;
        }
    });
    return t;
}

FourierTable fourier_table(const Symbol& sym, std::size_t Q, int K, int M) {
    return fourier_table(sample_symbol(sym, Q, K), M);
}

ToroidalGrid delta_k(const ToroidalGrid& grid, int t) {
    if (t < 0)
        throw ConfigError("difference order must be >= 0", "symbol_core");
    if (t == 0) return grid;
    if (t > grid.K)
        throw WindowExhausted("difference order t=" + std::to_string(t) +
                              " exceeds the k-window K=" + std::to_string(grid.K));

    const int Kp = grid.K - t;
    ToroidalGrid out;
    out.Q = grid.Q;
    out.K = Kp;
    out.values.assign(grid.Q * static_cast<std::size_t>(2 * Kp + 1), cplx{});

    const std::vector<double> coef = signed_binomials(t);
    const KernelTable& kt = kernels();
    parallel_for(-Kp, Kp + 1, [&](int k) {
        cplx* dst = out.col(k);
        for (int h = 0; h <= t; ++h)
            kt.caxpy(dst, cplx{coef[h], 0.0}, grid.col(k + h), grid.Q);
    });
    return out;
}

FourierTable delta_k(const FourierTable& table, int t) {
    if (t < 0)
        throw ConfigError("difference order must be >= 0", "symbol_core");
    if (t == 0) return table;
    if (t > table.K)
        throw WindowExhausted("difference order t=" + std::to_string(t) +
                              " exceeds the k-window K=" + std::to_string(table.K));

    const int Kp = table.K - t;
    const std::size_t W = static_cast<std::size_t>(2 * table.M + 1);
    FourierTable out;
    out.M = table.M;
    out.K = Kp;
    out.coeffs.assign(W * static_cast<std::size_t>(2 * Kp + 1), cplx{});

    const std::vector<double> coef = signed_binomials(t);
    const KernelTable& kt = kernels();
    parallel_for(-Kp, Kp + 1, [&](int k) {
        cplx* dst = out.col(k);
        for (int h = 0; h <= t; ++h)
            kt.caxpy(dst, cplx{coef[h], 0.0}, table.col(k + h), W);
    });
    return out;
}

ToroidalGrid d_x(const ToroidalGrid& grid, int r) {
    if (r < 0)
        throw ConfigError("derivative order must be >= 0", "symbol_core");
    if (r == 0) return grid;

    const std::size_t Q = grid.Q;
    std::vector<double> factor(Q);
    for (std::size_t b = 0; b < Q; ++b) {
        const int m = signed_mode(b, Q);
        if (b == Q / 2 && r % 2 != 0)
            factor[b] = 0.0; // unmatched mode has no well-defined sign
        else
            factor[b] = int_pow(static_cast<double>(m), r) / static_cast<double>(Q);
    }

    ToroidalGrid out;
    out.Q = Q;
    out.K = grid.K;
    out.values.assign(grid.values.size(), cplx{});

    parallel_for(-grid.K, grid.K + 1, [&](int k) {
        const cplx* c = grid.col(k);
        cplx* dst = out.col(k);
        if (column_constant(c, Q)) return; // derivative of a constant column is exactly zero
        std::vector<cplx> buf(c, c + Q);
        fft_inplace(buf.data(), Q, -1);
        for (std::size_t b = 0; b < Q; ++b) buf[b] *= factor[b];
        fft_inplace(buf.data(), Q, +1);
        std::copy(buf.begin(), buf.end(), dst);
    });
    return out;
}

HormanderReport hormander_estimate(const Symbol& sym, double m, double rho, double delta,
                                   int max_t, int max_r, std::size_t Q, int K) {
    if (max_t < 0 || max_r < 0)
        throw ConfigError("difference/derivative orders must be >= 0", "symbol_core");
    if (max_t > K)
        throw WindowExhausted("max_t=" + std::to_string(max_t) +
                              " exceeds the k-window K=" + std::to_string(K));

    HormanderReport rep;
    rep.order_m = m;
    rep.rho = rho;
    rep.delta = delta;
    rep.max_t = max_t;
    rep.max_r = max_r;

    const ToroidalGrid base = sample_symbol(sym, Q, K);
    for (int r = 0; r <= max_r; ++r) {
        const ToroidalGrid dr = d_x(base, r);
        for (int t = 0; t <= max_t; ++t) {
            const ToroidalGrid g = delta_k(dr, t);
            const std::vector<double> sup = sup_abs_per_k(g);
            const double expo = m - rho * t + delta * r;

            auto c_over = [&](int W) {
                double best = 0.0;
                for (int k = -std::min(W, g.K); k <= std::min(W, g.K); ++k) {
                    const double w = std::pow(std::sqrt(1.0 + double(k) * double(k)), expo);
                    const double v = sup[static_cast<std::size_t>(k + g.K)] / w;
                    if (v > best) best = v;
                }
                return best;
            };

            const double c1 = c_over(g.K / 4);
            const double c2 = c_over(g.K / 2);
            const double c3 = c_over(g.K);
            rep.seminorms[{t, r}] = c3;
            rep.growing[{t, r}] =
                g.K / 4 >= 1 && c1 > 0.0 && c2 > 1.25 * c1 && c3 > 1.25 * c2;
        }
    }
    return rep;
}

std::vector<double> sup_abs_per_k(const ToroidalGrid& grid) {
    std::vector<double> out(static_cast<std::size_t>(2 * grid.K + 1));
    const KernelTable& kt = kernels();
    parallel_for(-grid.K, grid.K + 1, [&](int k) {
        out[static_cast<std::size_t>(k + grid.K)] = kt.sup_abs(grid.col(k), grid.Q);
    });
    return out;
}

Symbol make_jump_symbol() {
    auto f = [](double x, int k) -> cplx {
        double u = std::fmod(x, two_pi);
        if (u < 0.0) u += two_pi;
        const int a = k < 0 ? -k : k;
        return {u < std::ldexp(two_pi, -a) ? 1.0 : 0.0, 0.0};
    };
    auto g = [](std::size_t q, std::size_t Q, int k) -> cplx {
        // x_q < 2 pi / 2^|k|  <=>  q * 2^|k| < Q, decided in exact integers
        const unsigned a = static_cast<unsigned>(k < 0 ? -k : k);
        const std::size_t slots = a < 63 ? (Q >> a) : 0;
        return {(slots == 0 ? q == 0 : q < slots) ? 1.0 : 0.0, 0.0};
    };
    return Symbol::closed_form("jump indicator [0, 2pi/2^|k|)", std::move(f), std::move(g));
}

namespace {

// Rademacher r_n at x: +1 on the first half of each period of 2^{n-1} x,
// -1 on the second, 0 at the switch points.
double rademacher_frac(double y) {
    y -= std::floor(y);
    if (y == 0.0 || y == 0.5) return 0.0;
    return y < 0.5 ? 1.0 : -1.0;
}

double rademacher_at_x(double x, int n) {
    double t = x / two_pi;
    t -= std::floor(t);
    return rademacher_frac(std::ldexp(t, n - 1));
}

// Exact at grid rationals: frac(2^{n-1} q / Q) has denominator Q (a power of
// two), so the sign is an integer comparison.
double rademacher_at_q(std::size_t q, std::size_t Q, int n) {
    const unsigned sh = n - 1 < 63 ? static_cast<unsigned>(n - 1) : 63u;
    const std::size_t v = (q << sh) & (Q - 1);
    if (v == 0 || 2 * v == Q) return 0.0;
    return 2 * v < Q ? 1.0 : -1.0;
}

struct SingularTerm {
    double a; // left endpoint 2 pi / 2^{n+2} of the dyadic interval
    double w; // weight 2^{(n+2)(p-1)/2}
};

cplx singular_eval(const std::vector<SingularTerm>& terms, int k,
                   const std::function<double(int n)>& rad, double x) {
    cplx s{0.0, 0.0};
    if (k == 0) {
        for (std::size_t i = 0; i < terms.size(); ++i)
            s += terms[i].w * (-terms[i].a) * rad(static_cast<int>(i) + 1);
        return s;
    }
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const cplx e = std::polar(1.0, -double(k) * terms[i].a);
        s += terms[i].w * e * (e - 1.0) * rad(static_cast<int>(i) + 1);
    }
    return s * std::polar(1.0, -x * double(k)) / cplx{0.0, double(k)};
}

} // namespace

Symbol make_singular_symbol(double p, int terms) {
    if (terms < 1)
        throw ConfigError("the Rademacher series needs at least one term", "symbol_core");
    auto tv = std::make_shared<std::vector<SingularTerm>>();
    tv->reserve(static_cast<std::size_t>(terms));
    for (int n = 1; n <= terms; ++n)
        tv->push_back({std::ldexp(two_pi, -(n + 2)),
                       std::exp2(0.5 * (n + 2) * (p - 1.0))});

    auto f = [tv](double x, int k) -> cplx {
        return singular_eval(*tv, k, [x](int n) { return rademacher_at_x(x, n); }, x);
    };
    auto g = [tv](std::size_t q, std::size_t Q, int k) -> cplx {
        return singular_eval(*tv, k,
                             [q, Q](int n) { return rademacher_at_q(q, Q, n); },
                             grid_x(q, Q));
    };
    return Symbol::closed_form("singular Rademacher series (p=" + std::to_string(p) +
                               ", terms=" + std::to_string(terms) + ")",
                               std::move(f), std::move(g));
}

} // namespace toruspdo
